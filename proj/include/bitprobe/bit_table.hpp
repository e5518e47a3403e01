#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bitprobe {

// The stored bit string x(S). Bit index 0 renders leftmost in text form;
// the binary file format packs bits little-endian within each byte.
class BitTable {
 public:
  BitTable() = default;
  explicit BitTable(size_t size) : bits_(size, 0) {}

  size_t size() const { return bits_.size(); }
  int get(size_t i) const;
  void set(size_t i, int bit);

  std::string to_string() const;
  static BitTable from_string(const std::string& s);

  // Lexicographic index over bit strings: "000" < "001" < "010" < ...,
  // i.e. bit 0 is the most significant digit.
  uint64_t lex_index() const;
  static BitTable from_lex_index(uint64_t index, size_t size);

  std::vector<uint8_t> packed() const;
  static BitTable from_packed(const std::vector<uint8_t>& bytes, size_t size);

  // Table file format: "bitprobe-table v1 s=<int>" then hex-encoded packed bits.
  void save(std::ostream& os) const;
  static BitTable load(std::istream& is);

  bool operator==(const BitTable&) const = default;

 private:
  std::vector<uint8_t> bits_;
};

// Counts probes made through it; all query paths read tables via a reader so
// probe accounting is structural rather than declared.
struct TableReader {
  const BitTable& table;
  size_t reads = 0;

  explicit TableReader(const BitTable& t) : table(t) {}
  int get(size_t i) {
    ++reads;
    return table.get(i);
  }
};

}  // namespace bitprobe
