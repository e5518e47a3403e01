#include "bitprobe/bit_table.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bitprobe {

int BitTable::get(size_t i) const {
  if (i >= bits_.size()) throw std::out_of_range("BitTable::get: index " + std::to_string(i));
  return bits_[i];
}

void BitTable::set(size_t i, int bit) {
  if (i >= bits_.size()) throw std::out_of_range("BitTable::set: index " + std::to_string(i));
  if (bit != 0 && bit != 1) throw std::invalid_argument("BitTable::set: bit must be 0 or 1");
  bits_[i] = static_cast<uint8_t>(bit);
}

std::string BitTable::to_string() const {
  std::string s(bits_.size(), '0');
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

BitTable BitTable::from_string(const std::string& s) {
  BitTable t(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      t.bits_[i] = 1;
    else if (s[i] != '0')
      throw std::invalid_argument("BitTable::from_string: invalid character");
  }
  return t;
}

uint64_t BitTable::lex_index() const {
  if (bits_.size() > 63) throw std::invalid_argument("BitTable::lex_index: table longer than 63 bits");
  uint64_t v = 0;
  for (uint8_t b : bits_) v = (v << 1) | b;
  return v;
}

BitTable BitTable::from_lex_index(uint64_t index, size_t size) {
  if (size > 63) throw std::invalid_argument("BitTable::from_lex_index: size too large");
  BitTable t(size);
  for (size_t j = 0; j < size; ++j) t.bits_[j] = (index >> (size - 1 - j)) & 1;
  return t;
}

std::vector<uint8_t> BitTable::packed() const {
  std::vector<uint8_t> bytes((bits_.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) bytes[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  return bytes;
}

BitTable BitTable::from_packed(const std::vector<uint8_t>& bytes, size_t size) {
  if (bytes.size() != (size + 7) / 8)
    throw std::invalid_argument("BitTable::from_packed: byte count does not match size");
  BitTable t(size);
  for (size_t i = 0; i < size; ++i) t.bits_[i] = (bytes[i / 8] >> (i % 8)) & 1;
  return t;
}

void BitTable::save(std::ostream& os) const {
  os << "bitprobe-table v1 s=" << bits_.size() << "\n";
  static const char* hex = "0123456789abcdef";
  for (uint8_t b : packed()) os << hex[b >> 4] << hex[b & 0xF];
  os << "\n";
}

BitTable BitTable::load(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("table file: missing header");
  const std::string magic = "bitprobe-table v1 s=";
  if (header.rfind(magic, 0) != 0) throw std::runtime_error("table file: bad header: " + header);
  size_t size = 0;
  try {
    size = std::stoull(header.substr(magic.size()));
  } catch (const std::exception&) {
    throw std::runtime_error("table file: bad size field");
  }
  std::string hex;
  if (!std::getline(is, hex)) throw std::runtime_error("table file: missing payload");
  if (hex.size() != 2 * ((size + 7) / 8)) throw std::runtime_error("table file: payload length mismatch");
  std::vector<uint8_t> bytes(hex.size() / 2);
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::runtime_error("table file: invalid hex");
  };
  for (size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  return from_packed(bytes, size);
}

}  // namespace bitprobe
