#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace bitprobe::report {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "bitprobe-report v1";

// One verification/bench outcome. `measured`, `bound` and `tolerance` are
// serialized with full precision so identical runs produce identical bytes.
struct Outcome {
  std::string criterion;
  bool pass = false;
  Json measured;
  Json bound;
  Json tolerance;
  Json details;
};

class Report {
 public:
  Report(std::string suite, std::string command, Json params, uint64_t seed);

  void add(Outcome outcome);
  bool all_pass() const;
  // wall-clock lives in a single top-level field, excluded from the
  // determinism contract
  void set_wall_ms(double ms) { wall_ms_ = ms; }

  Json to_json() const;
  std::string dump() const;

 private:
  std::string suite_;
  std::string command_;
  Json params_;
  uint64_t seed_;
  std::vector<Outcome> outcomes_;
  double wall_ms_ = 0.0;
};

// Merges report documents into one row table keyed by (suite, params);
// duplicate keys with differing payloads are an error.
Json merge_reports(const std::vector<Json>& reports);

// Frozen CSV column order:
// suite,criterion,pass,measured,bound,tolerance,seed,params
std::string render_csv(const Json& merged);

}  // namespace bitprobe::report
