#include "bitprobe/report.hpp"

#include <sstream>
#include <stdexcept>

namespace bitprobe::report {

Report::Report(std::string suite, std::string command, Json params, uint64_t seed)
    : suite_(std::move(suite)), command_(std::move(command)), params_(std::move(params)), seed_(seed) {}

void Report::add(Outcome outcome) { outcomes_.push_back(std::move(outcome)); }

bool Report::all_pass() const {
  for (const auto& outcome : outcomes_)
    if (!outcome.pass) return false;
  return true;
}

Json Report::to_json() const {
  Json doc;
  doc["schema"] = kSchemaVersion;
  doc["suite"] = suite_;
  doc["command"] = command_;
  doc["params"] = params_;
  doc["seed"] = seed_;
  doc["pass"] = all_pass();
  Json outcomes = Json::array();
  for (const auto& outcome : outcomes_) {
    Json o;
    o["criterion"] = outcome.criterion;
    o["pass"] = outcome.pass;
    if (!outcome.measured.is_null()) o["measured"] = outcome.measured;
    if (!outcome.bound.is_null()) o["bound"] = outcome.bound;
    if (!outcome.tolerance.is_null()) o["tolerance"] = outcome.tolerance;
    if (!outcome.details.is_null()) o["details"] = outcome.details;
    outcomes.push_back(std::move(o));
  }
  doc["outcomes"] = std::move(outcomes);
  doc["wall_ms"] = wall_ms_;
  return doc;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

namespace {

void check_schema(const Json& doc) {
  if (!doc.contains("schema") || doc.at("schema").get<std::string>() != kSchemaVersion)
    throw std::runtime_error("report: schema version mismatch");
}

Json strip_timing(Json doc) {
  doc.erase("wall_ms");
  return doc;
}

}  // namespace

Json merge_reports(const std::vector<Json>& reports) {
  Json merged;
  merged["schema"] = kSchemaVersion;
  Json rows = Json::object();
  for (const auto& doc : reports) {
    check_schema(doc);
    std::string key = doc.at("suite").get<std::string>() + " " + doc.at("params").dump();
    Json payload = strip_timing(doc);
    if (rows.contains(key)) {
      if (rows.at(key) != payload)
        throw std::runtime_error("merge_reports: duplicate key with differing payloads: " + key);
    } else {
      rows[key] = std::move(payload);
    }
  }
  merged["rows"] = std::move(rows);
  return merged;
}

namespace {

std::string csv_escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell(const Json& value) {
  if (value.is_null()) return "";
  if (value.is_string()) return csv_escape(value.get<std::string>());
  return csv_escape(value.dump());
}

}  // namespace

std::string render_csv(const Json& merged) {
  check_schema(merged);
  std::ostringstream os;
  os << "suite,criterion,pass,measured,bound,tolerance,seed,params\n";
  for (const auto& [key, doc] : merged.at("rows").items()) {
    const std::string suite = doc.at("suite").get<std::string>();
    const std::string params = doc.at("params").dump();
    const uint64_t seed = doc.at("seed").get<uint64_t>();
    for (const auto& outcome : doc.at("outcomes")) {
      os << csv_escape(suite) << ',' << cell(outcome.at("criterion")) << ','
         << (outcome.at("pass").get<bool>() ? "true" : "false") << ','
         << cell(outcome.contains("measured") ? outcome.at("measured") : Json()) << ','
         << cell(outcome.contains("bound") ? outcome.at("bound") : Json()) << ','
         << cell(outcome.contains("tolerance") ? outcome.at("tolerance") : Json()) << ',' << seed
         << ',' << csv_escape(params) << '\n';
    }
  }
  return os.str();
}

}  // namespace bitprobe::report
