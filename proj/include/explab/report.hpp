#pragma once

// Report plumbing: 12-significant-digit float formatting so CSV output
// diffs cleanly across runs, JSON suite reports, and gap-baseline
// comparison for regression guarding.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "explab/sl2_lab.hpp"

namespace explab {

using Json = nlohmann::ordered_json;

inline std::string format_sig(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

struct SuiteReport {
  std::string command;
  Json config = Json::object();
  std::vector<Json> records;
  bool pass = true;
  double elapsed_seconds = 0;

  void add(Json record, bool record_pass) {
    record["pass"] = record_pass;
    records.push_back(std::move(record));
    pass = pass && record_pass;
  }
};

inline Json report_to_json(const SuiteReport& r) {
  Json j;
  j["tool"] = "expander-lab";
  j["version"] = "0.1.0";
  j["command"] = r.command;
  j["config"] = r.config;
  j["records"] = r.records;
  j["pass"] = r.pass;
  j["elapsed_seconds"] = format_sig(r.elapsed_seconds, 6);
  return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return Json::parse(in);
}

// ---------------------------------------------------------------------------
// gap survey serialization and the committed baseline

inline std::string sl2_gap_csv(const std::vector<SelbergGapRecord>& records) {
  std::ostringstream out;
  out << "p,n,second_eigenvalue,gap\n";
  for (const auto& r : records)
    out << r.p << "," << r.n << "," << format_sig(r.second_eigenvalue) << "," << format_sig(r.gap) << "\n";
  return out.str();
}

inline Json sl2_gap_baseline_json(const std::vector<SelbergGapRecord>& records, SigmaVariant variant) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "sl2_gap_baseline";
  j["sigma"] = to_string(variant);
  Json entries = Json::array();
  for (const auto& r : records) entries.push_back({{"p", r.p}, {"gap", r.gap}});
  j["entries"] = entries;
  return j;
}

struct BaselineDiff {
  struct Regression {
    std::int64_t p = 0;
    double baseline_gap = 0;
    double new_gap = 0;
  };
  std::vector<Regression> regressions;
  std::vector<std::int64_t> additions;  // new primes, reported but not failures
  std::vector<std::int64_t> missing;    // baseline primes absent from the run
  bool ok() const { return regressions.empty(); }
};

// Flags every gap that shrank below its recorded baseline minus tolerance.
inline BaselineDiff compare_gap_baseline(const std::vector<SelbergGapRecord>& records,
                                         const Json& baseline, double tolerance = 1e-9) {
  if (!baseline.contains("schema_version") || baseline["schema_version"].get<int>() != 1 ||
      baseline.value("kind", "") != "sl2_gap_baseline")
    throw std::domain_error("baseline: unsupported schema");
  BaselineDiff diff;
  std::vector<std::pair<std::int64_t, double>> base;
  for (const auto& e : baseline["entries"]) base.emplace_back(e["p"].get<std::int64_t>(), e["gap"].get<double>());
  for (const auto& r : records) {
    bool found = false;
    for (const auto& [p, gap] : base) {
      if (p != r.p) continue;
      found = true;
      if (r.gap < gap - tolerance) diff.regressions.push_back({p, gap, r.gap});
      break;
    }
    if (!found) diff.additions.push_back(r.p);
  }
  for (const auto& [p, gap] : base) {
    bool found = false;
    for (const auto& r : records) found = found || r.p == p;
    if (!found) diff.missing.push_back(p);
  }
  return diff;
}

}  // namespace explab
