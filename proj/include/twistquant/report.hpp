#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace twistquant {

// Witness tests pass when the defect exceeds the threshold instead.
enum class Comparison { Below, Above };

struct TestRecord {
  std::string suite;
  std::string id;
  std::string identity;  // what is being checked, in words
  double max_defect = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::Below;
  bool pass = false;
  double wall_seconds = 0.0;
  nlohmann::json detail;  // optional extra data, deterministic
};

// NaN never passes.
bool judge(double defect, double tolerance, Comparison comparison);

class SuiteReport {
 public:
  explicit SuiteReport(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  const std::vector<TestRecord>& records() const { return records_; }

  void add(TestRecord record);

  // Times check(detail) -> max defect and records the outcome.
  template <class F>
  void run(const std::string& suite, const std::string& id, const std::string& identity, double tolerance, F&& check,
           Comparison comparison = Comparison::Below) {
    TestRecord r{suite, id, identity, 0.0, tolerance, comparison, false, 0.0, nullptr};
    const auto start = std::chrono::steady_clock::now();
    r.max_defect = check(r.detail);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    add(std::move(r));
  }

  bool all_pass() const;
  std::size_t failures() const;
  // Records sorted by id; wall times only when requested.
  nlohmann::json to_json(bool with_timing = true) const;
  // One line per failing record.
  std::string failure_summary() const;

 private:
  std::uint64_t seed_;
  std::vector<TestRecord> records_;
};

}  // namespace twistquant
