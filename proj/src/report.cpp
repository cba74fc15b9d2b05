#include "twistquant/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace twistquant {

bool judge(double defect, double tolerance, Comparison comparison) {
  if (std::isnan(defect)) return false;
  return comparison == Comparison::Below ? defect < tolerance : defect > tolerance;
}

void SuiteReport::add(TestRecord record) {
  for (const auto& r : records_)
    if (r.id == record.id) throw std::logic_error("duplicate test id " + record.id);
  record.pass = judge(record.max_defect, record.tolerance, record.comparison);
  records_.push_back(std::move(record));
}

bool SuiteReport::all_pass() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const auto& r) { return !r.pass; }));
}

nlohmann::json SuiteReport::to_json(bool with_timing) const {
  std::vector<const TestRecord*> sorted;
  for (const auto& r : records_) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  auto tests = nlohmann::json::array();
  for (const auto* r : sorted) {
    nlohmann::json t = {{"suite", r->suite},
                        {"test", r->id},
                        {"identity", r->identity},
                        {"defect", std::isnan(r->max_defect) ? nlohmann::json(nullptr) : nlohmann::json(r->max_defect)},
                        {"tolerance", r->tolerance},
                        {"comparison", r->comparison == Comparison::Below ? "below" : "above"},
                        {"pass", r->pass}};
    if (!r->detail.is_null()) t["detail"] = r->detail;
    if (with_timing) t["wall_seconds"] = r->wall_seconds;
    tests.push_back(std::move(t));
  }
  return {{"seed", seed_}, {"tests", tests}, {"passed", records_.size() - failures()}, {"failed", failures()},
          {"all_pass", all_pass()}};
}

std::string SuiteReport::failure_summary() const {
  std::ostringstream out;
  for (const auto& r : records_)
    if (!r.pass)
      out << "FAIL " << r.id << ": defect " << r.max_defect << (r.comparison == Comparison::Below ? " >= " : " <= ")
          << r.tolerance << " (" << r.identity << ")\n";
  return out.str();
}

}  // namespace twistquant
