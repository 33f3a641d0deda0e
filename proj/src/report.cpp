#include "ultrana/report.hpp"

#include "ultrana/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>

namespace ultrana {

const BigReal& LemmaCheckReport::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  throw Error("report '" + lemma_id + "' has no metric '" + name + "'");
}

void LemmaCheckReport::set_metric(const std::string& name, BigReal value) {
  for (auto& [key, existing] : metrics) {
    if (key == name) {
      existing = std::move(value);
      return;
    }
  }
  metrics.emplace_back(name, std::move(value));
}

std::string format_cell(const BigReal& x) { return x.to_string(kReportDigits); }

std::string format_cell(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", kReportDigits - 1, x);
  return buf;
}

void write_csv(std::ostream& os, const LemmaCheckReport& report) {
  std::vector<const CheckRow*> rows;
  rows.reserve(report.rows.size());
  for (const auto& r : report.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const CheckRow* a, const CheckRow* b) {
    return a->n != b->n ? a->n < b->n : a->j_or_s < b->j_or_s;
  });
  os << "lemma_id,n,j_or_s,ratio,pass\n";
  for (const CheckRow* r : rows) {
    os << report.lemma_id << ',' << r->n << ',' << r->j_or_s << ',' << format_cell(r->ratio) << ','
       << (r->pass ? "true" : "false") << '\n';
  }
}

nlohmann::json to_json(const LemmaCheckReport& report) {
  nlohmann::json j;
  j["lemma_id"] = report.lemma_id;
  j["passed"] = report.passed();
  j["n_grid"] = report.n_grid;
  j["worst_ratio"] = format_cell(report.worst_ratio);
  auto violations = nlohmann::json::array();
  for (const auto& [n, js] : report.violations) violations.push_back({n, js});
  j["violations"] = violations;
  j["empirical_threshold"] = report.empirical_threshold ? nlohmann::json(*report.empirical_threshold) : nlohmann::json();
  auto metrics = nlohmann::json::object();
  for (const auto& [key, value] : report.metrics) metrics[key] = format_cell(value);
  j["metrics"] = metrics;
  j["notes"] = report.notes;
  j["precision_bits"] = report.worst_ratio.precision().bits();
  return j;
}

nlohmann::json run_metadata(Precision prec) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"precision_bits", prec.bits()}, {"generated_at", stamp}, {"tool", "ultrana"}};
}

}  // namespace ultrana
