#pragma once

#include "ultrana/big_real.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ultrana {

/// Number of significant digits used for every numeric report cell.
inline constexpr int kReportDigits = 20;

struct CheckRow {
  long n = 0;
  long j_or_s = 0;
  BigReal ratio;
  bool pass = true;
};

/// Outcome of a grid check of one inequality. The check passed on its grid
/// iff `violations` is empty.
struct LemmaCheckReport {
  std::string lemma_id;
  std::vector<long> n_grid;
  BigReal worst_ratio;
  std::vector<std::pair<long, long>> violations;
  std::optional<long> empirical_threshold;
  std::vector<CheckRow> rows;
  /// Named scalar results (fitted constants, secondary maxima, ...).
  std::vector<std::pair<std::string, BigReal>> metrics;
  std::vector<std::string> notes;

  bool passed() const { return violations.empty(); }
  const BigReal& metric(const std::string& name) const;
  void set_metric(const std::string& name, BigReal value);
};

/// Report cell formatting: scientific notation, kReportDigits significant digits.
std::string format_cell(const BigReal& x);
std::string format_cell(double x);

/// CSV with header `lemma_id,n,j_or_s,ratio,pass`; rows sorted by (n, j_or_s).
void write_csv(std::ostream& os, const LemmaCheckReport& report);
nlohmann::json to_json(const LemmaCheckReport& report);

/// Metadata block attached to every JSON report.
nlohmann::json run_metadata(Precision prec);

}  // namespace ultrana
