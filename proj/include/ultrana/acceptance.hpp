#pragma once

#include "ultrana/big_real.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ultrana {

struct CriterionResult {
  int id = 0;
  std::string group;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  nlohmann::json data;
};

struct AcceptanceOptions {
  Precision precision;
  /// Restrict to one group: majorant, sharp, propagator, multiindex, kernels, holder.
  std::optional<std::string> only;
  /// Directory holding pinned reference results.
  std::filesystem::path golden_dir;
};

inline constexpr int kCriterionCount = 11;

/// Group name of criterion `id` (1..11).
std::string criterion_group(int id);
/// True when `name` is one of the group names.
bool is_criterion_group(const std::string& name);

/// Runs one criterion; exceptions inside a check are reported as a failure.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// Runs every criterion selected by options.only, in order, calling `on_result`
/// after each one.
template <class Callback>
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, Callback on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (options.only && criterion_group(id) != *options.only) continue;
    out.push_back(run_criterion(id, options));
    on_result(out.back());
  }
  return out;
}

/// "PASS criterion 3 [majorant] title: detail (1.2 s)"
std::string format_result_line(const CriterionResult& result);

nlohmann::json to_json(const CriterionResult& result);

}  // namespace ultrana
