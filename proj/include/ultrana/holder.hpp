#pragma once

#include "ultrana/report.hpp"

#include <complex>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

namespace ultrana {

inline constexpr double kHolderDelta = 0.5;

struct HolderEstimate {
  double delta = kHolderDelta;
  long grid_size = 0;
  double seminorm = 0.0;
  /// Largest pair separation that entered the maximum.
  double short_range_cap = 0.0;
};

/// max over sample pairs of |f(x) - f(y)| / |x - y|^delta, restricted to pairs
/// with |x - y| <= max_separation. A lower bound for the true seminorm.
/// Throws PreconditionError with fewer than 2 samples or mismatched spans,
/// DomainError unless 0 < delta < 1.
HolderEstimate holder_seminorm(std::span<const double> points, std::span<const std::complex<double>> values,
                               double delta = kHolderDelta,
                               double max_separation = std::numeric_limits<double>::infinity());

/// m period / grid_size for m = 0..grid_size-1, period = 2 pi / C0.
std::vector<double> period_grid(double c0, long grid_size);

/// u^{(k)} of u = e^{-A} e^{A e^{i C0 x}} on period_grid(), in double precision.
std::vector<std::complex<double>> sharp_derivative_samples(double c0, long k, long grid_size);

inline constexpr long kHolderGrid = 1024;

/// [D^beta W]_{1/2} / C0^{beta + 1/2} for W = phi' = i A C0 e^{i C0 x}, 0 <= beta <= beta_max.
/// Rows carry the ratio per beta. Metrics "ratio_spread" (max relative deviation
/// from the beta = 0 ratio) and "max_grid_correction" (h^{1/2} sup |D^{beta+1} W| / C0^{beta+1/2}).
/// A row fails if its ratio is not finite or deviates from beta = 0 by more than 1e-10.
LemmaCheckReport check_coeff_holder(double c0, long beta_max, long grid_size = kHolderGrid);

inline constexpr double kBetaIndependenceTolerance = 1e-10;
inline constexpr double kMollifierStability = 0.2;

/// For 1 <= k <= kmax, c_k = sup|u^{(k)}| / ([u^{(k)}]_{1/2} [u^{(k-1)}]_{1/2})^{1/2}
/// on grids grid_size and 2 grid_size. Metrics "fitted_c", "fitted_c_doubled",
/// "relative_change". Fails if a c_k is not finite or the fitted constant moves
/// by more than 20% under grid doubling.
LemmaCheckReport check_mollifier_interpolation(double c0, long kmax, long grid_size = kHolderGrid);

/// CSV with columns k_or_beta, estimate, bound, ratio.
struct HolderRow {
  long k_or_beta = 0;
  double estimate = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};
std::vector<HolderRow> coeff_holder_rows(double c0, long beta_max, long grid_size = kHolderGrid);
std::vector<HolderRow> mollifier_rows(double c0, long kmax, long grid_size = kHolderGrid);
void write_holder_csv(std::ostream& os, const std::vector<HolderRow>& rows);

}  // namespace ultrana
