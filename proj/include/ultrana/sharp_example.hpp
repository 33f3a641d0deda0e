#pragma once

#include "ultrana/big_complex.hpp"
#include "ultrana/big_real.hpp"
#include "ultrana/log_magnitude.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ultrana {

/// u(x) = e^{-A} e^{A e^{i C0 x}} with A = 1/(1 + C0^2).
class SharpExample {
 public:
  /// Throws DomainError unless C0 > 0.
  explicit SharpExample(BigReal c0);

  const BigReal& c0() const { return c0_; }
  const BigReal& a() const { return a_; }
  /// 2 pi / C0
  const BigReal& period() const { return period_; }
  Precision precision() const { return c0_.precision(); }

 private:
  BigReal c0_;
  BigReal a_;
  BigReal period_;
};

/// u^{(n)}(0) = (i C0)^n T_n(A), via Stirling numbers.
BigComplex derivative_at_zero(const SharpExample& ex, long n);

/// u^{(n)}(0) from u^{(m+1)} = sum_k binom(m,k) phi^{(k+1)} u^{(m-k)} at x = 0, in
/// complex arithmetic. Independent of the Stirling route.
BigComplex derivative_at_zero_recurrence(const SharpExample& ex, long n);

/// u^{(n)} at x_m = m period / grid_size, m = 0..grid_size-1, evaluated by the
/// Leibniz recurrence in x and by the Stirling closed form. Returns the closed
/// form values. Throws PrecisionError when the two differ by more than 1e-20
/// relative to the grid maximum.
std::vector<BigComplex> derivative_on_grid(const SharpExample& ex, long n, long grid_size);

/// max_m |f_m - g_m| / max_m |g_m| between the two grid evaluations.
BigReal grid_method_disagreement(const SharpExample& ex, long n, long grid_size);

inline constexpr double kGridAgreementTolerance = 1e-20;

struct SupNormBracket {
  long n = 0;
  LogMagnitude lower;
  LogMagnitude upper;
  long grid_size = 0;

  /// (upper - lower) / lower
  BigReal relative_width() const;
};

inline constexpr long kDefaultSharpGrid = 4096;
inline constexpr long kMaxSharpGrid = 1L << 17;
inline constexpr double kBracketTargetWidth = 1e-3;
inline constexpr double kBracketSafetyFactor = 1.1;

/// lower = grid max of |u^{(n)}|; upper = lower + (h/2) 1.1 max_grid |u^{(n+1)}|,
/// h = period / grid_size. Grid magnitudes come from an FFT of the Stirling
/// weights; the x = 0 sample is evaluated exactly.
SupNormBracket sup_norm_bracket(const SharpExample& ex, long n, long grid_size = kDefaultSharpGrid);

/// Doubles the grid from `initial_grid` until the relative width is at most
/// `target` or the grid reaches kMaxSharpGrid.
SupNormBracket sup_norm_bracket_refined(const SharpExample& ex, long n, long initial_grid = kDefaultSharpGrid,
                                        double target = kBracketTargetWidth);

/// Brackets for n = 0..nmax on a fixed grid, sharing one Touchard sequence.
std::vector<SupNormBracket> sup_norm_brackets(const SharpExample& ex, long nmax, long grid_size = kDefaultSharpGrid);

/// n! r^{-n} e^{-A} e^{A e^{C0 r}}.
struct CauchyBound {
  BigReal r;
  LogMagnitude bound;
  BigReal r_min;
  LogMagnitude minimized;
};

/// Default r = C0^{-1} ln(n / (A ln n)). Throws PreconditionError for n < 3
/// without r, DomainError when r <= 0.
CauchyBound cauchy_bound(const SharpExample& ex, long n, const std::optional<BigReal>& r = std::nullopt);

enum class FalsificationTarget { lambda_bound, kappa_bound };

struct FalsificationResult {
  FalsificationTarget target = FalsificationTarget::lambda_bound;
  std::vector<std::pair<std::string, std::string>> parameters;
  long nmax = 0;
  std::optional<long> violating_n;
  /// lhs / rhs at violating_n, or at the n maximizing it when nothing violates.
  BigReal lhs_over_rhs_at_n;
  long ratio_n = 0;
};

/// Smallest n <= nmax with C0^n T_n(A) > C^n n! / ln^{lambda n}(n+e).
/// lambda = 1 is accepted and gives the consistency run against the proved
/// bound. Throws DomainError unless lambda >= 1 and C > 0.
FalsificationResult falsify_lambda(const SharpExample& ex, const BigReal& c, const BigReal& lambda, long nmax);

/// Smallest n <= nmax with C0^n T_n(A) > (kappa C0 + C)^n n! / ln^n(n+e).
/// Throws DomainError unless 0 < kappa < 1 and C > 0.
FalsificationResult falsify_kappa(const SharpExample& ex, const BigReal& kappa, const BigReal& c, long nmax);

nlohmann::json to_json(const FalsificationResult& result);

/// |u(iy)| = e^{-A} e^{A e^{-C0 y}}.
BigReal imaginary_axis_growth(const SharpExample& ex, const BigReal& y);

/// Rows n, log_sup_lower, log_sup_upper, log_cauchy_bound, log_theorem_envelope, margin
/// for n = 3..nmax. The Cauchy column is the bound minimized over r; margin =
/// log_theorem_envelope - log_sup_upper with C = kappa C0 + K (1/ln kappa + 1).
void write_sharp_csv(std::ostream& os, const SharpExample& ex, long nmax, const BigReal& kappa, const BigReal& k,
                     long grid_size = kDefaultSharpGrid);

}  // namespace ultrana
