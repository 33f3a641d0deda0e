#pragma once

#include "ultrana/big_real.hpp"
#include "ultrana/combinatorics.hpp"
#include "ultrana/log_magnitude.hpp"
#include "ultrana/report.hpp"

#include <vector>

namespace ultrana {

/// a_j = 1 / (l! ln^j(j+e)) with j + l = n.
struct SplitWeight {
  long n = 0;
  long j = 0;
  long l = 0;
  LogMagnitude value;
};

SplitWeight split_weight(long n, long j, Precision prec);

/// Constants of the log-type bound C = kappa C0 + K (1/ln kappa + 1).
class MajorantParams {
 public:
  /// Throws DomainError unless C0 > 0, kappa > 1, K >= 0.
  MajorantParams(BigReal c0, BigReal kappa, BigReal k);

  const BigReal& c0() const { return c0_; }
  const BigReal& kappa() const { return kappa_; }
  const BigReal& k() const { return k_; }
  const BigReal& c() const { return c_; }
  /// 1/ln kappa + 1
  const BigReal& kappa_factor() const { return kappa_factor_; }
  Precision precision() const { return c_.precision(); }

 private:
  BigReal c0_;
  BigReal kappa_;
  BigReal k_;
  BigReal kappa_factor_;
  BigReal c_;
};

/// 1/ln kappa + 1 for kappa > 1.
BigReal kappa_factor(const BigReal& kappa);

/// C^n n! / ln^n(n+e).
LogMagnitude closed_majorant(long n, const BigReal& c);

/// sum_{l+j=n} C0^l C^j / (l! ln^j(j+e)).
LogMagnitude convolution_sum(long n, const BigReal& c0, const BigReal& c);
LogMagnitude convolution_sum(long n, const BigReal& c0, const BigReal& c, const LogTables& tables);

/// Ratio of the convolution sum to (1/ln kappa + 1)(n+1) C^n / ln^{n+1}(n+1+e),
/// using C = params.c().
BigReal bootstrap_ratio(long n, const MajorantParams& params);
/// Same ratio for a caller-supplied C; throws PreconditionError if C < kappa C0.
BigReal bootstrap_ratio(long n, const BigReal& c0, const BigReal& kappa, const BigReal& c,
                        const LogTables& tables);

/// {ceil(2^{k/2}) : k >= 0} restricted to [nmin, nmax], sorted and deduplicated.
std::vector<long> geometric_grid(long nmin, long nmax);

/// R(n) over a grid with C = params.c(). Metric "K1" holds the maximum.
LemmaCheckReport bootstrap_sweep(const MajorantParams& params, const std::vector<long>& grid,
                                 const LogTables& tables);

/// a_j <= a_{j+1} for n/2 < j <= n - ln n - 2 and a_j >= a_{j+1} for
/// n - ln n + 1 <= j <= n - 1. Range ends are rounded inward.
LemmaCheckReport check_monotonicity(long n, Precision prec);
LemmaCheckReport check_monotonicity(long n, const LogTables& tables);

/// Smallest n0 >= scan_from such that every n in [n0, scan_to] has zero
/// monotonicity violations; nullopt when even n = scan_to fails.
std::optional<long> monotonicity_threshold(long scan_from, long scan_to, const LogTables& tables);

/// a_j / [n (ln n)^{-n-1/2} e^{-3 s^2 / (2 ln n)}] with j = n - round(ln n) + s.
BigReal check_aj_gaussian(long n, long s, Precision prec);
/// a_j / [n^{-L ln(L/e)} (ln n)^{-n-1/2}] with j = n - round(L ln n), L > 1.
BigReal check_aj_supergaussian(long n, const BigReal& big_l);

/// floor((ln n)^{2/3}), the s offset used by the Gaussian-window sweep.
long gaussian_window_offset(long n);

/// d_n = ln(n+1+e)/(n+1) (ln(n+1+e)/ln(n+e))^n for 2 <= n <= nmax; passes iff
/// max d_n < 6. Metric "max_dn_from_10" holds max over n >= 10.
LemmaCheckReport check_dn(long nmax, Precision prec);
BigReal dn_value(long n, Precision prec);

struct LogShiftSweep {
  BigReal sup;
  long arg_sup = 0;
  BigReal at_nmax;
};

/// sup over 2 <= n <= nmax of (ln(n+10)/ln n)^n.
LogShiftSweep check_log_shift(long nmax, Precision prec);

}  // namespace ultrana
