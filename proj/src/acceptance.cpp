#include "ultrana/acceptance.hpp"

#include "ultrana/combinatorics.hpp"
#include "ultrana/errors.hpp"
#include "ultrana/holder.hpp"
#include "ultrana/kernels.hpp"
#include "ultrana/majorant.hpp"
#include "ultrana/multiindex.hpp"
#include "ultrana/propagator.hpp"
#include "ultrana/report.hpp"
#include "ultrana/sharp_example.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace ultrana {

namespace {

// Tolerances and sweep limits, fixed by the acceptance criteria.
constexpr long kBootstrapNmax = 100'000;
constexpr long kBootstrapTailFrom = 10'000;
constexpr double kDoubledPrecisionAgreement = 1e-20;
constexpr long kMonotonicityPoints[] = {1'000, 10'000, 100'000};
constexpr long kThresholdScanFrom = 3;
constexpr long kThresholdScanTo = 2'000;
constexpr double kAsymptoticSpread = 1e3;
constexpr long kDnNmax = 1'000'000;
constexpr double kDnBound = 6.0;
constexpr double kLogShiftAtNmax = 1.001;
constexpr long kExactnessNmax = 60;
constexpr double kExactnessTolerance = 1e-30;
constexpr long kGridAgreementNmax = 20;
constexpr long kGridAgreementPoints = 512;
constexpr long kEnvelopeNmax = 200;
constexpr double kFitStability = 0.05;
constexpr long kLambdaNmax = 2'000;
constexpr long kKappaNmax = 5'000;
constexpr long kPropagatorN = 500;
constexpr long kImpliedWindow = 100;
constexpr std::uint64_t kMultiindexSeed = 20240611;
constexpr double kKernelPointTolerance = 1e-8;
constexpr double kKernelMassTolerance = 1e-6;
constexpr double kGradL1Tolerance = 1e-6;

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string sci(const BigReal& x, int digits = 6) { return x.to_string(digits); }

BigReal decimal(const char* text, Precision prec) { return BigReal::parse(text, prec); }

struct Builder {
  CriterionResult& r;
  std::ostringstream detail;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "FAILED " << what << "; ";
    }
  }
  void note(const std::string& what) { detail << what << "; "; }
};

void bootstrap(Builder& b, Precision prec) {
  const std::vector<long> grid = geometric_grid(1, kBootstrapNmax);
  const LogTables tables(kBootstrapNmax + 1, prec);
  const LogTables tables_hi(kBootstrapNmax + 1, prec.doubled());
  const char* kappas[] = {"1.05", "2", "e", "10"};
  const char* c0s[] = {"0.5", "1", "10"};
  BigReal worst_rel(prec);
  BigReal global_k1(prec);
  auto runs = nlohmann::json::array();
  for (const char* kt : kappas) {
    for (const char* ct : c0s) {
      auto make = [&](Precision p) {
        const BigReal kappa = std::string(kt) == "e" ? euler_e(p) : decimal(kt, p);
        const BigReal c0 = decimal(ct, p);
        return MajorantParams(c0, kappa, BigReal(p));
      };
      const LemmaCheckReport rep = bootstrap_sweep(make(prec), grid, tables);
      const LemmaCheckReport rep_hi = bootstrap_sweep(make(prec.doubled()), grid, tables_hi);
      BigReal head(prec);
      BigReal tail(prec);
      for (const auto& row : rep.rows) {
        BigReal& slot = row.n >= kBootstrapTailFrom ? tail : head;
        if (slot < row.ratio) slot = row.ratio;
      }
      const BigReal& k1 = rep.metric("K1");
      const BigReal rel = relative_difference(k1, rep_hi.metric("K1").with_precision(prec));
      worst_rel = max(worst_rel, rel);
      global_k1 = max(global_k1, k1);
      const std::string tag = std::string("kappa=") + kt + " C0=" + ct;
      b.check(rep.passed(), tag + " R(n) finite");
      b.check(tail <= k1, tag + " tail max <= overall max");
      b.check(rel <= BigReal(kDoubledPrecisionAgreement, prec), tag + " K1 stable at doubled precision");
      runs.push_back({{"kappa", kt}, {"c0", ct}, {"K1", format_cell(k1)}, {"head_max", format_cell(head)},
                      {"tail_max", format_cell(tail)}, {"doubled_precision_rel_diff", format_cell(rel)}});
      if (std::string(ct) == "1") {
        b.note(tag + ": K1=" + sci(k1) + " head(n<1e4)=" + sci(head, 4) + " tail(n>=1e4)=" + sci(tail, 4));
      }
    }
  }
  b.note("max K1 doubled-precision rel diff " + sci(worst_rel, 3));
  b.r.data["runs"] = runs;
}

void monotonicity(Builder& b, Precision prec) {
  const LogTables tables(kMonotonicityPoints[2], prec);
  for (long n : kMonotonicityPoints) {
    const LemmaCheckReport rep = check_monotonicity(n, tables);
    b.check(rep.passed(), "n=" + std::to_string(n) + " has " + std::to_string(rep.violations.size()) + " violations");
    b.note("n=" + std::to_string(n) + " worst ratio " + sci(rep.worst_ratio, 8));
  }
  const std::optional<long> threshold = monotonicity_threshold(kThresholdScanFrom, kThresholdScanTo, tables);
  b.note("empirical threshold n*=" + (threshold ? std::to_string(*threshold) : std::string("none")) + " over [" +
         std::to_string(kThresholdScanFrom) + ", " + std::to_string(kThresholdScanTo) + "]");
  b.r.data["threshold"] = threshold ? nlohmann::json(*threshold) : nlohmann::json();
}

void asymptotics(Builder& b, Precision prec) {
  const std::vector<long> grid = geometric_grid(2, kBootstrapNmax);
  const BigReal big_l(3L, prec);
  struct Series {
    std::string name;
    std::function<BigReal(long)> eval;
  };
  const std::vector<Series> series = {
      {"s=0", [&](long n) { return check_aj_gaussian(n, 0, prec); }},
      {"s=+w", [&](long n) { return check_aj_gaussian(n, gaussian_window_offset(n), prec); }},
      {"s=-w", [&](long n) { return check_aj_gaussian(n, -gaussian_window_offset(n), prec); }},
      {"L=3", [&](long n) { return check_aj_supergaussian(n, big_l); }},
  };
  for (const auto& s : series) {
    std::optional<BigReal> lo, hi;
    bool finite = true;
    for (long n : grid) {
      const BigReal v = s.eval(n);
      finite = finite && v.is_finite() && v > 0L;
      if (!lo || v < *lo) lo = v;
      if (!hi || *hi < v) hi = v;
    }
    const BigReal spread = *hi / *lo;
    b.check(finite, s.name + " ratios finite and positive");
    b.check(spread <= BigReal(kAsymptoticSpread, prec), s.name + " max/min <= 1e3");
    b.note(s.name + " range [" + sci(*lo, 4) + ", " + sci(*hi, 4) + "] max/min " + sci(spread, 4));
    b.r.data[s.name] = {{"min", format_cell(*lo)}, {"max", format_cell(*hi)}, {"spread", format_cell(spread)}};
  }
}

void dn_and_shift(Builder& b, Precision prec) {
  const LemmaCheckReport dn = check_dn(kDnNmax, prec);
  b.check(dn.passed() && dn.metric("max_dn") < BigReal(kDnBound, prec), "d_n < 6 for 2 <= n <= 1e6");
  b.note("max d_n " + sci(dn.metric("max_dn"), 8));
  const LogShiftSweep shift = check_log_shift(kDnNmax, prec);
  b.check(shift.sup.is_finite(), "sup (ln(n+10)/ln n)^n finite");
  b.note("sup (ln(n+10)/ln n)^n = " + sci(shift.sup, 8) + " at n=" + std::to_string(shift.arg_sup));
  b.check(shift.at_nmax <= BigReal(kLogShiftAtNmax, prec),
          "value at n=1e6 is " + sci(shift.at_nmax, 8) + " > 1.001 (it behaves like e^{10/ln n}, which is " +
              fmt("%.4f", std::exp(10.0 / std::log(1e6))) + " at n=1e6)");
  b.r.data["max_dn"] = format_cell(dn.metric("max_dn"));
  b.r.data["log_shift_sup"] = format_cell(shift.sup);
  b.r.data["log_shift_at_nmax"] = format_cell(shift.at_nmax);
}

void exactness(Builder& b, Precision prec) {
  for (const char* ct : {"1", "5"}) {
    const SharpExample ex(decimal(ct, prec));
    BigReal worst(prec);
    for (long n = 0; n <= kExactnessNmax; ++n) {
      worst = max(worst, relative_difference(derivative_at_zero(ex, n), derivative_at_zero_recurrence(ex, n)));
    }
    b.check(worst <= BigReal(kExactnessTolerance, prec), std::string("C0=") + ct + " closed form vs recurrence");
    BigReal grid_worst(prec);
    for (long n = 0; n <= kGridAgreementNmax; ++n) {
      grid_worst = max(grid_worst, grid_method_disagreement(ex, n, kGridAgreementPoints));
    }
    b.check(grid_worst <= BigReal(kGridAgreementTolerance, prec), std::string("C0=") + ct + " grid methods agree");
    b.note(std::string("C0=") + ct + ": at-zero rel diff " + sci(worst, 3) + ", grid rel diff " + sci(grid_worst, 3));
  }
}

BigReal envelope_k(const SharpExample& ex, const BigReal& kappa, long nmax, std::vector<BigReal>* implied) {
  const std::vector<SupNormBracket> brackets = sup_norm_brackets(ex, nmax);
  std::vector<LogMagnitude> upper;
  for (const auto& br : brackets) upper.push_back(br.upper);
  if (implied) *implied = implied_constants(upper, BigReal(1L, ex.precision()));
  return fit_K(upper, kappa, ex.c0());
}

void upper_bound(Builder& b, Precision prec) {
  const BigReal kappa(2L, prec);
  for (const char* ct : {"1", "5"}) {
    const SharpExample ex(decimal(ct, prec));
    std::vector<BigReal> implied;
    const BigReal k200 = envelope_k(ex, kappa, kEnvelopeNmax, &implied);
    const BigReal k100 = envelope_k(ex, kappa, kEnvelopeNmax / 2, nullptr);
    const BigReal scale = max(k100, k200);
    const BigReal change = scale.is_zero() ? BigReal(prec) : abs(k200 - k100) / scale;
    BigReal max_c(prec);
    for (const auto& c : implied) max_c = max(max_c, c);
    const std::string tag = std::string("C0=") + ct;
    b.check(k200.is_finite() && k100.is_finite(), tag + " fitted K finite");
    b.check(change < BigReal(kFitStability, prec), tag + " K stable 100 -> 200");
    b.note(tag + ": K(100)=" + sci(k100, 6) + " K(200)=" + sci(k200, 6) + " max implied C_n " + sci(max_c, 6) +
           " vs kappa C0 " + sci(kappa * ex.c0(), 4));
    b.r.data[tag] = {{"K100", format_cell(k100)}, {"K200", format_cell(k200)}, {"max_implied_C", format_cell(max_c)}};
  }
}

std::optional<long> golden_violation(const std::filesystem::path& dir) {
  std::ifstream in(dir / "falsify_lambda.json");
  if (!in) return std::nullopt;
  const nlohmann::json j = nlohmann::json::parse(in);
  return j.at("violating_n").get<long>();
}

void sharpness(Builder& b, const AcceptanceOptions& options) {
  const Precision prec = options.precision;
  const SharpExample ex1(BigReal(1L, prec));
  const FalsificationResult lam = falsify_lambda(ex1, BigReal(5L, prec), BigReal(2L, prec), kLambdaNmax);
  b.check(lam.violating_n.has_value(), "(a) lambda=2, C=5 violation within n <= 2000");
  const std::optional<long> pinned = golden_violation(options.golden_dir);
  b.check(pinned.has_value(), "(a) golden file present in " + options.golden_dir.string());
  if (lam.violating_n && pinned) {
    b.check(*lam.violating_n == *pinned, "(a) violating n matches golden value " + std::to_string(*pinned));
  }
  if (lam.violating_n) b.note("(a) violating n=" + std::to_string(*lam.violating_n) + " lhs/rhs " + sci(lam.lhs_over_rhs_at_n, 6));
  b.r.data["lambda"] = to_json(lam);

  bool any_kappa = false;
  for (const char* ct : {"40", "80"}) {
    const SharpExample ex(decimal(ct, prec));
    const FalsificationResult kap = falsify_kappa(ex, decimal("0.5", prec), BigReal(1L, prec), kKappaNmax);
    any_kappa = any_kappa || kap.violating_n.has_value();
    b.note(std::string("(b) C0=") + ct + ": " +
           (kap.violating_n ? "violation at n=" + std::to_string(*kap.violating_n) : std::string("no violation")));
    b.r.data[std::string("kappa_C0_") + ct] = to_json(kap);
  }
  b.check(any_kappa, "(b) kappa=0.5, C=1 violation for some C0 in {40, 80}");

  const BigReal kappa(2L, prec);
  const BigReal k = envelope_k(ex1, kappa, kEnvelopeNmax, nullptr);
  const MajorantParams params(ex1.c0(), kappa, k);
  const FalsificationResult cons = falsify_lambda(ex1, params.c(), BigReal(1L, prec), kLambdaNmax);
  b.check(!cons.violating_n, "(c) no violation of the proved envelope up to n=2000");
  b.note("(c) C=" + sci(params.c(), 6) + " max lhs/rhs " + sci(cons.lhs_over_rhs_at_n, 6) + " at n=" +
         std::to_string(cons.ratio_n));
  b.r.data["consistency"] = to_json(cons);
}

void propagator(Builder& b, Precision prec) {
  const BigReal c0(1L, prec);
  const BoundSequence seq = propagate_second_order(c0, base_case(BigReal(2L, prec)), kPropagatorN);
  const std::vector<SupNormBracket> brackets = sup_norm_brackets(SharpExample(c0), kEnvelopeNmax);
  long dominated = 0;
  for (long n = 0; n <= kEnvelopeNmax; ++n) {
    if (seq.bounds[n] >= brackets[n].lower) ++dominated;
  }
  b.check(dominated == kEnvelopeNmax + 1, "b_n >= sup-norm lower bracket for n <= 200 (" +
                                             std::to_string(dominated) + "/" + std::to_string(kEnvelopeNmax + 1) + ")");
  const BigReal k = fit_K(seq, BigReal(2L, prec));
  const std::vector<BigReal> implied = implied_constants(seq.bounds, BigReal(1L, prec));
  b.check(k.is_finite(), "fit_K finite");
  b.check(eventually_decreasing(implied, kImpliedWindow), "implied C_n decreasing on the last 100 indices");
  b.note("K=" + sci(k, 8) + " C_400=" + sci(implied[400], 6) + " C_500=" + sci(implied[500], 6));
  b.r.data["K"] = format_cell(k);
}

void combinatorics(Builder& b, Precision prec) {
  const MultiindexSweep sweep = multiindex_sweep(4, 8, 100, kMultiindexSeed, prec);
  b.check(sweep.vandermonde_failures == 0, "Vandermonde identity exact");
  b.check(sweep.reduction_failures == 0, "dimension reduction identity");
  b.note(std::to_string(sweep.vandermonde_cases) + " Vandermonde cases, " + std::to_string(sweep.reduction_cases) +
         " random reduction cases");
  b.r.data = to_json(sweep);
}

void kernels(Builder& b) {
  const KernelParams g2{2.0, 1, {}};
  double worst_point = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double exact = std::exp(-x) / 2.0;
    worst_point = std::max(worst_point, std::abs(bessel_kernel(g2, x) - exact) / exact);
  }
  b.check(worst_point <= kKernelPointTolerance, "G_2 in d=1 matches e^{-|x|}/2");
  b.note("G_2 rel err " + fmt("%.2e", worst_point));
  for (int d = 1; d <= 3; ++d) {
    const double mass = kernel_mass({2.0, d, {}});
    b.check(std::abs(mass - 1.0) <= kKernelMassTolerance, "mass of G_2 in d=" + std::to_string(d));
    b.note("mass d=" + std::to_string(d) + " " + fmt("%.12f", mass));
  }
  for (auto [s, d] : {std::pair{2.0, 1}, {2.0, 2}, {2.0, 3}, {3.0, 1}}) {
    const KernelParams p{s, d, {}};
    const LemmaCheckReport bounds = check_kernel_bounds(p);
    const LemmaCheckReport grad = check_grad_bound(p);
    const std::string tag = "(s,d)=(" + fmt("%g", s) + "," + std::to_string(d) + ")";
    b.check(bounds.passed(), tag + " local and decay ratios finite, G positive and decreasing");
    b.check(grad.passed(), tag + " gradient ratio finite");
    b.note(tag + " near " + sci(bounds.metric("near_max_ratio"), 4) + " far " + sci(bounds.metric("far_max_ratio"), 4) +
           " grad " + sci(grad.worst_ratio, 4));
  }
  for (int d = 1; d <= 3; ++d) {
    const double l1 = grad_kernel_l1(d);
    b.check(std::isfinite(l1), "int |grad G_2| finite in d=" + std::to_string(d));
    if (d == 1) b.check(std::abs(l1 - 1.0) <= kGradL1Tolerance, "int |G_2'| = 1 in d=1");
    b.note("int|grad G_2| d=" + std::to_string(d) + " " + fmt("%.10f", l1));
  }
}

void holder(Builder& b) {
  const LemmaCheckReport coeff = check_coeff_holder(1.0, 20);
  b.check(coeff.passed(), "coefficient ratio independent of beta <= 20");
  const LemmaCheckReport coeff4 = check_coeff_holder(4.0, 20);
  b.check(coeff4.passed() && coeff4.metric("ratio").is_finite(), "C0=4 ratio finite");
  b.note("ratio C0=1 " + sci(coeff.metric("ratio"), 8) + " spread " + sci(coeff.metric("ratio_spread"), 2) +
         ", C0=4 " + sci(coeff4.metric("ratio"), 8));
  const LemmaCheckReport moll = check_mollifier_interpolation(1.0, 10);
  b.check(moll.passed(), "mollifier interpolation c finite and stable within 20%");
  b.note("fitted c " + sci(moll.metric("fitted_c"), 6) + " doubled grid " + sci(moll.metric("fitted_c_doubled"), 6));
}

const char* kTitles[kCriterionCount] = {
    "bootstrap ratio R(n) over the geometric grid",
    "monotonicity of a_j",
    "a_j asymptotic windows",
    "d_n < 6 and the log-shift power",
    "sharp example exactness",
    "upper bound fitted on the sharp example",
    "sharpness falsifications",
    "propagator dominance and closure",
    "multi-index identities",
    "Bessel potential kernels",
    "Hölder seminorms",
};

}  // namespace

std::string criterion_group(int id) {
  if (id >= 1 && id <= 4) return "majorant";
  if (id >= 5 && id <= 7) return "sharp";
  if (id == 8) return "propagator";
  if (id == 9) return "multiindex";
  if (id == 10) return "kernels";
  if (id == 11) return "holder";
  throw RangeError("criterion id out of range");
}

bool is_criterion_group(const std::string& name) {
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (criterion_group(id) == name) return true;
  }
  return false;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  CriterionResult r;
  r.id = id;
  r.group = criterion_group(id);
  r.title = kTitles[id - 1];
  r.data = nlohmann::json::object();
  Builder b{r, {}, true};
  const Precision prec = options.precision;
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: bootstrap(b, prec); break;
      case 2: monotonicity(b, prec); break;
      case 3: asymptotics(b, prec); break;
      case 4: dn_and_shift(b, prec); break;
      case 5: exactness(b, prec); break;
      case 6: upper_bound(b, prec); break;
      case 7: sharpness(b, options); break;
      case 8: propagator(b, prec); break;
      case 9: combinatorics(b, prec); break;
      case 10: kernels(b); break;
      case 11: holder(b); break;
    }
  } catch (const std::exception& e) {
    b.check(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = b.ok;
  r.detail = b.detail.str();
  if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
  return r;
}

std::string format_result_line(const CriterionResult& result) {
  std::ostringstream os;
  os << (result.passed ? "PASS" : "FAIL") << " criterion " << result.id << " [" << result.group << "] "
     << result.title << ": " << result.detail << " (" << fmt("%.1f", result.seconds) << " s)";
  return os.str();
}

nlohmann::json to_json(const CriterionResult& result) {
  return {{"id", result.id},         {"group", result.group},     {"title", result.title},
          {"passed", result.passed}, {"detail", result.detail},   {"seconds", result.seconds},
          {"data", result.data}};
}

}  // namespace ultrana
