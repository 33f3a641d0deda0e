#include "ultrana/multiindex.hpp"

#include "ultrana/errors.hpp"

#include <numeric>
#include <string>

namespace ultrana {

namespace {

mpz_class factorial(long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

BigReal to_big_real(const mpq_class& q, Precision prec) {
  BigReal out(prec);
  mpfr_set_q(out.get(), q.get_mpq_t(), MPFR_RNDN);
  return out;
}

mpq_class rational_pow(const mpq_class& base, long k) {
  mpq_class out = 1;
  for (long i = 0; i < k; ++i) out *= base;
  return out;
}

void fill(long d, long total, std::vector<long>& prefix, std::vector<MultiIndex>& out) {
  if (static_cast<long>(prefix.size()) == d - 1) {
    prefix.push_back(total);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (long first = total; first >= 0; --first) {
    prefix.push_back(first);
    fill(d, total - first, prefix, out);
    prefix.pop_back();
  }
}

std::string describe(const MultiIndex& alpha) {
  std::string s = "(";
  for (std::size_t i = 0; i < alpha.components().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(alpha.components()[i]);
  }
  return s + ")";
}

}  // namespace

MultiIndex::MultiIndex(std::vector<long> components) : components_(std::move(components)) {
  for (long c : components_) {
    if (c < 0) throw DomainError("multi-index components must be nonnegative");
  }
}

long MultiIndex::order() const { return std::accumulate(components_.begin(), components_.end(), 0L); }

mpz_class MultiIndex::factorial() const {
  mpz_class out = 1;
  for (long c : components_) out *= ultrana::factorial(c);
  return out;
}

bool MultiIndex::dominates(const MultiIndex& beta) const {
  if (beta.dim() != dim()) throw PreconditionError("multi-index dimensions differ");
  for (long i = 0; i < dim(); ++i) {
    if (beta.components_[i] > components_[i]) return false;
  }
  return true;
}

std::vector<MultiIndex> enumerate(long d, long total) {
  if (d < 1) throw DomainError("dimension must be at least 1");
  if (total < 0) throw DomainError("order must be nonnegative");
  mpz_class count;
  mpz_bin_uiui(count.get_mpz_t(), static_cast<unsigned long>(total + d - 1), static_cast<unsigned long>(d - 1));
  if (count > static_cast<unsigned long>(kMaxEnumeratedIndices)) {
    throw ResourceLimitError("enumeration would produce " + count.get_str() + " indices");
  }
  std::vector<MultiIndex> out;
  out.reserve(count.get_ui());
  std::vector<long> prefix;
  fill(d, total, prefix, out);
  return out;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& alpha) {
  std::vector<MultiIndex> out;
  for (long l = 0; l <= alpha.order(); ++l) {
    for (auto& beta : enumerate(alpha.dim(), l)) {
      if (alpha.dominates(beta)) out.push_back(std::move(beta));
    }
  }
  return out;
}

VandermondeCheck vandermonde_check(const MultiIndex& alpha, long l) {
  const long n = alpha.order();
  if (l < 0 || l > n) throw RangeError("l must lie in [0, |alpha|]");
  VandermondeCheck out{0, factorial(n) / alpha.factorial()};
  const mpz_class l_fact = factorial(l);
  const mpz_class rest_fact = factorial(n - l);
  for (const auto& beta : enumerate(alpha.dim(), l)) {
    if (!alpha.dominates(beta)) continue;
    std::vector<long> gamma(alpha.components());
    for (long i = 0; i < alpha.dim(); ++i) gamma[i] -= beta.components()[i];
    out.lhs += (l_fact / beta.factorial()) * (rest_fact / MultiIndex(gamma).factorial());
  }
  return out;
}

ReductionCheck highdim_reduction_check(const MultiIndex& alpha, const mpq_class& c0, const mpq_class& c,
                                       Precision prec) {
  if (sgn(c0) <= 0 || sgn(c) <= 0) throw DomainError("C0 and C must be positive");
  const long n = alpha.order();
  if (n > 12) throw PreconditionError("reduction check is limited to |alpha| <= 12");

  // w_j = 1 / ln^j(j+e), shared by both sides.
  const BigReal e = euler_e(prec);
  std::vector<BigReal> w;
  for (long j = 0; j <= n; ++j) w.push_back(j == 0 ? BigReal(1L, prec) : pow(log(e + j), -j));

  const mpz_class alpha_fact = alpha.factorial();
  BigReal lhs(prec);
  for (const auto& beta : sub_indices(alpha)) {
    std::vector<long> gamma_c(alpha.components());
    for (long i = 0; i < alpha.dim(); ++i) gamma_c[i] -= beta.components()[i];
    const MultiIndex gamma(std::move(gamma_c));
    const long b = beta.order();
    const long g = gamma.order();
    mpq_class coeff(alpha_fact * factorial(g), beta.factorial() * gamma.factorial());
    coeff.canonicalize();
    coeff *= rational_pow(c0, b) * rational_pow(c, g);
    lhs += to_big_real(coeff, prec) * w[g];
  }

  const mpz_class n_fact = factorial(n);
  BigReal rhs(prec);
  for (long l = 0; l <= n; ++l) {
    const long j = n - l;
    mpq_class coeff(n_fact, factorial(l));
    coeff.canonicalize();
    coeff *= rational_pow(c0, l) * rational_pow(c, j);
    rhs += to_big_real(coeff, prec) * w[j];
  }
  BigReal tol(1L, prec);
  mpfr_mul_2si(tol.get(), tol.get(), 32 - prec.bits(), MPFR_RNDN);
  BigReal rel = relative_difference(lhs, rhs);
  return ReductionCheck{std::move(lhs), std::move(rhs), std::move(rel), std::move(tol)};
}

MultiIndex random_multi_index(std::mt19937_64& rng, long max_d, long order) {
  if (max_d < 1 || order < 0) throw DomainError("need max_d >= 1 and order >= 0");
  const long d = std::uniform_int_distribution<long>(1, max_d)(rng);
  std::vector<long> comps(static_cast<std::size_t>(d), 0);
  std::uniform_int_distribution<long> slot(0, d - 1);
  for (long i = 0; i < order; ++i) ++comps[slot(rng)];
  return MultiIndex(std::move(comps));
}

MultiindexSweep multiindex_sweep(long max_d, long max_order, long random_cases, std::uint64_t seed,
                                 Precision prec) {
  MultiindexSweep out;
  for (long d = 1; d <= max_d; ++d) {
    for (long total = 0; total <= max_order; ++total) {
      for (const auto& alpha : enumerate(d, total)) {
        for (long l = 0; l <= total; ++l) {
          ++out.vandermonde_cases;
          const VandermondeCheck v = vandermonde_check(alpha, l);
          if (!v.pass()) {
            ++out.vandermonde_failures;
            out.failures.push_back("vandermonde " + describe(alpha) + " l=" + std::to_string(l));
          }
        }
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> order_dist(0, 12);
  std::uniform_int_distribution<long> num_dist(1, 20);
  for (long i = 0; i < random_cases; ++i) {
    const MultiIndex alpha = random_multi_index(rng, 3, order_dist(rng));
    mpq_class c0(num_dist(rng), num_dist(rng));
    mpq_class c(num_dist(rng), num_dist(rng));
    c0.canonicalize();
    c.canonicalize();
    ++out.reduction_cases;
    if (!highdim_reduction_check(alpha, c0, c, prec).pass()) {
      ++out.reduction_failures;
      out.failures.push_back("reduction " + describe(alpha) + " C0=" + c0.get_str() + " C=" + c.get_str());
    }
  }
  return out;
}

nlohmann::json to_json(const MultiindexSweep& sweep) {
  return {{"passed", sweep.passed()},
          {"vandermonde_cases", sweep.vandermonde_cases},
          {"vandermonde_failures", sweep.vandermonde_failures},
          {"reduction_cases", sweep.reduction_cases},
          {"reduction_failures", sweep.reduction_failures},
          {"failures", sweep.failures}};
}

}  // namespace ultrana
