#pragma once

#include "ultrana/big_real.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <json.hpp>
#include <random>
#include <vector>

namespace ultrana {

inline constexpr std::size_t kMaxEnumeratedIndices = 10'000'000;

class MultiIndex {
 public:
  MultiIndex() = default;
  /// Throws DomainError on a negative component.
  explicit MultiIndex(std::vector<long> components);

  const std::vector<long>& components() const { return components_; }
  long dim() const { return static_cast<long>(components_.size()); }
  /// |alpha|
  long order() const;
  /// alpha! = prod alpha_i!
  mpz_class factorial() const;
  /// beta <= alpha componentwise (same dimension required).
  bool dominates(const MultiIndex& beta) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<long> components_;
};

/// All alpha in N^d with |alpha| = total, lexicographically decreasing
/// ((2,0), (1,1), (0,2)). Throws ResourceLimitError beyond kMaxEnumeratedIndices.
std::vector<MultiIndex> enumerate(long d, long total);

/// All beta <= alpha, in the order of enumerate() per |beta|.
std::vector<MultiIndex> sub_indices(const MultiIndex& alpha);

struct VandermondeCheck {
  mpz_class lhs;
  mpz_class rhs;
  bool pass() const { return lhs == rhs; }
};

/// sum_{beta <= alpha, |beta| = l} (l!/beta!)((|alpha|-l)!/(alpha-beta)!) against
/// |alpha|!/alpha!, exactly. Throws RangeError unless 0 <= l <= |alpha|.
VandermondeCheck vandermonde_check(const MultiIndex& alpha, long l);

struct ReductionCheck {
  BigReal lhs;
  BigReal rhs;
  BigReal relative_difference;
  BigReal tolerance;
  bool pass() const { return relative_difference <= tolerance; }
};

/// Compares the d-dimensional split sum
///   sum_{beta+gamma=alpha} alpha!/(beta! gamma!) C0^|beta| C^|gamma| |gamma|!/ln^|gamma|(|gamma|+e)
/// with the one-dimensional sum
///   sum_{l+j=|alpha|} |alpha|! C0^l C^j / (l! ln^j(j+e)).
/// Rational coefficients are exact; both sides share one table of
/// 1/ln^j(j+e). Tolerance is 2^(32 - precision).
/// Throws DomainError unless C0, C > 0; PreconditionError if |alpha| > 12.
ReductionCheck highdim_reduction_check(const MultiIndex& alpha, const mpq_class& c0, const mpq_class& c,
                                       Precision prec = Precision());

/// Random index with 1 <= d <= max_d and |alpha| = order.
MultiIndex random_multi_index(std::mt19937_64& rng, long max_d, long order);

struct MultiindexSweep {
  long vandermonde_cases = 0;
  long vandermonde_failures = 0;
  long reduction_cases = 0;
  long reduction_failures = 0;
  std::vector<std::string> failures;

  bool passed() const { return vandermonde_failures == 0 && reduction_failures == 0; }
};

/// Exhaustive Vandermonde check for d <= max_d, |alpha| <= max_order, all l,
/// plus `random_cases` reduction checks with d <= 3, |alpha| <= 12.
MultiindexSweep multiindex_sweep(long max_d, long max_order, long random_cases, std::uint64_t seed,
                                 Precision prec = Precision());

nlohmann::json to_json(const MultiindexSweep& sweep);

}  // namespace ultrana
