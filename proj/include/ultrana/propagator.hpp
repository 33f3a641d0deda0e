#pragma once

#include "ultrana/big_real.hpp"
#include "ultrana/log_magnitude.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace ultrana {

/// Bounds on ||u||, ||u'||, ||u''|| that seed the second-order recurrence.
struct BaseCase {
  BigReal c_p;
  BigReal b0;
  BigReal b1;
  BigReal b2;
};

/// (1, c_p sqrt(2 + c_p^2), 2 + c_p^2). Throws DomainError if c_p < 1.
BaseCase base_case(const BigReal& c_p);

enum class EquationKind { second_order, first_order };

const char* to_string(EquationKind kind);

/// b_0..b_N with all entries positive. Immutable once built.
struct BoundSequence {
  EquationKind kind = EquationKind::second_order;
  BigReal c0;
  std::optional<BaseCase> base;
  std::vector<LogMagnitude> bounds;

  long size_n() const { return static_cast<long>(bounds.size()) - 1; }
};

/// b_{n+1} = sum_{l+j=n} binom(n,l) C0^l b_j + sum_{l+j=n-1} binom(n-1,l) C0^l b_j
/// for n >= 2, with b_0..b_2 from the base case. C0 = 0 is allowed.
/// Throws PreconditionError if N < 3 or C0 < 0.
BoundSequence propagate_second_order(const BigReal& c0, const BaseCase& base, long n_max);

/// b_0 = 1, b_{n+1} = sum_{l+j=n} binom(n,l) C0^l b_j.
/// Throws PreconditionError if N < 1 or C0 < 0.
BoundSequence propagate_first_order(const BigReal& c0, long n_max);

/// C_n = (b_n ln^n(n+e) / (prefactor n!))^{1/n} for n = 1..N; entry 0 is unused
/// and set to zero.
std::vector<BigReal> implied_constants(std::span<const LogMagnitude> bounds, const BigReal& prefactor);

/// Smallest K >= 0 with prefactor (kappa C0 + K (1/ln kappa + 1))^n n!/ln^n(n+e) >= b_n
/// for 1 <= n <= N. Throws DomainError if kappa <= 1.
BigReal fit_K(std::span<const LogMagnitude> bounds, const BigReal& kappa, const BigReal& c0);
BigReal fit_K(std::span<const LogMagnitude> bounds, const BigReal& kappa, const BigReal& c0,
              const BigReal& prefactor);
BigReal fit_K(const BoundSequence& seq, const BigReal& kappa);

/// True when values[i+1] < values[i] for every i in the last `window` indices.
bool eventually_decreasing(std::span<const BigReal> values, long window);

/// CSV with columns n, log_b_n, implied_C_n, envelope_margin for n = 1..N.
/// envelope_margin = ln(envelope_n) - ln b_n with C = kappa C0 + K (1/ln kappa + 1).
void write_bounds_csv(std::ostream& os, const BoundSequence& seq, const BigReal& kappa, const BigReal& k);

nlohmann::json to_json(const BoundSequence& seq, const BigReal& kappa, const BigReal& k);

}  // namespace ultrana
