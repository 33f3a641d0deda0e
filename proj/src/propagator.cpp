#include "ultrana/propagator.hpp"

#include "ultrana/combinatorics.hpp"
#include "ultrana/errors.hpp"
#include "ultrana/majorant.hpp"
#include "ultrana/report.hpp"

#include <string>

namespace ultrana {

BaseCase base_case(const BigReal& c_p) {
  if (!(c_p >= 1L)) throw DomainError("interpolation constant c_p must be at least 1");
  const Precision prec = c_p.precision();
  BigReal b2 = c_p * c_p + 2L;
  BigReal b1 = c_p * sqrt(b2);
  return BaseCase{c_p, BigReal(1L, prec), std::move(b1), std::move(b2)};
}

const char* to_string(EquationKind kind) {
  return kind == EquationKind::second_order ? "second_order" : "first_order";
}

namespace {

// Appends ln(binom(m,l) C0^l b_{m-l}) for l = 0..m; only l = 0 survives when C0 = 0.
void push_leibniz_terms(long m, const std::vector<LogMagnitude>& b, const std::optional<BigReal>& ln_c0,
                        const LogTables& tables, std::vector<BigReal>& terms) {
  for (long l = 0; l <= m; ++l) {
    if (l > 0 && !ln_c0) break;
    BigReal t = b[m - l].log_abs();
    if (l > 0) {
      t += tables.ln_binomial(m, l);
      t += *ln_c0 * l;
    }
    terms.push_back(std::move(t));
  }
}

std::optional<BigReal> log_or_none(const BigReal& c0) {
  if (c0 < 0L) throw PreconditionError("C0 must be nonnegative");
  if (c0.is_zero()) return std::nullopt;
  return log(c0);
}

}  // namespace

BoundSequence propagate_second_order(const BigReal& c0, const BaseCase& base, long n_max) {
  if (n_max < 3) throw PreconditionError("second-order propagation needs N >= 3");
  const std::optional<BigReal> ln_c0 = log_or_none(c0);
  const Precision prec = c0.precision();
  const LogTables tables(n_max, prec);

  BoundSequence seq{EquationKind::second_order, c0, base, {}};
  auto& b = seq.bounds;
  b.reserve(static_cast<std::size_t>(n_max) + 1);
  b.push_back(LogMagnitude::from_value(base.b0.with_precision(prec)));
  b.push_back(LogMagnitude::from_value(base.b1.with_precision(prec)));
  b.push_back(LogMagnitude::from_value(base.b2.with_precision(prec)));
  std::vector<BigReal> terms;
  for (long n = 2; n < n_max; ++n) {
    terms.clear();
    push_leibniz_terms(n, b, ln_c0, tables, terms);
    push_leibniz_terms(n - 1, b, ln_c0, tables, terms);
    b.push_back(log_sum_exp(terms));
  }
  return seq;
}

BoundSequence propagate_first_order(const BigReal& c0, long n_max) {
  if (n_max < 1) throw PreconditionError("first-order propagation needs N >= 1");
  const std::optional<BigReal> ln_c0 = log_or_none(c0);
  const Precision prec = c0.precision();
  const LogTables tables(n_max, prec);

  BoundSequence seq{EquationKind::first_order, c0, std::nullopt, {}};
  auto& b = seq.bounds;
  b.reserve(static_cast<std::size_t>(n_max) + 1);
  b.push_back(LogMagnitude::one(prec));
  std::vector<BigReal> terms;
  for (long n = 0; n < n_max; ++n) {
    terms.clear();
    push_leibniz_terms(n, b, ln_c0, tables, terms);
    b.push_back(log_sum_exp(terms));
  }
  return seq;
}

std::vector<BigReal> implied_constants(std::span<const LogMagnitude> bounds, const BigReal& prefactor) {
  if (bounds.empty()) throw PreconditionError("bound sequence is empty");
  if (!(prefactor > 0L)) throw DomainError("prefactor must be positive");
  const long n_max = static_cast<long>(bounds.size()) - 1;
  const Precision prec = bounds.front().precision();
  const LogTables tables(n_max, prec);
  const BigReal ln_pre = log(prefactor.with_precision(prec));
  std::vector<BigReal> out;
  out.reserve(bounds.size());
  out.emplace_back(prec);
  for (long n = 1; n <= n_max; ++n) {
    if (!bounds[n].is_positive()) throw DomainError("bounds must be positive");
    BigReal ln_c = bounds[n].log_abs() - ln_pre - tables.ln_factorial(n);
    ln_c += tables.ln_ln_shift(n) * n;
    out.push_back(exp(ln_c / n));
  }
  return out;
}

BigReal fit_K(std::span<const LogMagnitude> bounds, const BigReal& kappa, const BigReal& c0) {
  return fit_K(bounds, kappa, c0, BigReal(1L, c0.precision()));
}

BigReal fit_K(std::span<const LogMagnitude> bounds, const BigReal& kappa, const BigReal& c0,
              const BigReal& prefactor) {
  const BigReal factor = kappa_factor(kappa);
  const BigReal base = kappa * c0;
  const std::vector<BigReal> c = implied_constants(bounds, prefactor);
  BigReal worst(c0.precision());
  for (std::size_t n = 1; n < c.size(); ++n) {
    if (worst < c[n] - base) worst = c[n] - base;
  }
  return worst / factor;
}

BigReal fit_K(const BoundSequence& seq, const BigReal& kappa) { return fit_K(seq.bounds, kappa, seq.c0); }

bool eventually_decreasing(std::span<const BigReal> values, long window) {
  const long size = static_cast<long>(values.size());
  if (window < 1 || window > size) throw PreconditionError("window out of range");
  for (long i = size - window; i + 1 < size; ++i) {
    if (!(values[i + 1] < values[i])) return false;
  }
  return true;
}

void write_bounds_csv(std::ostream& os, const BoundSequence& seq, const BigReal& kappa, const BigReal& k) {
  const MajorantParams params(seq.c0, kappa, k);
  const std::vector<BigReal> c = implied_constants(seq.bounds, BigReal(1L, seq.c0.precision()));
  os << "n,log_b_n,implied_C_n,envelope_margin\n";
  for (long n = 1; n <= seq.size_n(); ++n) {
    const BigReal& ln_b = seq.bounds[n].log_abs();
    const BigReal margin = closed_majorant(n, params.c()).log_abs() - ln_b;
    os << n << ',' << format_cell(ln_b) << ',' << format_cell(c[n]) << ',' << format_cell(margin) << '\n';
  }
}

nlohmann::json to_json(const BoundSequence& seq, const BigReal& kappa, const BigReal& k) {
  nlohmann::json j;
  j["equation_kind"] = to_string(seq.kind);
  j["c0"] = format_cell(seq.c0);
  j["n_max"] = seq.size_n();
  if (seq.base) {
    j["base_case"] = {{"c_p", format_cell(seq.base->c_p)},
                      {"b0", format_cell(seq.base->b0)},
                      {"b1", format_cell(seq.base->b1)},
                      {"b2", format_cell(seq.base->b2)},
                      {"source", "b1 = c_p sqrt(2 + c_p^2), b2 = 2 + c_p^2"}};
  }
  j["kappa"] = format_cell(kappa);
  j["K"] = format_cell(k);
  const std::vector<BigReal> c = implied_constants(seq.bounds, BigReal(1L, seq.c0.precision()));
  j["implied_C_decreasing_last_100"] = seq.size_n() > 100 && eventually_decreasing(c, 100);
  j["precision_bits"] = seq.c0.precision().bits();
  return j;
}

}  // namespace ultrana
