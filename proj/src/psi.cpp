#include "primebounds/psi.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "primebounds/compensated_sum.hpp"
#include "primebounds/errors.hpp"
#include "primebounds/primes.hpp"

namespace primebounds {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// Per-term rounding: log p is faithfully rounded (<= 2u relative) and the
// product k * log p adds one more rounding.
constexpr double kTermRelativeError = 3 * kUnitRoundoff;

void require_cap(std::int64_t x, const Limits& limits) {
  if (x > limits.cap) {
    throw ResourceLimitError("psi requested at x = " + std::to_string(x) +
                             " above the scan cap " + std::to_string(limits.cap));
  }
}

}  // namespace

PsiValue psi_at(std::int64_t x, const Limits& limits) {
  if (x < 0) throw DomainError("psi_at requires x >= 0, got " + std::to_string(x));
  require_cap(x, limits);
  PsiValue out;
  out.x = x;
  if (x < 2) return out;
  CompensatedSum sum;
  double term_error = 0.0;
  for (std::int64_t p : primes_up_to(x)) {
    const int k = max_power_le(p, x);
    const double term = k * std::log(static_cast<double>(p));
    sum += term;
    term_error += kTermRelativeError * term;
    out.term_count += k;
  }
  out.value = sum.value();
  out.error_bound = sum.error_bound() + term_error;
  return out;
}

double PsiTable::mangoldt(std::int64_t n) const {
  if (n < 0 || n > hi()) throw DomainError("mangoldt: n outside table");
  const auto p = prime_base_[static_cast<std::size_t>(n)];
  return p == 0 ? 0.0 : std::log(static_cast<double>(p));
}

PsiTable psi_table(std::int64_t hi, const Limits& limits) {
  if (hi < 0) throw DomainError("psi_table requires hi >= 0");
  require_cap(hi, limits);
  const auto size = static_cast<std::size_t>(hi) + 1;
  PsiTable table;
  table.values_.assign(size, 0.0);
  table.errors_.assign(size, 0.0);
  table.prime_counts_.assign(size, 0);
  table.prime_base_.assign(size, 0);

  for (std::int64_t p : primes_up_to(hi)) {
    std::int64_t power = p;
    for (;;) {
      table.prime_base_[static_cast<std::size_t>(power)] = static_cast<std::uint32_t>(p);
      if (power > hi / p) break;
      power *= p;
    }
  }

  CompensatedSum sum;
  double term_error = 0.0;
  std::uint32_t primes_seen = 0;
  for (std::size_t n = 2; n < size; ++n) {
    const auto p = table.prime_base_[n];
    if (p != 0) {
      const double term = std::log(static_cast<double>(p));
      sum += term;
      term_error += kTermRelativeError * term;
      if (p == n) ++primes_seen;
    }
    table.values_[n] = sum.value();
    table.errors_[n] = sum.error_bound() + term_error;
    table.prime_counts_[n] = primes_seen;
  }
  return table;
}

}  // namespace primebounds
