#pragma once

#include <cstdint>
#include <vector>

#include "primebounds/limits.hpp"

namespace primebounds {

// Chebyshev's psi(x) = sum of log p over prime powers p^k <= x.
struct PsiValue {
  std::int64_t x = 0;
  double value = 0.0;          // natural-log units
  std::int64_t term_count = 0;  // number of prime powers <= x
  double error_bound = 0.0;     // bound on |value - psi(x)|
};

// psi(x) as sum over p <= x of max_power_le(p, x) * log p, with compensated
// summation. x <= limits.cap.
PsiValue psi_at(std::int64_t x, const Limits& limits = {});

// psi(n) for every 0 <= n <= hi, accumulated incrementally over the von
// Mangoldt function with compensated summation. Immutable after construction.
class PsiTable {
 public:
  std::int64_t hi() const { return static_cast<std::int64_t>(values_.size()) - 1; }
  double value(std::int64_t n) const { return values_[static_cast<std::size_t>(n)]; }
  double error_bound(std::int64_t n) const { return errors_[static_cast<std::size_t>(n)]; }

  // Number of primes <= n that the table's sieve saw; pi(n) for free.
  std::int64_t prime_count(std::int64_t n) const { return prime_counts_[static_cast<std::size_t>(n)]; }

  // log p if n = p^k for a prime p and k >= 1, else 0.
  double mangoldt(std::int64_t n) const;

 private:
  friend PsiTable psi_table(std::int64_t hi, const Limits& limits);
  std::vector<double> values_;
  std::vector<double> errors_;
  std::vector<std::uint32_t> prime_counts_;
  std::vector<std::uint32_t> prime_base_;  // p if n = p^k, else 0
};

PsiTable psi_table(std::int64_t hi, const Limits& limits = {});

}  // namespace primebounds
