#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "primebounds/limits.hpp"

namespace primebounds {

// floor(sqrt(n)) computed exactly.
std::int64_t isqrt(std::int64_t n);

// All primes <= limit, by a plain sieve of Eratosthenes.
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

// Primality bitmap for [lo, hi]: result[i] == 1 iff lo + i is prime.
//
// base_primes must contain every prime <= floor(sqrt(hi)) in increasing
// order; a gap is reported as ConfigError. Requires 2 <= lo <= hi.
std::vector<std::uint8_t> sieve_segment(std::int64_t lo, std::int64_t hi,
                                        std::span<const std::int64_t> base_primes);

// Cumulative prime counts over a contiguous range: count(x) == pi(x) for
// lo <= x <= hi. Immutable after construction.
class PiTable {
 public:
  PiTable(std::int64_t lo, std::vector<std::uint32_t> counts);

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(counts_.size()) - 1; }
  std::size_t size() const { return counts_.size(); }
  bool contains(std::int64_t x) const { return x >= lo_ && x <= hi(); }

  // pi(x); x must lie in [lo, hi].
  std::int64_t count(std::int64_t x) const;
  std::span<const std::uint32_t> counts() const { return counts_; }

  // True iff the table is nondecreasing in steps of 0 or 1.
  bool is_step_monotone() const;

 private:
  std::int64_t lo_;
  std::vector<std::uint32_t> counts_;
};

// Number of primes <= n, by segmented sieving and counting. n <= limits.cap.
std::int64_t count_primes_up_to(std::int64_t n, const Limits& limits = {});

// Builds pi over [lo, hi]. Requires 0 <= lo <= hi <= limits.cap; segments
// may be sieved in parallel, the merge is by segment index.
PiTable pi_table(std::int64_t lo, std::int64_t hi, const Limits& limits = {});

// pi(floor(x)). Uses the sieve up to limits.cap and Legendre above it.
std::int64_t pi_at(double x, const Limits& limits = {});
std::int64_t pi_at(std::int64_t x, const Limits& limits = {});

// Largest k with p^k <= x (0 when x < p), by exact integer multiplication.
int max_power_le(std::int64_t p, std::int64_t x);

}  // namespace primebounds
