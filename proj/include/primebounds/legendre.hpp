#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace primebounds {

// Largest argument accepted by the Legendre point query. Beyond it the
// square-root and product intermediates no longer fit in int64_t.
inline constexpr std::int64_t kLegendreMax = std::int64_t{1} << 62;

// Legendre's partial sieve function phi(x, a): the count of 1 <= n <= x with
// no prime factor among the first a primes.
//
// The evaluator owns the primes it needs and a memo for small (x, a); reuse
// one instance for many queries of similar size.
class LegendreCounter {
 public:
  // Prepares primes and a small pi lookup sufficient for arguments <= max_x.
  explicit LegendreCounter(std::int64_t max_x);

  std::int64_t phi(std::int64_t x, std::int64_t a);

  // pi(x) = phi(x, a) + a - 1 with a = pi(floor(sqrt(x))).
  std::int64_t pi(std::int64_t x);

  std::int64_t max_x() const { return max_x_; }

 private:
  std::int64_t phi_rec(std::int64_t x, std::int64_t a);
  std::int64_t small_pi(std::int64_t x) const { return small_pi_[static_cast<std::size_t>(x)]; }

  std::int64_t max_x_;
  std::vector<std::int64_t> primes_;
  std::vector<std::uint32_t> small_pi_;  // pi(n) for n <= small_limit_
  std::int64_t small_limit_;
  // phi(x, a) for 1 <= a <= kWheelPrimes via the primorial period.
  std::vector<std::vector<std::int32_t>> wheel_;
  std::vector<std::int64_t> primorial_;
  std::unordered_map<std::uint64_t, std::int64_t> memo_;
};

// phi(x, a) for a one-off query.
std::int64_t phi(std::int64_t x, std::int64_t a);

// pi(x) by Legendre's identity; agrees exactly with the sieve.
// Throws OverflowError if x > kLegendreMax.
std::int64_t pi_point_legendre(std::int64_t x);

}  // namespace primebounds
