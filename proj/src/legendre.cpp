#include "primebounds/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "primebounds/errors.hpp"
#include "primebounds/primes.hpp"

namespace primebounds {

namespace {

constexpr std::int64_t kWheelPrimes = 6;             // 2, 3, 5, 7, 11, 13
constexpr std::int64_t kSmallPiCeiling = std::int64_t{1} << 22;
constexpr std::int64_t kMemoMaxX = std::int64_t{1} << 31;
constexpr std::size_t kMemoMaxEntries = std::size_t{1} << 22;

std::int64_t icbrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && r * r > n / r) --r;
  while ((r + 1) * (r + 1) <= n / (r + 1)) ++r;
  return r;
}

}  // namespace

LegendreCounter::LegendreCounter(std::int64_t max_x) : max_x_(std::max<std::int64_t>(max_x, 2)) {
  if (max_x_ > kLegendreMax) {
    throw OverflowError("Legendre point queries are limited to x <= 2^62, got " +
                        std::to_string(max_x_));
  }
  const std::int64_t root = isqrt(max_x_);
  const std::int64_t c = icbrt(max_x_);
  small_limit_ = std::clamp(c * c, root, std::max(root, kSmallPiCeiling));
  // 2 * limit guarantees the prime after every tabulated one is present.
  primes_ = primes_up_to(std::max<std::int64_t>(2 * small_limit_ + 16, 64));

  small_pi_.assign(static_cast<std::size_t>(small_limit_) + 1, 0);
  std::size_t next = 0;
  std::uint32_t running = 0;
  for (std::int64_t n = 0; n <= small_limit_; ++n) {
    if (next < primes_.size() && primes_[next] == n) {
      ++running;
      ++next;
    }
    small_pi_[static_cast<std::size_t>(n)] = running;
  }

  // wheel_[a][r] = phi(r, a) for 0 <= r < primorial(a).
  wheel_.resize(kWheelPrimes + 1);
  primorial_.assign(kWheelPrimes + 1, 1);
  for (std::int64_t a = 1; a <= kWheelPrimes; ++a) {
    primorial_[a] = primorial_[a - 1] * primes_[a - 1];
    auto& table = wheel_[a];
    table.assign(static_cast<std::size_t>(primorial_[a]), 0);
    std::int32_t running_count = 0;
    for (std::int64_t r = 1; r < primorial_[a]; ++r) {
      bool coprime = true;
      for (std::int64_t i = 0; i < a; ++i) {
        if (r % primes_[i] == 0) {
          coprime = false;
          break;
        }
      }
      running_count += coprime;
      table[static_cast<std::size_t>(r)] = running_count;
    }
  }
}

std::int64_t LegendreCounter::phi(std::int64_t x, std::int64_t a) {
  if (x < 0 || a < 0) {
    throw DomainError("phi requires x >= 0 and a >= 0, got (" + std::to_string(x) + ", " +
                      std::to_string(a) + ")");
  }
  if (x > kLegendreMax) throw OverflowError("phi argument exceeds 2^62");
  if (a >= static_cast<std::int64_t>(primes_.size())) {
    // Every prime <= x is among the first a primes once p_a > x; beyond the
    // tabulated primes this is only reachable for tiny x.
    if (x < primes_.back()) return x >= 1 ? 1 : 0;
    throw ConfigError("phi: a = " + std::to_string(a) + " exceeds the prepared prime table");
  }
  return phi_rec(x, a);
}

std::int64_t LegendreCounter::phi_rec(std::int64_t x, std::int64_t a) {
  if (a == 0) return x;
  if (x == 0) return 0;
  if (a <= kWheelPrimes) {
    const std::int64_t period = primorial_[a];
    const std::int64_t per_period = wheel_[a][static_cast<std::size_t>(period - 1)];
    return (x / period) * per_period + wheel_[a][static_cast<std::size_t>(x % period)];
  }
  // primes_[a] is p_{a+1}. Below p_{a+1}^2 only 1 and the primes in
  // (p_a, x] survive the sieve.
  const std::int64_t next_prime = primes_[static_cast<std::size_t>(a)];
  if (x < next_prime) return 1;
  if (x <= small_limit_ && x / next_prime < next_prime) {
    return 1 + std::max<std::int64_t>(0, small_pi(x) - a);
  }

  const bool memoize = x < kMemoMaxX;
  const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(a);
  if (memoize) {
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }

  // phi(x, a) = phi(x, w) - sum_{i=w+1}^{a} phi(x / p_i, i - 1)
  std::int64_t result = phi_rec(x, kWheelPrimes);
  for (std::int64_t i = kWheelPrimes + 1; i <= a; ++i) {
    const std::int64_t p = primes_[static_cast<std::size_t>(i - 1)];
    if (p > x / p) {
      // x / p < p: each remaining term is phi(y, i - 1) = 1 for 1 <= y < p_i.
      result -= a - i + 1;
      break;
    }
    result -= phi_rec(x / p, i - 1);
  }

  if (memoize && memo_.size() < kMemoMaxEntries) memo_.emplace(key, result);
  return result;
}

std::int64_t LegendreCounter::pi(std::int64_t x) {
  if (x < 2) return 0;
  if (x > max_x_) {
    throw ConfigError("LegendreCounter prepared for x <= " + std::to_string(max_x_) +
                      ", asked for " + std::to_string(x));
  }
  const std::int64_t a = small_pi(isqrt(x));
  return phi_rec(x, a) + a - 1;
}

std::int64_t phi(std::int64_t x, std::int64_t a) {
  if (x < 0 || a < 0) {
    throw DomainError("phi requires x >= 0 and a >= 0, got (" + std::to_string(x) + ", " +
                      std::to_string(a) + ")");
  }
  LegendreCounter counter(std::max<std::int64_t>(x, 4));
  return counter.phi(x, a);
}

std::int64_t pi_point_legendre(std::int64_t x) {
  if (x > kLegendreMax) {
    throw OverflowError("Legendre point queries are limited to x <= 2^62, got " +
                        std::to_string(x));
  }
  if (x < 2) return 0;
  LegendreCounter counter(x);
  return counter.pi(x);
}

}  // namespace primebounds
