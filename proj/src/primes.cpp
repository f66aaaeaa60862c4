#include "primebounds/primes.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "primebounds/errors.hpp"
#include "primebounds/kernels.hpp"
#include "primebounds/legendre.hpp"

namespace primebounds {

unsigned effective_threads(const Limits& limits) {
  if (limits.threads != 0) return limits.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw DomainError("isqrt of negative value " + std::to_string(n));
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> out;
  if (limit < 2) return out;
  std::vector<std::uint8_t> composite(static_cast<std::size_t>(limit) + 1, 0);
  for (std::int64_t i = 2; i * i <= limit; ++i) {
    if (composite[i]) continue;
    for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) out.push_back(i);
  }
  return out;
}

namespace {

bool is_prime_by_base(std::int64_t n, std::span<const std::int64_t> base) {
  for (std::int64_t p : base) {
    if (p > n / p) break;
    if (n % p == 0) return false;
  }
  return n >= 2;
}

void require_base_primes(std::int64_t hi, std::span<const std::int64_t> base) {
  const std::int64_t root = isqrt(hi);
  const std::int64_t largest = base.empty() ? 1 : base.back();
  for (std::int64_t n = largest + 1; n <= root; ++n) {
    if (is_prime_by_base(n, base)) {
      throw ConfigError("base primes incomplete: prime " + std::to_string(n) +
                        " <= sqrt(" + std::to_string(hi) + ") is missing");
    }
  }
}

// Sieves [lo, hi] into out[0 .. hi-lo]; base primes are trusted.
void sieve_into(std::int64_t lo, std::int64_t hi, std::span<const std::int64_t> base,
                std::span<std::uint8_t> out) {
  std::fill(out.begin(), out.end(), std::uint8_t{1});
  for (std::int64_t p : base) {
    if (p > hi / p) break;
    std::int64_t start = ((lo + p - 1) / p) * p;
    if (start < p * p) start = p * p;
    for (std::int64_t j = start; j <= hi; j += p) out[static_cast<std::size_t>(j - lo)] = 0;
  }
}

void require_within_cap(std::int64_t hi, const Limits& limits) {
  if (hi > limits.cap) {
    throw ResourceLimitError("requested x = " + std::to_string(hi) +
                             " exceeds the scan cap " + std::to_string(limits.cap));
  }
}

struct Segmentation {
  std::int64_t lo;
  std::int64_t hi;
  std::int64_t length;
  std::size_t count() const {
    return static_cast<std::size_t>((hi - lo) / length + 1);
  }
  std::int64_t begin(std::size_t i) const { return lo + static_cast<std::int64_t>(i) * length; }
  std::int64_t end(std::size_t i) const { return std::min(hi, begin(i) + length - 1); }
};

}  // namespace

std::vector<std::uint8_t> sieve_segment(std::int64_t lo, std::int64_t hi,
                                        std::span<const std::int64_t> base_primes) {
  if (lo < 2 || hi < lo) {
    throw DomainError("sieve_segment requires 2 <= lo <= hi, got [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  }
  require_base_primes(hi, base_primes);
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(hi - lo + 1));
  sieve_into(lo, hi, base_primes, flags);
  return flags;
}

PiTable::PiTable(std::int64_t lo, std::vector<std::uint32_t> counts)
    : lo_(lo), counts_(std::move(counts)) {
  if (lo_ < 0) throw DomainError("PiTable lower end must be >= 0");
  if (counts_.empty()) throw DomainError("PiTable must cover at least one point");
  assert(is_step_monotone());
}

std::int64_t PiTable::count(std::int64_t x) const {
  if (!contains(x)) {
    throw DomainError("x = " + std::to_string(x) + " outside table [" + std::to_string(lo_) +
                      ", " + std::to_string(hi()) + "]");
  }
  return counts_[static_cast<std::size_t>(x - lo_)];
}

bool PiTable::is_step_monotone() const {
  for (std::size_t i = 1; i < counts_.size(); ++i) {
    const auto step = static_cast<std::int64_t>(counts_[i]) - counts_[i - 1];
    if (step != 0 && step != 1) return false;
  }
  return true;
}

std::int64_t count_primes_up_to(std::int64_t n, const Limits& limits) {
  require_within_cap(n, limits);
  if (n < 2) return 0;
  const auto base = primes_up_to(isqrt(n));
  const Segmentation seg{2, n, std::max<std::int64_t>(1, limits.segment_length)};
  std::vector<std::int64_t> per_segment(seg.count(), 0);
  detail::parallel_for(seg.count(), effective_threads(limits), [&](std::size_t i) {
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(seg.end(i) - seg.begin(i) + 1));
    sieve_into(seg.begin(i), seg.end(i), base, flags);
    per_segment[i] = kernels::count_marked(flags);
  });
  std::int64_t total = 0;
  for (std::int64_t c : per_segment) total += c;
  return total;
}

PiTable pi_table(std::int64_t lo, std::int64_t hi, const Limits& limits) {
  if (lo < 0 || hi < lo) {
    throw DomainError("pi_table requires 0 <= lo <= hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  require_within_cap(hi, limits);
  if (hi > std::numeric_limits<std::uint32_t>::max()) {
    throw OverflowError("pi_table entries are 32-bit; hi too large");
  }
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  const std::int64_t first = std::max<std::int64_t>(lo, 2);
  if (first <= hi) {
    const auto base = primes_up_to(isqrt(hi));
    const Segmentation seg{first, hi, std::max<std::int64_t>(1, limits.segment_length)};
    detail::parallel_for(seg.count(), effective_threads(limits), [&](std::size_t i) {
      const std::int64_t b = seg.begin(i);
      const std::int64_t e = seg.end(i);
      std::vector<std::uint8_t> flags(static_cast<std::size_t>(e - b + 1));
      sieve_into(b, e, base, flags);
      std::copy(flags.begin(), flags.end(), counts.begin() + (b - lo));
    });
  }
  std::uint32_t running =
      lo >= 3 ? static_cast<std::uint32_t>(count_primes_up_to(lo - 1, limits)) : 0;
  for (auto& c : counts) {
    running += c;
    c = running;
  }
  return PiTable(lo, std::move(counts));
}

std::int64_t pi_at(std::int64_t x, const Limits& limits) {
  if (x < 0) throw DomainError("pi_at requires x >= 0, got " + std::to_string(x));
  if (x <= limits.cap) return count_primes_up_to(x, limits);
  return pi_point_legendre(x);
}

std::int64_t pi_at(double x, const Limits& limits) {
  if (!(x >= 0)) throw DomainError("pi_at requires x >= 0");
  const double f = std::floor(x);
  if (f > static_cast<double>(kLegendreMax)) {
    throw OverflowError("pi_at argument exceeds the supported integer range");
  }
  return pi_at(static_cast<std::int64_t>(f), limits);
}

int max_power_le(std::int64_t p, std::int64_t x) {
  if (p < 2) throw DomainError("max_power_le requires p >= 2, got " + std::to_string(p));
  int k = 0;
  std::int64_t power = 1;
  while (power <= x / p) {
    power *= p;
    ++k;
  }
  return k;
}

}  // namespace primebounds
