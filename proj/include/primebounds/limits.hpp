#pragma once

#include <cstdint>

namespace primebounds {

inline constexpr std::int64_t kDefaultScanCap = 5'000'000;
inline constexpr std::int64_t kDefaultSegmentLength = std::int64_t{1} << 20;

// Resource configuration shared by every table-building operation.
struct Limits {
  std::int64_t cap = kDefaultScanCap;  // largest x a table may reach
  std::int64_t segment_length = kDefaultSegmentLength;
  unsigned threads = 1;  // 0 = hardware concurrency
};

// Resolves threads == 0 to the hardware concurrency (at least 1).
unsigned effective_threads(const Limits& limits);

}  // namespace primebounds
