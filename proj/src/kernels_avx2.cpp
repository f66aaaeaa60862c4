#include "primebounds/kernels.hpp"

#if defined(PRIMEBOUNDS_HAVE_AVX2_TU)
#include <immintrin.h>

namespace primebounds::kernels {

// Sums 0/1 flags 32 bytes at a time. Any nonzero byte counts as one, so the
// result matches count_marked_scalar for arbitrary input bytes.
std::int64_t count_marked_avx2(std::span<const std::uint8_t> flags) {
  const std::uint8_t* p = flags.data();
  const std::size_t n = flags.size();
  const __m256i zero = _mm256_setzero_si256();
  std::int64_t total = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const unsigned zero_mask =
        static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(v, zero)));
    total += 32 - __builtin_popcount(zero_mask);
  }
  for (; i < n; ++i) total += (p[i] != 0);
  return total;
}

}  // namespace primebounds::kernels
#endif
