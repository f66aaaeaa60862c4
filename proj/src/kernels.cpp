#include "primebounds/kernels.hpp"

#include <algorithm>
#include <string>

#include "primebounds/errors.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace primebounds::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

namespace {

bool cpu_has_avx2() {
#if defined(PRIMEBOUNDS_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

Isa detect_isa() {
  static const Isa isa = [] {
    if (cpu_has_avx2()) return Isa::Avx2;
#if defined(__aarch64__)
    return Isa::Neon;
#else
    return Isa::Scalar;
#endif
  }();
  return isa;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (cpu_has_avx2()) out.push_back(Isa::Avx2);
#if defined(__aarch64__)
  out.push_back(Isa::Neon);
#endif
  return out;
}

std::int64_t count_marked_scalar(std::span<const std::uint8_t> flags) {
  std::int64_t total = 0;
  for (std::uint8_t f : flags) total += (f != 0);
  return total;
}

#if defined(__aarch64__)
std::int64_t count_marked_neon(std::span<const std::uint8_t> flags) {
  const std::uint8_t* p = flags.data();
  const std::size_t n = flags.size();
  const uint8x16_t one = vdupq_n_u8(1);
  std::size_t i = 0;
  std::int64_t total = 0;
  // 255 iterations keep each u8 lane from wrapping.
  while (i + 16 <= n) {
    uint8x16_t acc = vdupq_n_u8(0);
    const std::size_t stop = std::min(n - 15, i + 255 * 16);
    for (; i < stop; i += 16) {
      const uint8x16_t v = vld1q_u8(p + i);
      acc = vaddq_u8(acc, vminq_u8(v, one));
    }
    total += vaddlvq_u8(acc);
  }
  for (; i < n; ++i) total += (p[i] != 0);
  return total;
}
#endif

std::int64_t count_marked(std::span<const std::uint8_t> flags, Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return count_marked_scalar(flags);
    case Isa::Avx2:
#if defined(PRIMEBOUNDS_HAVE_AVX2_TU)
      if (cpu_has_avx2()) return count_marked_avx2(flags);
#endif
      break;
    case Isa::Neon:
#if defined(__aarch64__)
      return count_marked_neon(flags);
#endif
      break;
  }
  throw ConfigError("kernel variant '" + std::string(to_string(isa)) +
                    "' is not available on this machine");
}

std::int64_t count_marked(std::span<const std::uint8_t> flags) {
  return count_marked(flags, detect_isa());
}

}  // namespace primebounds::kernels
