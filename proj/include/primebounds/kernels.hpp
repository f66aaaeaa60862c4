#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace primebounds::kernels {

// Instruction set used by a kernel implementation.
enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

// Best implementation supported by the running CPU.
Isa detect_isa();

// Implementations compiled into this binary and usable on this CPU.
std::vector<Isa> available_isas();

// Number of nonzero bytes in a 0/1 primality bitmap.
std::int64_t count_marked(std::span<const std::uint8_t> flags);

// Explicit-variant entry point, used by the equivalence tests.
// Throws ConfigError if `isa` is not available.
std::int64_t count_marked(std::span<const std::uint8_t> flags, Isa isa);

// Per-variant kernels. Only the scalar one is unconditionally present.
std::int64_t count_marked_scalar(std::span<const std::uint8_t> flags);
#if defined(PRIMEBOUNDS_HAVE_AVX2_TU) || defined(__x86_64__) || defined(_M_X64)
std::int64_t count_marked_avx2(std::span<const std::uint8_t> flags);
#endif
#if defined(__aarch64__)
std::int64_t count_marked_neon(std::span<const std::uint8_t> flags);
#endif

}  // namespace primebounds::kernels
