#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
//
// zero_windows: given an exclusive prefix-count array (prefix[i] counts
// occupied cells in [0, i)) and two offsets lo < hi, report every position p
// in [0, count) with prefix[p + hi] == prefix[p + lo], i.e. the occupancy
// window [p + lo, p + hi) is empty. The free-slot computation of the
// slotted protocol reduces to exactly this scan over a tripled occupancy
// array, which is why it is vectorised.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace beeps::kernels {

/// Writes qualifying positions in ascending order to `out` (capacity >= count)
/// and returns how many were written. prefix.size() must be >= count + hi.
using ZeroWindowsFn = std::size_t (*)(std::span<const std::int32_t> prefix, std::size_t count, std::size_t lo,
                                      std::size_t hi, std::span<std::uint32_t> out);

std::size_t zero_windows_scalar(std::span<const std::int32_t> prefix, std::size_t count, std::size_t lo,
                                std::size_t hi, std::span<std::uint32_t> out);

#if defined(BEEPS_HAVE_AVX2)
std::size_t zero_windows_avx2(std::span<const std::int32_t> prefix, std::size_t count, std::size_t lo,
                              std::size_t hi, std::span<std::uint32_t> out);
#endif

enum class Isa { Scalar, Avx2 };

/// True when the running CPU and this build both support `isa`.
bool supported(Isa isa) noexcept;

/// Best available variant; BEEPS_FORCE_SCALAR=1 in the environment pins scalar.
Isa active_isa() noexcept;
std::string_view isa_name(Isa isa) noexcept;
ZeroWindowsFn zero_windows_for(Isa isa) noexcept;

inline std::size_t zero_windows(std::span<const std::int32_t> prefix, std::size_t count, std::size_t lo,
                                std::size_t hi, std::span<std::uint32_t> out) {
  static const ZeroWindowsFn fn = zero_windows_for(active_isa());
  return fn(prefix, count, lo, hi, out);
}

}  // namespace beeps::kernels
