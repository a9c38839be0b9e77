// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "beeps/kernels.hpp"

namespace beeps::kernels {

std::size_t zero_windows_avx2(std::span<const std::int32_t> prefix, std::size_t count, std::size_t lo,
                              std::size_t hi, std::span<std::uint32_t> out) {
  const std::int32_t* base = prefix.data();
  std::size_t written = 0;
  std::size_t p = 0;
  for (; p + 8 <= count; p += 8) {
    const __m256i upper = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base + p + hi));
    const __m256i lower = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base + p + lo));
    const __m256i empty = _mm256_cmpeq_epi32(upper, lower);
    auto mask = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(empty)));
    while (mask != 0) {
      const int lane = __builtin_ctz(mask);
      out[written++] = static_cast<std::uint32_t>(p + static_cast<std::size_t>(lane));
      mask &= mask - 1;
    }
  }
  for (; p < count; ++p) {
    if (base[p + hi] == base[p + lo]) out[written++] = static_cast<std::uint32_t>(p);
  }
  return written;
}

}  // namespace beeps::kernels
