#include <cstdlib>
#include <cstring>

#include "beeps/kernels.hpp"

namespace beeps::kernels {

std::size_t zero_windows_scalar(std::span<const std::int32_t> prefix, std::size_t count, std::size_t lo,
                                std::size_t hi, std::span<std::uint32_t> out) {
  std::size_t written = 0;
  for (std::size_t p = 0; p < count; ++p) {
    if (prefix[p + hi] == prefix[p + lo]) out[written++] = static_cast<std::uint32_t>(p);
  }
  return written;
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(BEEPS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept {
  const char* force = std::getenv("BEEPS_FORCE_SCALAR");
  if (force != nullptr && std::strcmp(force, "0") != 0) return Isa::Scalar;
  return supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

ZeroWindowsFn zero_windows_for(Isa isa) noexcept {
#if defined(BEEPS_HAVE_AVX2)
  if (isa == Isa::Avx2 && supported(Isa::Avx2)) return &zero_windows_avx2;
#endif
  (void)isa;
  return &zero_windows_scalar;
}

}  // namespace beeps::kernels
