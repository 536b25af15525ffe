#include <cstdlib>
#include <string>

#include "iterseries/kernels.hpp"

namespace iterseries::kernels {

bool available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(ITERSERIES_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa best_available() noexcept {
  if (const char* forced = std::getenv("ITERSERIES_ISA"); forced && std::string_view(forced) == "scalar") {
    return Isa::scalar;
  }
  return available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

ProjectFn select(Isa isa) {
  if (!available(isa)) {
    throw Error(ErrorCode::InvalidArgument, "kernel variant '" + std::string(to_string(isa)) + "' unavailable");
  }
  switch (isa) {
    case Isa::scalar: return &project_scalar;
    case Isa::avx2:
#if defined(ITERSERIES_HAVE_AVX2)
      return &project_avx2;
#else
      break;
#endif
  }
  return &project_scalar;
}

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

Isa isa_from_string(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "auto") return best_available();
  throw Error(ErrorCode::InvalidArgument, "unknown kernel variant '" + std::string(name) + "'");
}

}  // namespace iterseries::kernels
