#pragma once

// Projection kernels for the frequency scan. For every candidate beta they
// accumulate, in sample order,
//   dot    = sum_i (w_i r_i) * f(beta * gx_i)
//   energy = sum_i  w_i      * f(beta * gx_i)^2
// The scalar variant is the reference; SIMD variants vectorise across betas
// so the per-beta accumulation order matches the reference exactly and the
// only differences come from the sine/cosine approximation and FMA rounding.

#include <cstddef>
#include <span>
#include <string_view>

#include "iterseries/basis.hpp"

namespace iterseries::kernels {

enum class Isa { scalar, avx2 };

struct Projection {
  double dot = 0.0;
  double energy = 0.0;
};

/// Sample columns already multiplied out: gx = g(x), w, wr = w * r.
struct Samples {
  std::span<const double> gx;
  std::span<const double> w;
  std::span<const double> wr;
};

using ProjectFn = void (*)(FamilyKind kind, std::span<const double> betas, const Samples& s,
                           std::span<Projection> out);

void project_scalar(FamilyKind kind, std::span<const double> betas, const Samples& s,
                    std::span<Projection> out);

#if defined(ITERSERIES_HAVE_AVX2)
void project_avx2(FamilyKind kind, std::span<const double> betas, const Samples& s,
                  std::span<Projection> out);
/// Elementwise sine / cosine; exposed for accuracy tests.
void sin_avx2(std::span<const double> in, std::span<double> out);
void cos_avx2(std::span<const double> in, std::span<double> out);
#endif

/// True when the variant was compiled in and the running CPU supports it.
bool available(Isa isa) noexcept;
/// Best available variant; ITERSERIES_ISA=scalar in the environment forces the reference.
Isa best_available() noexcept;
/// Throws InvalidArgument when the variant is unavailable.
ProjectFn select(Isa isa);

std::string_view to_string(Isa isa) noexcept;
Isa isa_from_string(std::string_view name);

}  // namespace iterseries::kernels
