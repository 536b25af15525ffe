// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <array>
#include <cmath>

#include "iterseries/kernels.hpp"

namespace iterseries::kernels {
namespace {

// Cody-Waite split of pi/4 and the minimax polynomials from Cephes sin.c.
constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDP1 = 7.85398125648498535156e-1;
constexpr double kDP2 = 3.77489470793079817668e-8;
constexpr double kDP3 = 2.69515142907905952645e-15;
// Beyond this the three-term reduction loses accuracy; those lanes go to libm.
constexpr double kReductionLimit = 1.0e8;

constexpr std::array<double, 6> kSinCoef = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
    -1.98412698295895385996e-4, 8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr std::array<double, 6> kCosCoef = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
    2.48015872888517045348e-5,   -1.38888888888730564116e-3, 4.16666666666665929218e-2};

template <std::size_t N>
inline __m256d horner(__m256d z, const std::array<double, N>& c) {
  __m256d acc = _mm256_set1_pd(c[0]);
  for (std::size_t i = 1; i < N; ++i) acc = _mm256_fmadd_pd(acc, z, _mm256_set1_pd(c[i]));
  return acc;
}

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// Shared octant reduction. Returns the reduced argument and the even octant
// index modulo 8 (0, 2, 4 or 6) as doubles.
inline void reduce(__m256d ax, __m256d& z, __m256d& octant) {
  __m256d j = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  // Round odd octants up to the next even one.
  j = _mm256_mul_pd(_mm256_set1_pd(2.0),
                    _mm256_floor_pd(_mm256_mul_pd(_mm256_add_pd(j, _mm256_set1_pd(1.0)), _mm256_set1_pd(0.5))));
  z = _mm256_fnmadd_pd(j, _mm256_set1_pd(kDP1), ax);
  z = _mm256_fnmadd_pd(j, _mm256_set1_pd(kDP2), z);
  z = _mm256_fnmadd_pd(j, _mm256_set1_pd(kDP3), z);
  octant = _mm256_sub_pd(j, _mm256_mul_pd(_mm256_set1_pd(8.0),
                                          _mm256_floor_pd(_mm256_mul_pd(j, _mm256_set1_pd(0.125)))));
}

inline __m256d sin_poly(__m256d z, __m256d zz) {
  return _mm256_fmadd_pd(_mm256_mul_pd(z, zz), horner(zz, kSinCoef), z);
}

inline __m256d cos_poly(__m256d zz) {
  const __m256d one_minus_half = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0));
  return _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), horner(zz, kCosCoef), one_minus_half);
}

template <bool Cosine>
inline __m256d sincos_pd(__m256d x) {
  const __m256d ax = abs_pd(x);
  __m256d z, oct;
  reduce(ax, z, oct);
  const __m256d zz = _mm256_mul_pd(z, z);
  const __m256d s = sin_poly(z, zz);
  const __m256d c = cos_poly(zz);

  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d six = _mm256_set1_pd(6.0);
  const __m256d odd_pair = _mm256_or_pd(_mm256_cmp_pd(oct, two, _CMP_EQ_OQ), _mm256_cmp_pd(oct, six, _CMP_EQ_OQ));
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  __m256d r;
  __m256d flip;
  if constexpr (Cosine) {
    // octant 0: cos, 2: -sin, 4: -cos, 6: sin
    r = _mm256_blendv_pd(c, s, odd_pair);
    const __m256d neg = _mm256_or_pd(_mm256_cmp_pd(oct, two, _CMP_EQ_OQ),
                                     _mm256_cmp_pd(oct, _mm256_set1_pd(4.0), _CMP_EQ_OQ));
    flip = _mm256_and_pd(neg, sign_bit);
  } else {
    // octant 0: sin, 2: cos, 4: -sin, 6: -cos; odd in x
    r = _mm256_blendv_pd(s, c, odd_pair);
    const __m256d neg = _mm256_cmp_pd(oct, _mm256_set1_pd(4.0), _CMP_GE_OQ);
    flip = _mm256_xor_pd(_mm256_and_pd(neg, sign_bit), _mm256_and_pd(x, sign_bit));
  }
  r = _mm256_xor_pd(r, flip);

  const __m256d big = _mm256_cmp_pd(ax, _mm256_set1_pd(kReductionLimit), _CMP_NLT_UQ);
  if (_mm256_movemask_pd(big) != 0) {
    alignas(32) double lanes[4];
    alignas(32) double vals[4];
    _mm256_store_pd(lanes, x);
    _mm256_store_pd(vals, r);
    const int m = _mm256_movemask_pd(big);
    for (int l = 0; l < 4; ++l) {
      if (m & (1 << l)) vals[l] = Cosine ? std::cos(lanes[l]) : std::sin(lanes[l]);
    }
    r = _mm256_load_pd(vals);
  }
  return r;
}

template <bool Cosine>
void project_block(const double* betas, const Samples& s, Projection* out, std::size_t count) {
  alignas(32) double b[4];
  for (std::size_t l = 0; l < 4; ++l) b[l] = betas[l < count ? l : count - 1];
  const __m256d beta = _mm256_load_pd(b);
  __m256d dot = _mm256_setzero_pd();
  __m256d energy = _mm256_setzero_pd();
  const std::size_t n = s.gx.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Separate multiply and add keep the rounding of the scalar reference.
    const __m256d f = sincos_pd<Cosine>(_mm256_mul_pd(beta, _mm256_set1_pd(s.gx[i])));
    dot = _mm256_add_pd(dot, _mm256_mul_pd(_mm256_set1_pd(s.wr[i]), f));
    energy = _mm256_add_pd(energy, _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(s.w[i]), f), f));
  }
  alignas(32) double d[4];
  alignas(32) double e[4];
  _mm256_store_pd(d, dot);
  _mm256_store_pd(e, energy);
  for (std::size_t l = 0; l < count; ++l) out[l] = {d[l], e[l]};
}

template <bool Cosine>
void elementwise(std::span<const double> in, std::span<double> out) {
  if (in.size() != out.size()) throw Error(ErrorCode::LengthMismatch, "sin/cos buffers differ in length");
  std::size_t i = 0;
  for (; i + 4 <= in.size(); i += 4) _mm256_storeu_pd(out.data() + i, sincos_pd<Cosine>(_mm256_loadu_pd(in.data() + i)));
  if (i < in.size()) {
    alignas(32) double tmp[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t l = 0; i + l < in.size(); ++l) tmp[l] = in[i + l];
    _mm256_store_pd(tmp, sincos_pd<Cosine>(_mm256_load_pd(tmp)));
    for (std::size_t l = 0; i + l < in.size(); ++l) out[i + l] = tmp[l];
  }
}

}  // namespace

void project_avx2(FamilyKind kind, std::span<const double> betas, const Samples& s,
                  std::span<Projection> out) {
  if (kind == FamilyKind::custom) throw Error(ErrorCode::InvalidArgument, "kernels cover sine and cosine only");
  for (std::size_t k = 0; k < betas.size(); k += 4) {
    const std::size_t count = betas.size() - k < 4 ? betas.size() - k : 4;
    if (kind == FamilyKind::sine) {
      project_block<false>(betas.data() + k, s, out.data() + k, count);
    } else {
      project_block<true>(betas.data() + k, s, out.data() + k, count);
    }
  }
}

void sin_avx2(std::span<const double> in, std::span<double> out) { elementwise<false>(in, out); }
void cos_avx2(std::span<const double> in, std::span<double> out) { elementwise<true>(in, out); }

}  // namespace iterseries::kernels
