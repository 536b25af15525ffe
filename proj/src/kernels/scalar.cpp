#include <cmath>

#include "iterseries/kernels.hpp"

namespace iterseries::kernels {

void project_scalar(FamilyKind kind, std::span<const double> betas, const Samples& s,
                    std::span<Projection> out) {
  if (kind == FamilyKind::custom) throw Error(ErrorCode::InvalidArgument, "kernels cover sine and cosine only");
  const std::size_t n = s.gx.size();
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const double beta = betas[k];
    double dot = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = beta * s.gx[i];
      const double f = kind == FamilyKind::sine ? std::sin(arg) : std::cos(arg);
      dot += s.wr[i] * f;
      energy += s.w[i] * f * f;
    }
    out[k] = {dot, energy};
  }
}

}  // namespace iterseries::kernels
