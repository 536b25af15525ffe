#include "iterseries/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace iterseries {

InputTransform InputTransform::affine(double scale, double offset) {
  if (!std::isfinite(scale) || scale == 0.0 || !std::isfinite(offset)) {
    throw Error(ErrorCode::InvalidArgument, "affine transform needs a finite non-zero scale");
  }
  return {Kind::affine, scale, offset};
}

InputTransform InputTransform::span_two_pi(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::EmptyDataset, "cannot span an empty x range");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (!(*hi > *lo)) throw Error(ErrorCode::InvalidArgument, "x range is a single point");
  const double scale = 2.0 * std::numbers::pi / (*hi - *lo);
  return affine(scale, -*lo * scale);
}

std::vector<double> apply_transform(const InputTransform& g, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return g(x); });
  return out;
}

BasisFamily::BasisFamily(FamilyKind kind, InputTransform transform)
    : kind_(kind), transform_(transform) {
  if (kind == FamilyKind::custom) {
    throw Error(ErrorCode::InvalidArgument, "custom families are built with BasisFamily::custom");
  }
}

BasisFamily BasisFamily::custom(std::shared_ptr<const CustomShape> shape, InputTransform transform) {
  if (!shape || !shape->value) throw Error(ErrorCode::InvalidArgument, "custom family without a shape");
  BasisFamily f;
  f.kind_ = FamilyKind::custom;
  f.transform_ = transform;
  f.shape_ = std::move(shape);
  return f;
}

BasisFamily BasisFamily::with_transform(InputTransform transform) const {
  BasisFamily f = *this;
  f.transform_ = transform;
  return f;
}

double BasisFamily::at_transformed(double beta, double gx) const {
  switch (kind_) {
    case FamilyKind::sine: return std::sin(beta * gx);
    case FamilyKind::cosine: return std::cos(beta * gx);
    case FamilyKind::custom: return shape_->value(beta, gx);
  }
  return 0.0;
}

const char* to_string(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::sine: return "sine";
    case FamilyKind::cosine: return "cosine";
    case FamilyKind::custom: return "custom";
  }
  return "?";
}

FamilyKind family_kind_from_string(std::string_view name) {
  if (name == "sine") return FamilyKind::sine;
  if (name == "cosine") return FamilyKind::cosine;
  throw Error(ErrorCode::InvalidArgument, "unknown basis family '" + std::string(name) + "'");
}

void FrequencyBand::validate() const {
  if (!std::isfinite(beta_min) || !std::isfinite(beta_max) || !(beta_min < beta_max)) {
    throw Error(ErrorCode::InvalidArgument, "frequency band needs beta_min < beta_max");
  }
  if (grid_points < 2) throw Error(ErrorCode::InvalidArgument, "frequency band needs >= 2 grid points");
}

std::vector<double> FrequencyBand::grid() const {
  validate();
  std::vector<double> g(grid_points);
  for (std::size_t k = 0; k < grid_points; ++k) g[k] = at(k);
  return g;
}

std::vector<double> evaluate_basis(const BasisFamily& family, double beta, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = family(beta, xs[i]);
  return out;
}

double basis_energy(const BasisFamily& family, double beta, const Dataset& d) {
  const auto x = d.x();
  const auto w = d.w();
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = family(beta, x[i]);
    e += w[i] * f * f;
  }
  return e;
}

}  // namespace iterseries
