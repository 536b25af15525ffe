#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "iterseries/core.hpp"

namespace iterseries {

/// g(x) in f(beta, x) = shape(beta * g(x)).
struct InputTransform {
  enum class Kind { identity, affine };

  Kind kind = Kind::identity;
  double scale = 1.0;
  double offset = 0.0;

  static InputTransform identity() { return {}; }
  /// Throws InvalidArgument for a zero or non-finite scale.
  static InputTransform affine(double scale, double offset);
  /// Affine map sending [min x, max x] of the data onto [0, 2*pi].
  static InputTransform span_two_pi(std::span<const double> xs);

  double operator()(double x) const noexcept {
    return kind == Kind::identity ? x : scale * x + offset;
  }

  friend bool operator==(const InputTransform&, const InputTransform&) = default;
};

std::vector<double> apply_transform(const InputTransform& g, std::span<const double> xs);

enum class FamilyKind { sine, cosine, custom };

/// User-supplied family: value(beta, g(x)). Must return finite values for
/// finite arguments. Custom families are not serialisable.
struct CustomShape {
  std::string name;
  std::function<double(double beta, double gx)> value;
};

class BasisFamily {
 public:
  BasisFamily() = default;
  BasisFamily(FamilyKind kind, InputTransform transform = {});
  static BasisFamily sine(InputTransform transform = {}) { return {FamilyKind::sine, transform}; }
  static BasisFamily cosine(InputTransform transform = {}) { return {FamilyKind::cosine, transform}; }
  static BasisFamily custom(std::shared_ptr<const CustomShape> shape, InputTransform transform = {});

  FamilyKind kind() const noexcept { return kind_; }
  const InputTransform& transform() const noexcept { return transform_; }
  const std::shared_ptr<const CustomShape>& shape() const noexcept { return shape_; }
  BasisFamily with_transform(InputTransform transform) const;

  /// Value at an already transformed abscissa.
  double at_transformed(double beta, double gx) const;
  double operator()(double beta, double x) const { return at_transformed(beta, transform_(x)); }

  bool is_sinusoid() const noexcept { return kind_ != FamilyKind::custom; }

 private:
  FamilyKind kind_ = FamilyKind::sine;
  InputTransform transform_;
  std::shared_ptr<const CustomShape> shape_;
};

const char* to_string(FamilyKind kind) noexcept;
FamilyKind family_kind_from_string(std::string_view name);

/// Uniform search grid over [beta_min, beta_max], endpoints included.
struct FrequencyBand {
  double beta_min = 0.05;
  double beta_max = 3.2;
  std::size_t grid_points = 4096;

  /// Throws InvalidArgument unless beta_min < beta_max and grid_points >= 2.
  void validate() const;
  double step() const noexcept { return (beta_max - beta_min) / double(grid_points - 1); }
  double at(std::size_t k) const noexcept {
    return k + 1 == grid_points ? beta_max : beta_min + double(k) * step();
  }
  std::vector<double> grid() const;
};

std::vector<double> evaluate_basis(const BasisFamily& family, double beta, std::span<const double> xs);

/// Sum_i w_i f(beta, x_i)^2, the denominator of the optimal amplitude.
double basis_energy(const BasisFamily& family, double beta, const Dataset& d);

}  // namespace iterseries
