#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "iterseries/basis.hpp"

namespace iterseries {

/// Starting approximation f0 that the series is grown on.
struct BaseModel {
  enum class Kind { zero, constant, linear };

  Kind kind = Kind::zero;
  /// constant: {c}; linear: {intercept, slope}; zero: {}.
  std::vector<double> params;

  static BaseModel zero() { return {}; }
  static BaseModel constant(double c) { return {Kind::constant, {c}}; }
  static BaseModel linear(double intercept, double slope) { return {Kind::linear, {intercept, slope}}; }

  double operator()(double x) const noexcept;

  friend bool operator==(const BaseModel&, const BaseModel&) = default;
};

const char* to_string(BaseModel::Kind kind) noexcept;
BaseModel::Kind base_kind_from_string(std::string_view name);

struct Term {
  FamilyKind kind = FamilyKind::sine;
  double beta = 0.0;
  double alpha = 0.0;
  /// Only set for FamilyKind::custom.
  std::shared_ptr<const CustomShape> shape;

  double operator()(double gx) const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.beta == b.beta && a.alpha == b.alpha && a.shape == b.shape;
  }
};

struct ModelMetadata {
  std::size_t iterations = 0;
  double final_ss = 0.0;

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

/// y = f0(x) + sum_j alpha_j * f_j(beta_j * g(x)), terms in fitting order.
struct SeriesModel {
  BaseModel base;
  InputTransform transform;
  std::vector<Term> terms;
  ModelMetadata metadata;

  friend bool operator==(const SeriesModel&, const SeriesModel&) = default;
};

double predict(const SeriesModel& m, double x);
std::vector<double> predict_many(const SeriesModel& m, std::span<const double> xs);

}  // namespace iterseries
