#include "iterseries/model.hpp"

#include <cmath>
#include <string>

namespace iterseries {

double BaseModel::operator()(double x) const noexcept {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::constant: return params[0];
    case Kind::linear: return params[0] + params[1] * x;
  }
  return 0.0;
}

const char* to_string(BaseModel::Kind kind) noexcept {
  switch (kind) {
    case BaseModel::Kind::zero: return "zero";
    case BaseModel::Kind::constant: return "constant";
    case BaseModel::Kind::linear: return "linear";
  }
  return "?";
}

BaseModel::Kind base_kind_from_string(std::string_view name) {
  if (name == "zero") return BaseModel::Kind::zero;
  if (name == "constant") return BaseModel::Kind::constant;
  if (name == "linear") return BaseModel::Kind::linear;
  throw Error(ErrorCode::InvalidArgument, "unknown base model '" + std::string(name) + "'");
}

double Term::operator()(double gx) const {
  const double arg = beta * gx;
  switch (kind) {
    case FamilyKind::sine: return alpha * std::sin(arg);
    case FamilyKind::cosine: return alpha * std::cos(arg);
    case FamilyKind::custom: return alpha * shape->value(beta, gx);
  }
  return 0.0;
}

double predict(const SeriesModel& m, double x) {
  const double gx = m.transform(x);
  double y = m.base(x);
  for (const auto& t : m.terms) y += t(gx);
  return y;
}

std::vector<double> predict_many(const SeriesModel& m, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = predict(m, xs[i]);
  return out;
}

}  // namespace iterseries
