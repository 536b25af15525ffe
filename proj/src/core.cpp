#include "iterseries/core.hpp"

#include <cmath>
#include <string>

namespace iterseries {

Dataset::Dataset(std::span<const Observation> observations) {
  x_.reserve(observations.size());
  y_.reserve(observations.size());
  w_.reserve(observations.size());
  for (const auto& o : observations) {
    x_.push_back(o.x);
    y_.push_back(o.y);
    w_.push_back(o.w);
  }
}

Dataset::Dataset(std::vector<double> x, std::vector<double> y, std::vector<double> w)
    : x_(std::move(x)), y_(std::move(y)), w_(std::move(w)) {
  if (w_.empty()) w_.assign(x_.size(), 1.0);
  if (x_.size() != y_.size() || x_.size() != w_.size()) {
    throw Error(ErrorCode::LengthMismatch, "x, y and w columns differ in length");
  }
}

std::vector<Observation> Dataset::observations() const {
  std::vector<Observation> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i]);
  return out;
}

double Dataset::total_weight() const noexcept {
  double s = 0.0;
  for (double w : w_) s += w;
  return s;
}

const Dataset& validate_dataset(const Dataset& d) {
  if (d.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no observations");
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto o = d[i];
    if (!std::isfinite(o.x) || !std::isfinite(o.y) || !std::isfinite(o.w)) {
      throw Error(ErrorCode::NonFiniteValue, "observation " + std::to_string(i) + " is not finite");
    }
    if (!(o.w > 0.0)) {
      throw Error(ErrorCode::NonPositiveWeight, "observation " + std::to_string(i) + " has weight <= 0");
    }
  }
  return d;
}

namespace {

void check_length(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw Error(ErrorCode::LengthMismatch,
                "expected " + std::to_string(expected) + " values, got " + std::to_string(got));
  }
}

}  // namespace

double weighted_ss(const Dataset& d, std::span<const double> predictions) {
  check_length(d.size(), predictions.size());
  const auto y = d.y();
  const auto w = d.w();
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - predictions[i];
    ss += w[i] * r * r;
  }
  return ss;
}

double weighted_ss(std::span<const double> residuals, std::span<const double> weights) {
  check_length(weights.size(), residuals.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i) ss += weights[i] * residuals[i] * residuals[i];
  return ss;
}

ResidualVector residuals(const Dataset& d, std::span<const double> predictions) {
  check_length(d.size(), predictions.size());
  ResidualVector r(d.size());
  const auto y = d.y();
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - predictions[i];
  return r;
}

Dataset collapse_duplicates(const Dataset& d, double tolerance) {
  validate_dataset(d);
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");

  struct Group {
    double x;
    double y;  // first member's y, returned untouched for singletons
    double wy;
    double w;
    std::size_t members;
  };
  std::vector<Group> groups;
  // Quadratic in the number of distinct x; datasets here are small.
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto o = d[i];
    Group* hit = nullptr;
    for (auto& g : groups) {
      if (std::abs(g.x - o.x) <= tolerance) {
        hit = &g;
        break;
      }
    }
    if (hit) {
      hit->wy += o.w * o.y;
      hit->w += o.w;
      ++hit->members;
    } else {
      groups.push_back({o.x, o.y, o.w * o.y, o.w, 1});
    }
  }

  std::vector<double> x, y, w;
  x.reserve(groups.size());
  y.reserve(groups.size());
  w.reserve(groups.size());
  for (const auto& g : groups) {
    x.push_back(g.x);
    y.push_back(g.members == 1 ? g.y : g.wy / g.w);
    w.push_back(g.w);
  }
  return Dataset(std::move(x), std::move(y), std::move(w));
}

}  // namespace iterseries
