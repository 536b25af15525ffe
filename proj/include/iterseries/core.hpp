#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iterseries/error.hpp"

namespace iterseries {

struct Observation {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Ordered set of weighted observations. Input order is preserved; nothing
/// here sorts by x. Columns are kept separately so kernels can stream them.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::span<const Observation> observations);
  Dataset(std::vector<double> x, std::vector<double> y, std::vector<double> w = {});

  std::size_t size() const noexcept { return x_.size(); }
  bool empty() const noexcept { return x_.empty(); }

  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }
  std::span<const double> w() const noexcept { return w_; }

  Observation operator[](std::size_t i) const { return {x_[i], y_[i], w_[i]}; }
  std::vector<Observation> observations() const;

  double total_weight() const noexcept;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> w_;
};

using ResidualVector = std::vector<double>;

/// Throws EmptyDataset, NonFiniteValue or NonPositiveWeight.
const Dataset& validate_dataset(const Dataset& d);

/// Sum_i w_i (y_i - pred_i)^2.
double weighted_ss(const Dataset& d, std::span<const double> predictions);

/// Sum_i w_i r_i^2 for an already-formed residual vector.
double weighted_ss(std::span<const double> residuals, std::span<const double> weights);

ResidualVector residuals(const Dataset& d, std::span<const double> predictions);

/// Replaces every group of observations sharing an x (|x_a - x_b| <= tolerance,
/// grouped against the first occurrence) with one observation carrying the
/// weighted mean y and the summed weight. First-occurrence order is kept.
Dataset collapse_duplicates(const Dataset& d, double tolerance = 0.0);

}  // namespace iterseries
