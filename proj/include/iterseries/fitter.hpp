#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "iterseries/basis.hpp"
#include "iterseries/core.hpp"
#include "iterseries/kernels.hpp"
#include "iterseries/model.hpp"

namespace iterseries {

BaseModel make_base_model(const Dataset& d, BaseModel::Kind kind);

struct FitConfig {
  FrequencyBand band;
  std::size_t refine_steps = 60;
  std::size_t max_iterations = 100;
  double ss_target = 0.0;
  /// Stop once the best candidate removes less than this fraction of the current SS.
  double min_relative_decrease = 0.0;
  /// 0 disables the train/validation split.
  double validation_fraction = 0.0;
  std::size_t validation_patience = 3;
  std::uint64_t seed = 0;
  BasisFamily family;
  BaseModel::Kind base_kind = BaseModel::Kind::constant;
  /// Overrides the data-derived base when set.
  std::optional<BaseModel> base;
  kernels::Isa isa = kernels::best_available();

  void validate() const;
};

struct IterationRecord {
  std::size_t index = 0;
  double beta = 0.0;
  double alpha = 0.0;
  double train_ss = 0.0;
  std::optional<double> validation_ss;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

enum class StopReason { ss_target_reached, max_iterations, no_improving_candidate, validation_worsened };

const char* to_string(StopReason reason) noexcept;
StopReason stop_reason_from_string(std::string_view name);

struct FitReport {
  double initial_ss = 0.0;
  std::optional<double> initial_validation_ss;
  std::vector<IterationRecord> records;
  StopReason stop_reason = StopReason::max_iterations;
  /// Terms in the returned model; below records.size() after early stopping.
  std::size_t kept_terms = 0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;

  friend bool operator==(const FitReport&, const FitReport&) = default;
};

struct FitResult {
  SeriesModel model;
  FitReport report;
};

/// alpha = sum(w r f) / sum(w f^2). Throws DegenerateBasis when the energy is zero.
double optimal_coefficient(std::span<const double> r, std::span<const double> w,
                           std::span<const double> f);

struct BetaCandidate {
  double beta = 0.0;
  double alpha = 0.0;
  /// alpha^2 * energy, recomputed on the reference path for the returned beta.
  double ss_decrease = 0.0;
  /// Best decrease on the coarse grid, before refinement.
  double grid_decrease = 0.0;
};

/// Grid scan of the decrease alpha(beta)^2 * energy(beta) followed by a
/// golden-section refinement inside the two grid cells around the winner.
/// Throws NoViableCandidate when no grid beta gives a positive decrease.
BetaCandidate search_beta(const Dataset& d, std::span<const double> r, const BasisFamily& family,
                          const FrequencyBand& band, std::size_t refine_steps,
                          kernels::Isa isa = kernels::best_available());

FitResult fit(const Dataset& d, const FitConfig& cfg);

/// Seeded partition; train keeps round(n * (1 - fraction)) points. Both sides
/// keep input order.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double fraction, std::uint64_t seed);

struct EarlyStopDecision {
  bool stop = false;
  /// Term count with the lowest validation SS seen so far.
  std::size_t best_terms = 0;
  double best_validation_ss = 0.0;
};

/// STOP once the best validation SS has not improved for `patience`
/// consecutive records. The base-only validation SS, when given, is the
/// initial incumbent (0 terms).
EarlyStopDecision early_stopping_check(std::span<const IterationRecord> records, std::size_t patience,
                                       std::optional<double> baseline_validation_ss = std::nullopt);

}  // namespace iterseries
