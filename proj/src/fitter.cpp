#include "iterseries/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace iterseries {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Candidates whose energy falls below this fraction of the total weight vanish
// at every sample and are skipped.
constexpr double kDegenerateEnergy = 1e-12;
constexpr double kGoldenRatio = 0.61803398874989484820;

std::vector<double> base_predictions(const BaseModel& base, std::span<const double> xs) {
  std::vector<double> p(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) p[i] = base(xs[i]);
  return p;
}

}  // namespace

BaseModel make_base_model(const Dataset& d, BaseModel::Kind kind) {
  validate_dataset(d);
  const auto x = d.x();
  const auto y = d.y();
  const auto w = d.w();
  const double sw = d.total_weight();
  double swy = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) swy += w[i] * y[i];
  const double ybar = swy / sw;

  switch (kind) {
    case BaseModel::Kind::zero: return BaseModel::zero();
    case BaseModel::Kind::constant: return BaseModel::constant(ybar);
    case BaseModel::Kind::linear: {
      double swx = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) swx += w[i] * x[i];
      const double xbar = swx / sw;
      double sxx = 0.0;
      double sxy = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
      }
      // A single distinct x leaves the slope undetermined; fall back to flat.
      const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
      return BaseModel::linear(ybar - slope * xbar, slope);
    }
  }
  return BaseModel::zero();
}

void FitConfig::validate() const {
  band.validate();
  if (max_iterations == 0) throw Error(ErrorCode::InvalidArgument, "max_iterations must be positive");
  if (!(ss_target >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ss_target must be >= 0");
  if (!(min_relative_decrease >= 0.0)) throw Error(ErrorCode::InvalidArgument, "min_relative_decrease must be >= 0");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "validation_fraction must lie in [0, 1)");
  }
  if (validation_patience == 0) throw Error(ErrorCode::InvalidArgument, "validation_patience must be positive");
}

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::ss_target_reached: return "ss_target_reached";
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::no_improving_candidate: return "no_improving_candidate";
    case StopReason::validation_worsened: return "validation_worsened";
  }
  return "?";
}

StopReason stop_reason_from_string(std::string_view name) {
  for (auto r : {StopReason::ss_target_reached, StopReason::max_iterations, StopReason::no_improving_candidate,
                 StopReason::validation_worsened}) {
    if (name == to_string(r)) return r;
  }
  throw Error(ErrorCode::ParseError, "unknown stop reason '" + std::string(name) + "'");
}

double optimal_coefficient(std::span<const double> r, std::span<const double> w, std::span<const double> f) {
  if (r.size() != w.size() || r.size() != f.size()) {
    throw Error(ErrorCode::LengthMismatch, "residual, weight and basis vectors differ in length");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    num += w[i] * r[i] * f[i];
    den += w[i] * f[i] * f[i];
  }
  if (!(den > 0.0)) throw Error(ErrorCode::DegenerateBasis, "candidate vanishes at every sample point");
  return num / den;
}

BetaCandidate search_beta(const Dataset& d, std::span<const double> r, const BasisFamily& family,
                          const FrequencyBand& band, std::size_t refine_steps, kernels::Isa isa) {
  band.validate();
  if (r.size() != d.size()) throw Error(ErrorCode::LengthMismatch, "residual length differs from dataset size");

  const auto w = d.w();
  const std::vector<double> gx = apply_transform(family.transform(), d.x());
  std::vector<double> wr(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) wr[i] = w[i] * r[i];
  const kernels::Samples samples{gx, w, wr};
  const double energy_floor = kDegenerateEnergy * d.total_weight();

  const kernels::ProjectFn project = family.is_sinusoid() ? kernels::select(isa) : nullptr;
  auto project_all = [&](std::span<const double> betas, std::span<kernels::Projection> out) {
    if (project) {
      project(family.kind(), betas, samples, out);
      return;
    }
    for (std::size_t k = 0; k < betas.size(); ++k) {
      double dot = 0.0;
      double energy = 0.0;
      for (std::size_t i = 0; i < gx.size(); ++i) {
        const double f = family.at_transformed(betas[k], gx[i]);
        dot += wr[i] * f;
        energy += w[i] * f * f;
      }
      out[k] = {dot, energy};
    }
  };
  auto decrease = [&](const kernels::Projection& p) {
    return p.energy > energy_floor ? p.dot * p.dot / p.energy : 0.0;
  };
  auto decrease_at = [&](double beta) {
    kernels::Projection p;
    project_all(std::span(&beta, 1), std::span(&p, 1));
    return decrease(p);
  };

  const std::vector<double> grid = band.grid();
  std::vector<kernels::Projection> proj(grid.size());
  project_all(grid, proj);

  // Strict comparison in ascending beta: the smallest beta wins ties.
  std::size_t best_k = 0;
  double best = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = decrease(proj[k]);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  if (!(best > 0.0)) throw Error(ErrorCode::NoViableCandidate, "no grid frequency reduces the residual");

  const double grid_best = best;
  double best_beta = grid[best_k];
  auto consider = [&](double beta, double v) {
    if (v > best) {
      best = v;
      best_beta = beta;
    }
  };

  if (refine_steps > 0) {
    double a = grid[best_k == 0 ? 0 : best_k - 1];
    double b = grid[best_k + 1 == grid.size() ? best_k : best_k + 1];
    double c = b - kGoldenRatio * (b - a);
    double e = a + kGoldenRatio * (b - a);
    double fc = decrease_at(c);
    double fe = decrease_at(e);
    consider(c, fc);
    consider(e, fe);
    for (std::size_t step = 0; step < refine_steps; ++step) {
      if (fc >= fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - kGoldenRatio * (b - a);
        fc = decrease_at(c);
        consider(c, fc);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + kGoldenRatio * (b - a);
        fe = decrease_at(e);
        consider(e, fe);
      }
    }
    const double mid = 0.5 * (a + b);
    consider(mid, decrease_at(mid));
  }

  // The accepted term is always re-derived on the scalar reference path.
  const std::vector<double> f = evaluate_basis(family, best_beta, d.x());
  double alpha = 0.0;
  try {
    alpha = optimal_coefficient(r, w, f);
  } catch (const Error&) {
    throw Error(ErrorCode::NoViableCandidate, "refined frequency is degenerate");
  }
  double energy = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) energy += w[i] * f[i] * f[i];
  const double ss_decrease = alpha * alpha * energy;
  if (!(ss_decrease > 0.0)) throw Error(ErrorCode::NoViableCandidate, "best candidate gives no decrease");
  return {best_beta, alpha, ss_decrease, grid_best};
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "validation fraction must lie in (0, 1)");
  }
  const std::size_t n = d.size();
  const auto n_train = static_cast<std::size_t>(std::lround(double(n) * (1.0 - fraction)));
  if (n_train < 1 || n_train >= n) {
    throw Error(ErrorCode::TooFewPoints, "split of " + std::to_string(n) + " points leaves an empty side");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + std::ptrdiff_t(n_train));
  std::vector<std::size_t> val_idx(order.begin() + std::ptrdiff_t(n_train), order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());

  auto take = [&](const std::vector<std::size_t>& idx) {
    std::vector<Observation> obs;
    obs.reserve(idx.size());
    for (auto i : idx) obs.push_back(d[i]);
    return Dataset(obs);
  };
  return {take(train_idx), take(val_idx)};
}

EarlyStopDecision early_stopping_check(std::span<const IterationRecord> records, std::size_t patience,
                                       std::optional<double> baseline_validation_ss) {
  if (patience == 0) throw Error(ErrorCode::InvalidArgument, "patience must be positive");
  EarlyStopDecision out;
  bool have_best = false;
  if (baseline_validation_ss) {
    out.best_validation_ss = *baseline_validation_ss;
    out.best_terms = 0;
    have_best = true;
  }
  std::size_t since_best = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].validation_ss) {
      throw Error(ErrorCode::MissingValidationSS, "record " + std::to_string(records[i].index) + " lacks validation SS");
    }
    const double v = *records[i].validation_ss;
    if (!have_best || v < out.best_validation_ss) {
      out.best_validation_ss = v;
      out.best_terms = i + 1;
      have_best = true;
      since_best = 0;
    } else {
      ++since_best;
    }
  }
  out.stop = since_best >= patience;
  return out;
}

FitResult fit(const Dataset& d, const FitConfig& cfg) {
  validate_dataset(d);
  cfg.validate();

  Dataset train = d;
  std::optional<Dataset> validation;
  if (cfg.validation_fraction > 0.0) {
    if (d.size() < 4) throw Error(ErrorCode::TooFewPoints, "validation split needs at least 4 points");
    auto [t, v] = split_dataset(d, cfg.validation_fraction, cfg.seed);
    train = std::move(t);
    validation = std::move(v);
  }

  const BasisFamily& family = cfg.family;
  FitResult result;
  SeriesModel& model = result.model;
  FitReport& report = result.report;
  model.base = cfg.base ? *cfg.base : make_base_model(train, cfg.base_kind);
  model.transform = family.transform();
  report.train_size = train.size();
  report.validation_size = validation ? validation->size() : 0;

  ResidualVector r = residuals(train, base_predictions(model.base, train.x()));
  double ss = weighted_ss(r, train.w());
  report.initial_ss = ss;

  ResidualVector rv;
  if (validation) {
    rv = residuals(*validation, base_predictions(model.base, validation->x()));
    report.initial_validation_ss = weighted_ss(rv, validation->w());
  }

  const double n = double(train.size());
  auto finish = [&](StopReason why) { report.stop_reason = why; };

  if (ss <= cfg.ss_target) {
    finish(StopReason::ss_target_reached);
  } else {
    finish(StopReason::max_iterations);
    while (report.records.size() < cfg.max_iterations) {
      BetaCandidate cand;
      try {
        cand = search_beta(train, r, family, cfg.band, cfg.refine_steps, cfg.isa);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoViableCandidate) throw;
        finish(StopReason::no_improving_candidate);
        break;
      }
      // Decreases inside the rounding noise of the SS sum are not progress.
      if (cand.ss_decrease <= 4.0 * n * kEps * ss || cand.ss_decrease < cfg.min_relative_decrease * ss) {
        finish(StopReason::no_improving_candidate);
        break;
      }

      const std::vector<double> f = evaluate_basis(family, cand.beta, train.x());
      ResidualVector next = r;
      for (std::size_t i = 0; i < next.size(); ++i) next[i] -= cand.alpha * f[i];
      const double next_ss = weighted_ss(next, train.w());
      if (!(next_ss < ss)) {
        finish(StopReason::no_improving_candidate);
        break;
      }
      r = std::move(next);
      ss = next_ss;
      model.terms.push_back({family.kind(), cand.beta, cand.alpha, family.shape()});

      IterationRecord rec{report.records.size() + 1, cand.beta, cand.alpha, ss, std::nullopt};
      if (validation) {
        const std::vector<double> fv = evaluate_basis(family, cand.beta, validation->x());
        for (std::size_t i = 0; i < rv.size(); ++i) rv[i] -= cand.alpha * fv[i];
        rec.validation_ss = weighted_ss(rv, validation->w());
      }
      report.records.push_back(rec);

      if (ss <= cfg.ss_target) {
        finish(StopReason::ss_target_reached);
        break;
      }
      if (validation) {
        const auto decision = early_stopping_check(report.records, cfg.validation_patience, report.initial_validation_ss);
        if (decision.stop) {
          model.terms.resize(decision.best_terms);
          finish(StopReason::validation_worsened);
          break;
        }
      }
    }
  }

  report.kept_terms = model.terms.size();
  model.metadata.iterations = model.terms.size();
  model.metadata.final_ss = model.terms.empty() ? report.initial_ss : report.records[model.terms.size() - 1].train_ss;
  return result;
}

}  // namespace iterseries
