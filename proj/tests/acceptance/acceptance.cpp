// One PASS/FAIL line per acceptance criterion; exit status is the failure count.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "iterseries/cli.hpp"
#include "iterseries/csv.hpp"
#include "iterseries/eclipse.hpp"
#include "iterseries/fitter.hpp"
#include "iterseries/model_io.hpp"

using namespace iterseries;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %s %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void info(const char* id, const std::string& detail) {
  std::printf("[INFO] %s %s\n", id, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

fs::path scratch_dir(const std::string& tag) {
  const auto p = fs::temp_directory_path() / ("iterseries_acc_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int status = cli::run(args, o, e);
  if (out) *out = o.str();
  if (status != 0) std::fprintf(stderr, "%s", e.str().c_str());
  return status;
}

// 1. Closed-form coefficient against a brute-force scan of
//    E(t) = sum w (r - t f)^2 - sum w r^2 on 10^6 points.
void coefficient_oracle() {
  Timer timer;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  std::uniform_real_distribution<double> wt(0.0, 5.0);
  constexpr int kInstances = 500;
  constexpr long kGrid = 1'000'000;
  int argmin_ok = 0, decrease_ok = 0;
  double worst_steps = 0, worst_rel = 0;

  for (int inst = 0; inst < kInstances; ++inst) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<double> r(n), w(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = val(rng);
      f[i] = val(rng);
      do w[i] = 5.0 - wt(rng); while (w[i] <= 0.0);  // (0, 5]
    }
    const double alpha = optimal_coefficient(r, w, f);

    // Search interval from Cauchy-Schwarz: |t*| <= sqrt(sum w r^2 / sum w f^2).
    double srr = 0, sff = 0;
    for (std::size_t i = 0; i < n; ++i) srr += w[i] * r[i] * r[i], sff += w[i] * f[i] * f[i];
    const double bound = 1.01 * std::sqrt(srr / sff);
    const double h = 2.0 * bound / double(kGrid - 1);
    double best_t = 0, best = INFINITY;
    for (long k = 0; k < kGrid; ++k) {
      const double t = -bound + double(k) * h;
      double e = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = r[i] - t * f[i];
        e += w[i] * d * d;
      }
      if (e < best) best = e, best_t = t;
    }
    const double steps = std::abs(best_t - alpha) / h;
    worst_steps = std::max(worst_steps, steps);
    if (steps <= 1.0) ++argmin_ok;

    double after = 0;
    for (std::size_t i = 0; i < n; ++i) after += w[i] * (r[i] - alpha * f[i]) * (r[i] - alpha * f[i]);
    const double expected = alpha * alpha * sff;
    const double rel = expected == 0 ? std::abs(srr - after) : std::abs((srr - after) - expected) / expected;
    worst_rel = std::max(worst_rel, rel);
    if (rel <= 1e-9) ++decrease_ok;
  }
  report("1", "coefficient oracle", argmin_ok == kInstances && decrease_ok == kInstances,
         fmt("argmin within one grid step %d/%d (worst %.3f steps), decrease identity %d/%d (worst rel %.2e), %.1fs",
             argmin_ok, kInstances, worst_steps, decrease_ok, kInstances, worst_rel, timer.seconds()));
}

// 2. Training SS never increases and drops whenever a term is accepted.
void monotone_ss() {
  Timer timer;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int ok = 0, terms = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng() % 60;
    const double span = 1.0 + 20.0 * u(rng);
    std::vector<double> x(n), y(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = span * (u(rng) - 0.3);
      y[i] = 10.0 * (u(rng) - 0.5);
      w[i] = 0.1 + 3.0 * u(rng);
    }
    FitConfig cfg;
    const double lo = 0.01 + 2.0 * u(rng);
    cfg.band = {lo, lo + 0.5 + 10.0 * u(rng), 64 + rng() % 1024};
    cfg.refine_steps = rng() % 50;
    cfg.max_iterations = 1 + rng() % 40;
    cfg.family = rng() % 3 == 0 ? BasisFamily::cosine() : BasisFamily::sine();
    cfg.base_kind = static_cast<BaseModel::Kind>(rng() % 3);
    const auto res = fit(Dataset(x, y, w), cfg);

    bool good = true;
    double prev = res.report.initial_ss;
    for (const auto& rec : res.report.records) {
      const double decrease = prev - rec.train_ss;
      const double predicted = rec.alpha * rec.alpha * basis_energy(cfg.family, rec.beta, Dataset(x, y, w));
      if (rec.train_ss > prev) good = false;
      if (predicted > 0 && !(rec.train_ss < prev)) good = false;
      if (std::abs(decrease - predicted) > 1e-9 * std::max(predicted, 1e-300) + 1e-12 * res.report.initial_ss) good = false;
      prev = rec.train_ss;
      ++terms;
    }
    if (good) ++ok;
  }
  report("2", "monotone SS", ok == 100, fmt("%d/100 fits monotone with strict decrease, %d terms checked, %.1fs", ok,
                                             terms, timer.seconds()));
}

// 3. A single sinusoid is recovered in one step.
void exact_recovery() {
  Timer timer;
  std::vector<double> x(40), y(40);
  for (int i = 0; i < 40; ++i) {
    x[i] = 10.0 * i / 39.0;
    y[i] = 0.7 * std::sin(1.3 * x[i]);
  }
  FitConfig cfg;
  cfg.band = {0.1, 3.0, 512};
  cfg.refine_steps = 40;
  cfg.max_iterations = 1;
  cfg.base_kind = BaseModel::Kind::zero;
  const auto res = fit(Dataset(x, y), cfg);
  const auto& rec = res.report.records.at(0);
  const double ratio = rec.train_ss / res.report.initial_ss;
  const bool ok = std::abs(rec.beta - 1.3) <= 1e-3 && std::abs(rec.alpha - 0.7) <= 1e-3 && ratio < 1e-4;
  report("3", "exact recovery", ok,
         fmt("beta %.9f alpha %.9f SS/initial %.3e, %.2fs", rec.beta, rec.alpha, ratio, timer.seconds()));
}

// 4. Eclipse demo with a mean base over centuries -19..20 and six terms.
void eclipse_reproduction() {
  Timer timer;
  const auto dir = scratch_dir("eclipse");
  const auto data = (fs::path(ITERSERIES_TEST_DATA_DIR) / "eclipse_centuries.csv").string();
  const int status = run_cli({"demo-eclipse", "--data", data, "--out-dir", dir.string()});
  if (status != 0) {
    report("4", "eclipse reproduction", false, fmt("demo-eclipse exited %d", status));
    return;
  }
  const auto rep = deserialize_report(read_text_file(dir / "eclipse_report.json"));
  const auto model = deserialize(read_text_file(dir / "eclipse_model.json"));
  const double seconds = timer.seconds();
  const double initial = rep.initial_ss, final_ss = model.metadata.final_ss;

  report("4a", "eclipse initial SS about the mean", std::abs(initial - 4840.44) <= 0.5,
         fmt("initial SS %.2f, expected 4840.44 +/- 0.5", initial));
  report("4b", "eclipse final SS after six terms", model.terms.size() == 6 && final_ss <= 350.0,
         fmt("final SS %.2f with %zu terms, bound 350, %.1fs", final_ss, model.terms.size(), seconds));
  report("4c", "eclipse final SS within 20% of 301.62", std::abs(final_ss - 301.62) <= 0.2 * 301.62,
         fmt("final SS %.2f, relative gap %.1f%%", final_ss, 100.0 * (final_ss - 301.62) / 301.62));

  // The same training data about the constant 237.23 instead of its mean.
  const auto table = eclipse::load_table(data);
  const Dataset d = eclipse::to_dataset(table, eclipse::kTrainFirst, eclipse::kTrainLast);
  double about_mean = 0, about_e0 = 0, mean = 0;
  for (double y : d.y()) mean += y;
  mean /= double(d.size());
  for (double y : d.y()) about_mean += (y - mean) * (y - mean), about_e0 += (y - 237.23) * (y - 237.23);
  info("4", fmt("bundled counts: mean %.3f, SS about mean %.2f, SS about 237.23 %.2f", mean, about_mean, about_e0));
  fs::remove_all(dir);
}

// 5. Quoted six-century groups in the bundled table.
void six_century_pattern() {
  const auto table = eclipse::load_table(fs::path(ITERSERIES_TEST_DATA_DIR) / "eclipse_centuries.csv");
  eclipse::validate_table(table);
  const std::vector<int> want_a{253, 250, 253, 251, 251, 250, 251};
  const std::vector<int> want_b{225, 226, 225, 227, 222, 222, 224};
  const auto a = eclipse::group_counts(table, eclipse::kGroupAStart);
  const auto b = eclipse::group_counts(table, eclipse::kGroupBStart);
  auto join = [](const std::vector<int>& v) {
    std::string s;
    for (int c : v) s += (s.empty() ? "" : " ") + std::to_string(c);
    return s;
  };
  const bool ok = a == want_a && b == want_b && eclipse::range_of(a) == 3 && eclipse::range_of(b) == 5;
  report("5", "six-century data pattern", ok,
         fmt("group A %s (range %d), group B %s (range %d)", join(a).c_str(), eclipse::range_of(a), join(b).c_str(),
             eclipse::range_of(b)));
}

// 6. Repeated abscissa: SS cannot fall below (a - b)^2 / 2 = 8.
void duplicate_limit() {
  Timer timer;
  const std::vector<double> x{0.4, 1.1, 1.9, 2.6, 2.6, 3.3, 4.2, 5.0, 5.7};
  const std::vector<double> y{0.3, -0.8, 0.5, 1.0, 5.0, -0.2, 0.9, -0.6, 0.1};
  FitConfig cfg;
  cfg.band = {0.05, 50.0, 2048};
  cfg.refine_steps = 50;
  cfg.max_iterations = 300;
  cfg.base_kind = BaseModel::Kind::zero;
  const auto res = fit(Dataset(x, y), cfg);
  double lowest = res.report.initial_ss;
  for (const auto& r : res.report.records) lowest = std::min(lowest, r.train_ss);
  const double final_ss = res.model.metadata.final_ss;
  const bool ok = std::abs(final_ss - 8.0) <= 0.05 * 8.0 && lowest >= 8.0 - 1e-6;
  report("6", "duplicate limit", ok,
         fmt("final SS %.6f after %zu terms (%s), lowest %.9f, %.1fs", final_ss, res.model.terms.size(),
             to_string(res.report.stop_reason), lowest, timer.seconds()));
}

// 7. Unique abscissae: SS goes to zero.
void convergence() {
  Timer timer;
  int converged = 0;
  std::string misses;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, 2.0 * std::acos(-1.0)), uy(-1.0, 1.0);
    std::vector<double> x(8), y(8);
    for (int i = 0; i < 8; ++i) x[i] = ux(rng), y[i] = uy(rng);
    FitConfig cfg;
    cfg.band = {0.05, 50.0, 2048};
    cfg.refine_steps = 50;
    cfg.max_iterations = 300;
    cfg.ss_target = 0.0;
    const auto res = fit(Dataset(x, y), cfg);
    double first_hit = -1;
    for (const auto& r : res.report.records) {
      if (r.train_ss < 1e-3 * res.report.initial_ss) {
        first_hit = double(r.index);
        break;
      }
    }
    const double ratio = res.model.metadata.final_ss / res.report.initial_ss;
    worst = std::max(worst, ratio);
    if (first_hit > 0) {
      ++converged;
    } else {
      auto sorted = x;
      std::sort(sorted.begin(), sorted.end());
      double gap = INFINITY;
      for (int i = 1; i < 8; ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
      misses += " " + std::to_string(seed) + fmt("(ratio %.2e, closest x pair %.4f apart)", ratio, gap);
    }
  }
  report("7", "convergence on unique abscissae", converged >= 19,
         fmt("%d/20 seeds below 1e-3 of initial within 300 terms, worst final ratio %.2e%s, %.1fs", converged, worst,
             misses.empty() ? "" : (", misses:" + misses).c_str(), timer.seconds()));
}

// 8. Early stopping keeps a model no worse on validation than 50 plain terms.
void early_stopping() {
  Timer timer;
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> ux(0.0, 10.0);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<double> x(100), y(100);
  for (int i = 0; i < 100; ++i) {
    x[i] = ux(rng);
    y[i] = std::sin(x[i]) + noise(rng);
  }
  const Dataset d(x, y);
  FitConfig cfg;
  cfg.max_iterations = 50;
  cfg.validation_fraction = 0.2;
  cfg.validation_patience = 3;
  cfg.seed = 11;
  const auto stopped = fit(d, cfg);

  // Same split, patience large enough that 50 terms are always kept.
  FitConfig full_cfg = cfg;
  full_cfg.validation_patience = 1000;
  const auto full = fit(d, full_cfg);

  const auto [train, validation] = split_dataset(d, cfg.validation_fraction, cfg.seed);
  const double val_stopped = weighted_ss(validation, predict_many(stopped.model, validation.x()));
  const double val_full = weighted_ss(validation, predict_many(full.model, validation.x()));
  const bool ok = stopped.report.stop_reason == StopReason::validation_worsened && val_stopped <= val_full &&
                  full.model.terms.size() == 50;
  report("8", "early stopping", ok,
         fmt("stop_reason %s, kept %zu terms, validation SS %.4f vs %.4f for %zu terms, %.1fs",
             to_string(stopped.report.stop_reason), stopped.model.terms.size(), val_stopped, val_full,
             full.model.terms.size(), timer.seconds()));
}

// 9. Serialisation identity and byte-identical repeated fits.
void round_trip_and_determinism() {
  Timer timer;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  int identical = 0;
  for (int i = 0; i < 100; ++i) {
    SeriesModel m;
    switch (i % 3) {
      case 0: m.base = BaseModel::zero(); break;
      case 1: m.base = BaseModel::constant(u(rng)); break;
      default: m.base = BaseModel::linear(u(rng), u(rng) * 1e-9); break;
    }
    if (rng() % 2) m.transform = InputTransform::affine(u(rng) / 3.0, u(rng) / 7.0);
    const std::size_t n = rng() % 20;
    for (std::size_t k = 0; k < n; ++k) {
      m.terms.push_back({rng() % 2 ? FamilyKind::sine : FamilyKind::cosine, u(rng) / 1e3, u(rng), nullptr});
    }
    m.metadata = {n, std::abs(u(rng))};
    const std::string text = serialize(m);
    const auto back = deserialize(text);
    if (back == m && serialize(back) == text) ++identical;
  }

  const auto dir = scratch_dir("determinism");
  std::string csv = "x,y,w\n";
  std::uniform_real_distribution<double> ux(-3.0, 9.0), uw(0.5, 2.0);
  for (int i = 0; i < 80; ++i) {
    const double xv = ux(rng);
    csv += format_double(xv) + "," + format_double(std::cos(0.7 * xv) + 0.2 * ux(rng)) + "," + format_double(uw(rng)) + "\n";
  }
  write_text_file(dir / "data.csv", csv);
  std::vector<std::string> stdout_text(2);
  int status = 0;
  for (int k = 0; k < 2; ++k) {
    const std::string tag = std::to_string(k);
    status |= run_cli({"fit", "--input", (dir / "data.csv").string(), "--header", "--max-iters", "25", "--validation",
                       "0.25", "--patience", "4", "--seed", "99", "--out", (dir / ("model" + tag + ".json")).string(),
                       "--report", (dir / ("report" + tag + ".json")).string()},
                      &stdout_text[k]);
  }
  const bool same_model = read_text_file(dir / "model0.json") == read_text_file(dir / "model1.json");
  const bool same_report = read_text_file(dir / "report0.json") == read_text_file(dir / "report1.json");
  fs::remove_all(dir);
  const bool ok = identical == 100 && status == 0 && same_model && same_report && stdout_text[0] == stdout_text[1];
  report("9", "round trip and determinism", ok,
         fmt("%d/100 models round-trip exactly; repeated fit: model %s, report %s, stdout %s, %.1fs", identical,
             same_model ? "identical" : "differs", same_report ? "identical" : "differs",
             stdout_text[0] == stdout_text[1] ? "identical" : "differs", timer.seconds()));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{coefficient_oracle, monotone_ss,     exact_recovery,
                                                     eclipse_reproduction, six_century_pattern, duplicate_limit,
                                                     convergence,        early_stopping,  round_trip_and_determinism};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      report("?", "criterion threw", false, e.what());
    }
  }
  std::printf("%d failing check(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
