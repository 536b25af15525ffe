#include "iterseries/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "iterseries/csv.hpp"
#include "iterseries/eclipse.hpp"
#include "iterseries/fitter.hpp"
#include "iterseries/model_io.hpp"

namespace iterseries::cli {

namespace {

struct SearchOptions {
  double beta_min = 0.05;
  double beta_max = 3.2;
  std::size_t beta_grid = 4096;
  std::size_t refine = 60;
  std::string isa = "auto";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--beta-min", beta_min, "Lower end of the frequency band")->capture_default_str();
    cmd->add_option("--beta-max", beta_max, "Upper end of the frequency band")->capture_default_str();
    cmd->add_option("--beta-grid", beta_grid, "Grid points across the band")->capture_default_str();
    cmd->add_option("--refine", refine, "Golden-section steps around the best grid point")->capture_default_str();
    cmd->add_option("--isa", isa, "Scan kernel: auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
        ->capture_default_str();
  }

  void apply(FitConfig& cfg) const {
    cfg.band = {beta_min, beta_max, beta_grid};
    cfg.refine_steps = refine;
    cfg.isa = kernels::isa_from_string(isa);
  }
};

struct FitOptions {
  std::string input;
  std::string out;
  std::string report;
  std::string base = "constant";
  std::optional<double> base_value;
  std::string family = "sine";
  std::string transform = "identity";
  double scale = 1.0;
  double offset = 0.0;
  SearchOptions search;
  std::size_t max_iters = 100;
  double ss_target = 0.0;
  double min_decrease = 0.0;
  double validation = 0.0;
  std::size_t patience = 3;
  std::uint64_t seed = 0;
  bool collapse = false;
  double dup_tolerance = 0.0;
  bool header = false;
};

struct PredictOptions {
  std::string model;
  std::string input;
  std::vector<double> xs;
  std::string out;
  bool header = false;
  bool round = false;
};

struct PlotOptions {
  std::string model;
  std::string input;
  std::string out;
  bool header = false;
};

struct DemoOptions {
  std::string data;
  std::string out_dir = ".";
  SearchOptions search;
  std::size_t max_iters = 6;
  double offset = eclipse::kDemoOffset;
  std::optional<double> base_value;
  bool holdout = false;
};

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

void print_trajectory(std::ostream& out, const FitReport& report) {
  const bool val = report.initial_validation_ss.has_value();
  out << "iter\tbeta\talpha\ttrain_ss" << (val ? "\tvalidation_ss" : "") << '\n';
  out << "0\t-\t-\t" << format_double(report.initial_ss);
  if (val) out << '\t' << format_double(*report.initial_validation_ss);
  out << '\n';
  for (const auto& r : report.records) {
    out << r.index << '\t' << format_double(r.beta) << '\t' << format_double(r.alpha) << '\t'
        << format_double(r.train_ss);
    if (r.validation_ss) out << '\t' << format_double(*r.validation_ss);
    out << '\n';
  }
  out << "stop_reason\t" << to_string(report.stop_reason) << '\n';
  out << "kept_terms\t" << report.kept_terms << '\n';
}

/// Two-decimal rendering for display only; stored models keep full precision.
std::string describe_rounded(const SeriesModel& m) {
  std::ostringstream s;
  s << "y = ";
  switch (m.base.kind) {
    case BaseModel::Kind::zero: s << "0"; break;
    case BaseModel::Kind::constant: s << fmt2(m.base.params[0]); break;
    case BaseModel::Kind::linear: s << fmt2(m.base.params[0]) << " + " << fmt2(m.base.params[1]) << " x"; break;
  }
  std::string arg = "x";
  if (m.transform.kind == InputTransform::Kind::affine) {
    arg = m.transform.scale == 1.0 ? "x" : fmt2(m.transform.scale) + " x";
    if (m.transform.offset != 0.0) {
      arg = "(" + arg + (m.transform.offset < 0 ? " - " : " + ") + fmt2(std::abs(m.transform.offset)) + ")";
    }
  }
  for (const auto& t : m.terms) {
    s << (t.alpha < 0 ? " - " : " + ") << fmt2(std::abs(t.alpha)) << ' '
      << (t.kind == FamilyKind::cosine ? "cos" : "sin") << '(' << fmt2(t.beta) << ' ' << arg << ')';
  }
  return s.str();
}

FitConfig make_config(const FitOptions& o, const Dataset& d) {
  FitConfig cfg;
  o.search.apply(cfg);
  cfg.max_iterations = o.max_iters;
  cfg.ss_target = o.ss_target;
  cfg.min_relative_decrease = o.min_decrease;
  cfg.validation_fraction = o.validation;
  cfg.validation_patience = o.patience;
  cfg.seed = o.seed;
  cfg.base_kind = base_kind_from_string(o.base);
  if (o.base_value) {
    if (cfg.base_kind != BaseModel::Kind::constant) {
      throw Error(ErrorCode::InvalidArgument, "--base-value needs --base constant");
    }
    cfg.base = BaseModel::constant(*o.base_value);
  }
  InputTransform g;
  if (o.transform == "span2pi") {
    g = InputTransform::span_two_pi(d.x());
  } else if (o.transform == "affine") {
    g = InputTransform::affine(o.scale, o.offset);
  }
  cfg.family = BasisFamily(family_kind_from_string(o.family), g);
  cfg.validate();
  return cfg;
}

bool stalled(const FitReport& report, double ss_target) {
  const double final_ss = report.kept_terms == 0 ? report.initial_ss : report.records[report.kept_terms - 1].train_ss;
  return report.stop_reason == StopReason::no_improving_candidate && final_ss > ss_target;
}

int cmd_fit(const FitOptions& o, std::ostream& out) {
  Dataset d = parse_dataset_csv(read_text_file(o.input), o.header);
  if (o.collapse) d = collapse_duplicates(d, o.dup_tolerance);
  validate_dataset(d);
  const FitConfig cfg = make_config(o, d);
  const FitResult res = fit(d, cfg);
  print_trajectory(out, res.report);
  if (!o.out.empty()) write_text_file(o.out, serialize(res.model));
  if (!o.report.empty()) write_text_file(o.report, serialize_report(res.report));
  return stalled(res.report, cfg.ss_target) ? kExitStalled : kExitOk;
}

int cmd_predict(const PredictOptions& o, std::ostream& out) {
  const SeriesModel model = deserialize(read_text_file(o.model));
  std::vector<double> xs = o.xs;
  if (!o.input.empty()) {
    const auto more = parse_x_column(read_text_file(o.input), o.header);
    xs.insert(xs.end(), more.begin(), more.end());
  }
  std::string text;
  const auto ys = predict_many(model, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    text += format_double(xs[i]);
    text += ',';
    text += o.round ? std::to_string(static_cast<long long>(std::trunc(ys[i]))) : format_double(ys[i]);
    text += '\n';
  }
  emit(o.out, text, out);
  return kExitOk;
}

int cmd_plotdata(const PlotOptions& o, std::ostream& out) {
  const SeriesModel model = deserialize(read_text_file(o.model));
  const Dataset d = validate_dataset(parse_dataset_csv(read_text_file(o.input), o.header));
  std::string text = "x,actual,fitted,residual\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double fitted = predict(model, d.x()[i]);
    text += format_double(d.x()[i]) + ',' + format_double(d.y()[i]) + ',' + format_double(fitted) + ',' +
            format_double(d.y()[i] - fitted) + '\n';
  }
  emit(o.out, text, out);
  return kExitOk;
}

void print_group(std::ostream& out, const char* label, const std::vector<eclipse::Century>& table, int start) {
  const auto counts = eclipse::group_counts(table, start);
  out << label << " (every " << eclipse::kGroupStride << "th century from " << start << "):";
  for (int c : counts) out << ' ' << c;
  out << "  range " << eclipse::range_of(counts) << '\n';
}

int cmd_demo_eclipse(const DemoOptions& o, std::ostream& out) {
  const auto path = o.data.empty() ? eclipse::default_table_path() : std::filesystem::path(o.data);
  const auto table = eclipse::load_table(path);
  eclipse::validate_table(table);
  const Dataset d = eclipse::to_dataset(table, eclipse::kTrainFirst, eclipse::kTrainLast);

  FitConfig cfg;
  o.search.apply(cfg);
  cfg.max_iterations = o.max_iters;
  cfg.base_kind = BaseModel::Kind::constant;
  if (o.base_value) cfg.base = BaseModel::constant(*o.base_value);
  cfg.family = BasisFamily::sine(InputTransform::affine(1.0, o.offset));
  const FitResult res = fit(d, cfg);

  out << "centuries " << eclipse::kTrainFirst << ".." << eclipse::kTrainLast << " (" << d.size() << " points)\n";
  print_trajectory(out, res.report);
  out << "SS " << fmt2(res.report.initial_ss) << " -> " << fmt2(res.model.metadata.final_ss) << " in "
      << res.model.terms.size() << " iterations\n";
  out << describe_rounded(res.model) << '\n';
  print_group(out, "group A", table, eclipse::kGroupAStart);
  print_group(out, "group B", table, eclipse::kGroupBStart);

  if (o.holdout) {
    const Dataset h = eclipse::to_dataset(table, eclipse::kTrainLast + 1, eclipse::kLastCentury);
    out << "holdout SS (centuries " << eclipse::kTrainLast + 1 << ".." << eclipse::kLastCentury
        << "): " << fmt2(weighted_ss(h, predict_many(res.model, h.x()))) << '\n';
  }

  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  write_text_file(dir / "eclipse_model.json", serialize(res.model));
  write_text_file(dir / "eclipse_report.json", serialize_report(res.report));
  std::string plot = "n,actual,fitted\n";
  for (const auto& c : table) plot += std::to_string(c.index) + ',' + std::to_string(c.count) + ',' +
                                      format_double(predict(res.model, c.index)) + '\n';
  write_text_file(dir / "eclipse_plot.csv", plot);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted least-squares regression by greedily grown sinusoidal series"};
  app.name("iterseries");
  app.require_subcommand(1);

  FitOptions fo;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a series model to x,y[,w] data");
  fit_cmd->add_option("--input", fo.input, "CSV with x,y[,w] rows")->required();
  fit_cmd->add_option("--out", fo.out, "Model file to write");
  fit_cmd->add_option("--report", fo.report, "Fit report file to write");
  fit_cmd->add_option("--base", fo.base, "Base model")
      ->check(CLI::IsMember({"zero", "constant", "linear"}))
      ->capture_default_str();
  fit_cmd->add_option("--base-value", fo.base_value, "Use this constant instead of the weighted mean");
  fit_cmd->add_option("--family", fo.family, "Basis family")->check(CLI::IsMember({"sine", "cosine"}))->capture_default_str();
  fit_cmd->add_option("--transform", fo.transform, "Input transform g")
      ->check(CLI::IsMember({"identity", "span2pi", "affine"}))
      ->capture_default_str();
  fit_cmd->add_option("--scale", fo.scale, "Affine transform scale")->capture_default_str();
  fit_cmd->add_option("--offset", fo.offset, "Affine transform offset")->capture_default_str();
  fo.search.add_to(fit_cmd);
  fit_cmd->add_option("--max-iters", fo.max_iters, "Maximum number of terms")->capture_default_str();
  fit_cmd->add_option("--ss-target", fo.ss_target, "Stop once SS is at or below this")->capture_default_str();
  fit_cmd->add_option("--min-decrease", fo.min_decrease, "Stop when a term removes less than this fraction of SS")
      ->capture_default_str();
  fit_cmd->add_option("--validation", fo.validation, "Fraction held out for early stopping")->capture_default_str();
  fit_cmd->add_option("--patience", fo.patience, "Non-improving validation steps before stopping")->capture_default_str();
  fit_cmd->add_option("--seed", fo.seed, "Seed for the validation split")->capture_default_str();
  fit_cmd->add_flag("--collapse-duplicates", fo.collapse, "Merge repeated x into their weighted mean");
  fit_cmd->add_option("--dup-tolerance", fo.dup_tolerance, "x distance treated as a repeat")->capture_default_str();
  fit_cmd->add_flag("--header", fo.header, "Skip the first CSV row");

  PredictOptions po;
  auto* predict_cmd = app.add_subcommand("predict", "Evaluate a model at x values");
  predict_cmd->add_option("--model", po.model, "Model file")->required();
  predict_cmd->add_option("--input", po.input, "CSV whose first column holds x");
  predict_cmd->add_option("--x", po.xs, "Inline x values");
  predict_cmd->add_option("--out", po.out, "Output file (default stdout)");
  predict_cmd->add_flag("--header", po.header, "Skip the first CSV row");
  predict_cmd->add_flag("--round", po.round, "Print the integer part of each prediction");

  PlotOptions pl;
  auto* plot_cmd = app.add_subcommand("plotdata", "Write x, actual, fitted and residual columns");
  plot_cmd->add_option("--model", pl.model, "Model file")->required();
  plot_cmd->add_option("--input", pl.input, "CSV with x,y[,w] rows")->required();
  plot_cmd->add_option("--out", pl.out, "Output file (default stdout)");
  plot_cmd->add_flag("--header", pl.header, "Skip the first CSV row");

  DemoOptions dm;
  auto* demo_cmd = app.add_subcommand("demo-eclipse", "Fit the bundled solar-eclipse century counts");
  demo_cmd->add_option("--data", dm.data, "Eclipse table (default: bundled copy)");
  demo_cmd->add_option("--out-dir", dm.out_dir, "Directory for model, report and plot files")->capture_default_str();
  dm.search.add_to(demo_cmd);
  demo_cmd->add_option("--max-iters", dm.max_iters, "Number of terms")->capture_default_str();
  demo_cmd->add_option("--offset", dm.offset, "Shift applied to the century index inside the sinusoids")
      ->capture_default_str();
  demo_cmd->add_option("--base-value", dm.base_value, "Constant base instead of the mean");
  demo_cmd->add_flag("--holdout", dm.holdout, "Report SS on the centuries after the fitting window");

  std::vector<const char*> argv{"iterseries"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fo, out);
    if (*predict_cmd) return cmd_predict(po, out);
    if (*plot_cmd) return cmd_plotdata(pl, out);
    if (*demo_cmd) return cmd_demo_eclipse(dm, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace iterseries::cli
