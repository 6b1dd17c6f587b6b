#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "boostray/booster.hpp"
#include "boostray/data_io.hpp"
#include "boostray/errors.hpp"
#include "boostray/experiment.hpp"
#include "boostray/model_io.hpp"

namespace boostray::cli {
namespace {

constexpr const char* kThreadsEnv = "BOOSTRAY_THREADS";

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [end, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || end != last) {
    throw ConfigurationError("invalid value '" + text + "' for '" + key + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void set_key(RunConfig& cfg, std::string key, const std::string& value) {
  std::replace(key.begin(), key.end(), '_', '-');
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"data", [&](const std::string& v) { cfg.data = v; }},
      {"model", [&](const std::string& v) { cfg.model = v; }},
      {"out", [&](const std::string& v) { cfg.out = v; }},
      {"models-dir", [&](const std::string& v) { cfg.models_dir = v; }},
      {"objective", [&](const std::string& v) { cfg.objective = v; }},
      {"report-format", [&](const std::string& v) { cfg.format = report_format_from_string(v); }},
      {"positive", [&](const std::string& v) { cfg.positive = v; }},
      {"rounds", [&](const std::string& v) { cfg.params.num_rounds = parse_number<std::size_t>(key, v); }},
      {"eta", [&](const std::string& v) { cfg.params.eta = parse_number<double>(key, v); }},
      {"gamma", [&](const std::string& v) { cfg.params.gamma = parse_number<double>(key, v); }},
      {"lambda", [&](const std::string& v) { cfg.params.lambda = parse_number<double>(key, v); }},
      {"max-depth", [&](const std::string& v) { cfg.params.max_depth = parse_number<std::size_t>(key, v); }},
      {"min-child-weight", [&](const std::string& v) { cfg.params.min_child_weight = parse_number<double>(key, v); }},
      {"folds", [&](const std::string& v) { cfg.folds = parse_number<std::size_t>(key, v); }},
      {"test-fraction", [&](const std::string& v) { cfg.test_fraction = parse_number<double>(key, v); }},
      {"seed", [&](const std::string& v) { cfg.seed = parse_number<std::uint64_t>(key, v); }},
      {"threads", [&](const std::string& v) { cfg.threads = parse_number<std::size_t>(key, v); }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) throw ConfigurationError("unknown config key '" + key + "'");
  it->second(value);
}

std::size_t resolved_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

ObjectiveSpec resolve_objective(const RunConfig& cfg, std::size_t n_classes) {
  ObjectiveSpec spec = cfg.objective == "auto"
                           ? ObjectiveSpec::for_classes(n_classes)
                           : ObjectiveSpec{objective_kind_from_string(cfg.objective), n_classes};
  spec.validate();
  return spec;
}

ExperimentOptions experiment_options(const RunConfig& cfg, const Dataset& dataset) {
  ExperimentOptions options;
  options.threads = resolved_threads(cfg);
  if (cfg.positive) {
    const auto& names = dataset.class_names();
    auto it = std::find(names.begin(), names.end(), *cfg.positive);
    if (it == names.end()) {
      throw ConfigurationError("positive class '" + *cfg.positive + "' not in dataset");
    }
    options.positive = static_cast<std::size_t>(it - names.begin());
  }
  return options;
}

void require_path(const std::filesystem::path& p, const char* flag) {
  if (p.empty()) throw ConfigurationError(std::string("missing required ") + flag);
}

void emit(const std::string& text, const std::filesystem::path& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("write failed for '" + path.string() + "'");
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Configuration:
    case ErrorKind::Stratification:
      return kExitConfig;
    case ErrorKind::Domain:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

std::string one_line(std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  return trim(message);
}

// Flags given on the command line; unset ones leave file/default values alone.
struct Overrides {
  std::optional<std::string> config, data, model, out, models_dir, objective, report_format,
      positive;
  std::optional<std::size_t> rounds, max_depth, folds, threads;
  std::optional<double> eta, gamma, lambda, min_child_weight, test_fraction;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(const Overrides& ov, RunConfig& cfg) {
  if (ov.data) cfg.data = *ov.data;
  if (ov.model) cfg.model = *ov.model;
  if (ov.out) cfg.out = *ov.out;
  if (ov.models_dir) cfg.models_dir = *ov.models_dir;
  if (ov.objective) cfg.objective = *ov.objective;
  if (ov.report_format) cfg.format = report_format_from_string(*ov.report_format);
  if (ov.positive) cfg.positive = *ov.positive;
  if (ov.rounds) cfg.params.num_rounds = *ov.rounds;
  if (ov.max_depth) cfg.params.max_depth = *ov.max_depth;
  if (ov.eta) cfg.params.eta = *ov.eta;
  if (ov.gamma) cfg.params.gamma = *ov.gamma;
  if (ov.lambda) cfg.params.lambda = *ov.lambda;
  if (ov.min_child_weight) cfg.params.min_child_weight = *ov.min_child_weight;
  if (ov.folds) cfg.folds = *ov.folds;
  if (ov.test_fraction) cfg.test_fraction = *ov.test_fraction;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.threads) {
    cfg.threads = *ov.threads;
  } else if (const char* env = std::getenv(kThreadsEnv); env && *env) {
    cfg.threads = parse_number<std::size_t>(kThreadsEnv, env);
  }
}

std::string real_default(double v) { return format_real(v); }

void add_config_flag(CLI::App* sub, Overrides& ov) {
  sub->add_option("--config", ov.config, "Flat key=value config file; flags take precedence")
      ->default_str("none");
}

void add_threads_flag(CLI::App* sub, Overrides& ov) {
  sub->add_option("--threads", ov.threads,
                  std::string("Worker threads for split search (fallback: $") + kThreadsEnv + ")")
      ->default_str("all cores");
}

void add_hyper_flags(CLI::App* sub, Overrides& ov) {
  const HyperParams d;
  sub->add_option("--objective", ov.objective, "auto, binary-logistic or softmax")
      ->default_str("auto");
  sub->add_option("--rounds", ov.rounds, "Boosting rounds")->default_str(std::to_string(d.num_rounds));
  sub->add_option("--eta", ov.eta, "Learning rate, in (0, 1]")->default_str(real_default(d.eta));
  sub->add_option("--gamma", ov.gamma, "Complexity cost per leaf")->default_str(real_default(d.gamma));
  sub->add_option("--lambda", ov.lambda, "L2 regularization on leaf weights")
      ->default_str(real_default(d.lambda));
  sub->add_option("--max-depth", ov.max_depth, "Maximum tree depth")
      ->default_str(std::to_string(d.max_depth));
  sub->add_option("--min-child-weight", ov.min_child_weight, "Minimum hessian sum per child")
      ->default_str(real_default(d.min_child_weight));
}

void add_report_flags(CLI::App* sub, Overrides& ov) {
  sub->add_option("--out", ov.out, "Report file (stdout when omitted)")->default_str("stdout");
  sub->add_option("--report-format", ov.report_format, "text, csv or json")->default_str("text");
  sub->add_option("--seed", ov.seed, "Split seed")->default_str(std::to_string(kDefaultSeed));
  sub->add_option("--positive", ov.positive,
                  "Positive class name for two-class reports (default: a class named like covid)")
      ->default_str("auto");
}

}  // namespace

void apply_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    set_key(cfg, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.data, "--data");
  require_path(cfg.out, "--out");
  cfg.params.validate();
  const Dataset dataset = load_dataset(cfg.data);
  const ObjectiveSpec objective = resolve_objective(cfg, dataset.n_classes());
  const TrainResult result = train_with_trace(dataset, cfg.params, objective,
                                              TrainOptions{.threads = resolved_threads(cfg), .rows = std::nullopt});
  save_model(result.model, cfg.out);
  out << "trained " << result.model.n_rounds() << " rounds, " << result.model.n_trees()
      << " trees, final training objective " << format_real(result.objective_history.back())
      << ", model written to " << cfg.out.string() << '\n';
  return kExitOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.model, "--model");
  require_path(cfg.data, "--data");
  const BoostModel model = load_model(cfg.model);
  const Dataset dataset = load_dataset(cfg.data);
  const RealMatrix proba = predict_proba(model, dataset.features());
  const auto classes = predict_class(model, dataset.features());

  std::ostringstream os;
  os << "row_index,predicted_class_name";
  for (std::size_t k = 0; k < proba.cols; ++k) os << ",p_class" << k;
  os << '\n';
  for (std::size_t r = 0; r < proba.rows; ++r) {
    os << r << ',' << model.class_names()[classes[r]];
    for (double p : proba.row(r)) os << ',' << format_real(p);
    os << '\n';
  }
  emit(os.str(), cfg.out, out);
  return kExitOk;
}

int cmd_cv(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.data, "--data");
  cfg.params.validate();
  if (cfg.folds < 2) {
    throw ConfigurationError("--folds must be >= 2, got " + std::to_string(cfg.folds));
  }
  const Dataset dataset = load_dataset(cfg.data);
  const ObjectiveSpec objective = resolve_objective(cfg, dataset.n_classes());
  ExperimentOptions options = experiment_options(cfg, dataset);
  std::vector<BoostModel> models;
  if (!cfg.models_dir.empty()) options.models_out = &models;

  const CvResult result = run_cv(dataset, cfg.params, objective, cfg.folds, cfg.seed, options);
  if (!cfg.models_dir.empty()) {
    std::filesystem::create_directories(cfg.models_dir);
    for (std::size_t f = 0; f < models.size(); ++f) {
      save_model(models[f], cfg.models_dir / ("fold_" + std::to_string(f + 1) + ".json"));
    }
  }
  emit(format_cv_report(result, dataset.class_names(), cfg.format), cfg.out, out);
  return kExitOk;
}

int cmd_holdout(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.data, "--data");
  cfg.params.validate();
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    throw ConfigurationError("--test-fraction must lie in (0, 1), got " +
                             format_real(cfg.test_fraction));
  }
  const Dataset dataset = load_dataset(cfg.data);
  const ObjectiveSpec objective = resolve_objective(cfg, dataset.n_classes());
  const MetricsReport report =
      run_holdout(dataset, cfg.params, objective, cfg.test_fraction, cfg.seed,
                  experiment_options(cfg, dataset));
  emit(format_holdout_report(report, cfg.params, objective, cfg.test_fraction, cfg.seed,
                             cfg.format),
       cfg.out, out);
  return kExitOk;
}

int cmd_inspect(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.model, "--model");
  emit(format_model_summary(load_model(cfg.model)), cfg.out, out);
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient tree boosting for classifying extracted image features", "boostray"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  Overrides ov;

  auto* train = app.add_subcommand("train", "Train a model and write it as JSON");
  train->add_option("--data", ov.data, "Feature file (.csv or FMX1)")->default_str("required");
  train->add_option("--out", ov.out, "Model output path")->default_str("required");
  add_hyper_flags(train, ov);
  add_threads_flag(train, ov);
  add_config_flag(train, ov);

  auto* predict = app.add_subcommand("predict", "Score a feature file with a saved model");
  predict->add_option("--model", ov.model, "Model JSON")->default_str("required");
  predict->add_option("--data", ov.data, "Feature file (.csv or FMX1)")->default_str("required");
  predict->add_option("--out", ov.out, "Prediction CSV (stdout when omitted)")->default_str("stdout");
  add_config_flag(predict, ov);

  auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  cv->add_option("--data", ov.data, "Feature file (.csv or FMX1)")->default_str("required");
  cv->add_option("--folds", ov.folds, "Number of folds (k >= 2)")->default_str("5");
  cv->add_option("--models-dir", ov.models_dir, "Directory for per-fold models")
      ->default_str("none");
  add_report_flags(cv, ov);
  add_hyper_flags(cv, ov);
  add_threads_flag(cv, ov);
  add_config_flag(cv, ov);

  auto* holdout = app.add_subcommand("holdout", "Stratified train/test holdout evaluation");
  holdout->add_option("--data", ov.data, "Feature file (.csv or FMX1)")->default_str("required");
  holdout->add_option("--test-fraction", ov.test_fraction, "Fraction held out for testing")
      ->default_str("0.2");
  add_report_flags(holdout, ov);
  add_hyper_flags(holdout, ov);
  add_threads_flag(holdout, ov);
  add_config_flag(holdout, ov);

  auto* inspect = app.add_subcommand("inspect", "Summarize a saved model");
  inspect->add_option("--model", ov.model, "Model JSON")->default_str("required");
  inspect->add_option("--out", ov.out, "Summary file (stdout when omitted)")->default_str("stdout");
  add_config_flag(inspect, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }

  try {
    RunConfig cfg;
    if (ov.config) apply_config_file(*ov.config, cfg);
    apply_overrides(ov, cfg);
    if (train->parsed()) return cmd_train(cfg, out);
    if (predict->parsed()) return cmd_predict(cfg, out);
    if (cv->parsed()) return cmd_cv(cfg, out);
    if (holdout->parsed()) return cmd_holdout(cfg, out);
    return cmd_inspect(cfg, out);
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: internal failure: " << one_line(e.what()) << '\n';
    return kExitInternal;
  }
}

}  // namespace boostray::cli
