// acmon command-line front end.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acmon/acmon.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAlarm = 2;

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string config_path;
  bool seed_given = false;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw acmon::Error(acmon::ErrorKind::InvalidArgument, "cannot open config '" + path + "'");
  try {
    auto j = json::parse(in);
    if (!j.is_object()) throw acmon::Error(acmon::ErrorKind::Parse, "config must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw acmon::Error(acmon::ErrorKind::Parse, "config '" + path + "': " + e.what());
  }
}

// Sets `target` from config key `key` unless the flag was given explicitly.
template <typename T>
void merge(const json& cfg, const char* key, T& target, const CLI::Option* flag) {
  if (flag != nullptr && flag->count() > 0) return;
  if (!cfg.contains(key)) return;
  try {
    target = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw acmon::Error(acmon::ErrorKind::Parse, std::string("config key '") + key + "': " + e.what());
  }
}

std::uint64_t resolve_seed(const Globals& g, const json& cfg) {
  if (g.seed_given) return g.seed;
  if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
  return g.seed;
}

json run_header(const std::string& command, std::uint64_t seed, const json& config) {
  return {{"tool", "acmon"}, {"version", acmon::kVersion}, {"command", command}, {"seed", seed}, {"config", config}};
}

void write_text(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw acmon::Error(acmon::ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << body;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fill) {
  std::ostringstream os;
  fill(os);
  write_text(path, os.str());
}

fs::path sibling_run_json(const fs::path& file) { return fs::path(file.string() + ".run.json"); }

// Sends `body` to --out when set (plus a sibling run record), else stdout.
void emit(const Globals& g, const std::string& body, const json& header) {
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  write_text(g.out, body);
  write_text(sibling_run_json(g.out), header.dump(2) + "\n");
}

// Probability list: one value per line, '#' starts a comment, blank lines
// ignored. Also accepts a JSON array when the file starts with '['.
std::vector<double> read_probs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw acmon::Error(acmon::ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return json::parse(text).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw acmon::Error(acmon::ErrorKind::Parse, path + ": " + e.what());
    }
  }
  std::vector<double> probs;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r,");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r,");
    const std::string token = line.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw acmon::Error(acmon::ErrorKind::Parse, path + ": line " + std::to_string(line_no) + ": '" + token +
                                                      "' is not a number");
    }
    if (!(v >= 0.0 && v <= 1.0)) {
      throw acmon::Error(acmon::ErrorKind::OutOfRange,
                         path + ": line " + std::to_string(line_no) + ": probability outside [0, 1]");
    }
    probs.push_back(v);
  }
  return probs;
}

std::vector<acmon::PredictionRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw acmon::Error(acmon::ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  try {
    auto records = acmon::read_records(in);
    if (records.empty()) throw acmon::Error(acmon::ErrorKind::EmptyInput, path + " contains no records");
    return records;
  } catch (const acmon::Error& e) {
    if (e.kind() == acmon::ErrorKind::Parse) throw acmon::Error(acmon::ErrorKind::Parse, path + ": " + e.what());
    throw;
  }
}

acmon::IntervalConvention parse_convention(const std::string& s) {
  if (s == "conservative") return acmon::IntervalConvention::Conservative;
  if (s == "inclusive") return acmon::IntervalConvention::Inclusive;
  throw acmon::Error(acmon::ErrorKind::InvalidArgument, "unknown interval convention '" + s + "'");
}

// ---------------------------------------------------------------------------

struct PbArgs {
  std::string probs_file;
  bool pmf = false, cdf = false, mean = false, variance = false;
  std::optional<double> interval;
  std::string method = "dft";
  std::string convention = "conservative";
};

int cmd_pb(const Globals& g, const PbArgs& a) {
  const auto probs = read_probs(a.probs_file);
  if (probs.empty()) throw acmon::Error(acmon::ErrorKind::EmptyInput, a.probs_file + " has no probabilities");
  if (a.method != "dft" && a.method != "dp") {
    throw acmon::Error(acmon::ErrorKind::InvalidArgument, "method must be dft or dp");
  }
  const bool any = a.pmf || a.cdf || a.mean || a.variance || a.interval;
  const auto pmf = a.method == "dp" ? acmon::pmf_dp(probs) : acmon::pmf_dft(probs);
  acmon::PoissonBinomial dist(probs);

  json out;
  out["n"] = probs.size();
  if (a.pmf || !any) out["pmf"] = pmf;
  if (a.cdf || !any) {
    std::vector<double> cdf(pmf.size());
    double running = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) cdf[k] = running += pmf[k];
    out["cdf"] = cdf;
  }
  if (a.mean || !any) out["mean"] = dist.mean();
  if (a.variance || !any) out["variance"] = dist.variance();
  if (a.interval) {
    const auto ci = dist.central_interval(*a.interval, parse_convention(a.convention));
    const double n = static_cast<double>(probs.size());
    out["interval"] = {{"level", *a.interval},
                       {"convention", a.convention},
                       {"count_lo", ci.lo},
                       {"count_hi", ci.hi},
                       {"lo", static_cast<double>(ci.lo) / n},
                       {"hi", static_cast<double>(ci.hi) / n},
                       {"mass", dist.mass_between(ci.lo, ci.hi)}};
  }
  const json config = {{"probs_file", a.probs_file}, {"method", a.method}, {"convention", a.convention},
                       {"interval", a.interval ? json(*a.interval) : json(nullptr)}};
  out["run"] = run_header("pb", g.seed, config);
  emit(g, out.dump(2) + "\n", run_header("pb", g.seed, config));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimArgs {
  acmon::CalibratedSimConfig cfg;
  bool plot_data = false;
  CLI::Option* trials = nullptr;
  CLI::Option* coverage_trials = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* window_sizes = nullptr;
  CLI::Option* reference_n = nullptr;
  CLI::Option* shift_steps = nullptr;
  CLI::Option* level = nullptr;
  CLI::Option* sem_z = nullptr;
};

int cmd_simulate_calibrated(const Globals& g, SimArgs& a) {
  const json file_cfg = load_config(g.config_path);
  auto& c = a.cfg;
  merge(file_cfg, "sweep_trials", c.sweep_trials, a.trials);
  merge(file_cfg, "coverage_trials", c.coverage_trials, a.coverage_trials);
  merge(file_cfg, "sweep_sizes", c.sweep_sizes, a.n);
  merge(file_cfg, "coverage_sizes", c.coverage_sizes, a.window_sizes);
  merge(file_cfg, "reference_n", c.reference_n, a.reference_n);
  merge(file_cfg, "shift_steps", c.shift_steps, a.shift_steps);
  merge(file_cfg, "level", c.level, a.level);
  merge(file_cfg, "sem_z", c.sem_z, a.sem_z);
  c.seed = resolve_seed(g, file_cfg);

  const auto res = acmon::run_calibrated_simulation(c);
  const fs::path dir = g.out.empty() ? fs::path("results/simulate-calibrated") : fs::path(g.out);
  write_file(dir / "sweep.csv", [&](std::ostream& os) { acmon::write_sweep_csv(os, res); });
  write_file(dir / "coverage.csv", [&](std::ostream& os) { acmon::write_coverage_csv(os, res); });
  if (a.plot_data) {
    write_file(dir / "sweep_long.csv", [&](std::ostream& os) { acmon::write_sweep_plot_data(os, res); });
    write_file(dir / "coverage_long.csv", [&](std::ostream& os) { acmon::write_coverage_plot_data(os, res); });
  }
  json header = run_header("simulate-calibrated", c.seed, c.to_json());
  header["reference"] = res.reference.to_json();
  header["atc_threshold"] = res.atc.t;
  write_text(dir / "run.json", header.dump(2) + "\n");

  std::cout << std::fixed << std::setprecision(4);
  std::cout << "reference accuracy " << res.reference.accuracy << ", ATC threshold " << res.atc.t << "\n";
  std::cout << "coverage (conservative / SEM):\n";
  for (const auto& cell : res.coverage) {
    std::cout << "  " << cell.mixture << " n=" << cell.window_size << "  " << cell.pb_coverage << " / "
              << cell.sem_coverage << "\n";
  }
  std::cout << "wrote " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ShiftArgs {
  acmon::CovariateShiftConfig cfg;
  std::vector<std::string> scenarios;
  std::vector<std::string> models;
  bool plot_data = false;
  CLI::Option* trials = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* scen_opt = nullptr;
  CLI::Option* model_opt = nullptr;
  CLI::Option* knn_k = nullptr;
  CLI::Option* ace_bins = nullptr;
};

acmon::Scenario parse_scenario(const std::string& s) {
  if (s == "linear" || s == "1") return acmon::Scenario::LinearBoundary;
  if (s == "circular" || s == "2") return acmon::Scenario::CircularBoundary;
  throw acmon::Error(acmon::ErrorKind::InvalidArgument, "unknown scenario '" + s + "'");
}

int cmd_covariate_shift(const Globals& g, ShiftArgs& a) {
  const json file_cfg = load_config(g.config_path);
  auto& c = a.cfg;
  merge(file_cfg, "trials", c.trials, a.trials);
  merge(file_cfg, "sample_size", c.sample_size, a.n);
  merge(file_cfg, "knn_k", c.knn_k, a.knn_k);
  merge(file_cfg, "ace_bins", c.ace_bins, a.ace_bins);
  merge(file_cfg, "shift_levels", c.shift_levels, nullptr);
  merge(file_cfg, "circle_radius", c.circle_radius, nullptr);
  merge(file_cfg, "scenarios", a.scenarios, a.scen_opt);
  merge(file_cfg, "models", a.models, a.model_opt);
  for (auto [key, easy, hard] : {std::tuple{"train", &c.train_easy, &c.train_hard},
                                 std::tuple{"calibration", &c.calib_easy, &c.calib_hard},
                                 std::tuple{"setup", &c.setup_easy, &c.setup_hard}}) {
    if (file_cfg.contains(key)) {
      const auto pair = file_cfg.at(key).get<std::vector<std::size_t>>();
      if (pair.size() != 2) throw acmon::Error(acmon::ErrorKind::Parse, std::string(key) + " must be [easy, hard]");
      *easy = pair[0];
      *hard = pair[1];
    }
  }
  if (!a.scenarios.empty()) {
    c.scenarios.clear();
    for (const auto& s : a.scenarios) c.scenarios.push_back(parse_scenario(s));
  }
  if (!a.models.empty()) {
    c.models.clear();
    for (const auto& m : a.models) c.models.push_back(acmon::parse_model_kind(m));
  }
  c.seed = resolve_seed(g, file_cfg);

  const auto res = acmon::run_covariate_shift(c);
  const fs::path dir = g.out.empty() ? fs::path("results/covariate-shift") : fs::path(g.out);
  write_file(dir / "shift.csv", [&](std::ostream& os) { acmon::write_shift_csv(os, res); });
  write_file(dir / "correlation.csv", [&](std::ostream& os) { acmon::write_correlation_csv(os, res); });
  if (a.plot_data) {
    write_file(dir / "shift_long.csv", [&](std::ostream& os) { acmon::write_shift_plot_data(os, res); });
  }
  write_text(dir / "run.json", run_header("covariate-shift", c.seed, c.to_json()).dump(2) + "\n");

  std::cout << std::fixed << std::setprecision(2);
  std::cout << "scenario  model  shift  acc%   ACE_u  ACE_c  AC_c  DoC_c  ATC_c\n";
  for (const auto& cell : res.cells) {
    std::cout << acmon::to_string(cell.scenario) << "  " << acmon::to_string(cell.model) << "  " << cell.shift
              << "  " << 100 * cell.test_accuracy << "  " << 100 * cell.ace_u << "  " << 100 * cell.ace_c << "  "
              << 100 * cell.mae_ac_c << "  " << 100 * cell.mae_doc_c << "  " << 100 * cell.mae_atc_c << "\n";
  }
  std::cout << std::setprecision(3);
  for (const auto& r : res.correlations) std::cout << "pearson " << r.scope << " " << r.estimator << " " << r.pearson << "\n";
  std::cout << "wrote " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct MonitorArgs {
  std::string records;
  std::string reference;
  std::string method = "AC";
  double level = 0.95;
  double z = 3.0;
  std::optional<std::size_t> window_size;
  std::string convention = "conservative";
};

int cmd_monitor(const Globals& g, const MonitorArgs& a) {
  json ref_json;
  {
    std::ifstream in(a.reference);
    if (!in) throw acmon::Error(acmon::ErrorKind::InvalidArgument, "cannot open '" + a.reference + "'");
    try {
      ref_json = json::parse(in);
    } catch (const json::parse_error& e) {
      throw acmon::Error(acmon::ErrorKind::Parse, a.reference + ": " + e.what());
    }
  }
  const auto ref = acmon::ReferenceWindow::from_json(ref_json);
  if (a.window_size && *a.window_size != ref.window_size) {
    throw acmon::Error(acmon::ErrorKind::InvalidArgument,
                       "window size " + std::to_string(*a.window_size) + " does not match the reference (" +
                           std::to_string(ref.window_size) + ")");
  }
  const auto records = read_records_file(a.records);
  std::vector<double> scores;
  scores.reserve(records.size());
  for (const auto& r : records) scores.push_back(r.score);

  acmon::MonitorOptions opt;
  opt.method = acmon::parse_method(a.method);
  opt.level = a.level;
  opt.z = a.z;
  opt.convention = parse_convention(a.convention);
  const auto verdicts = acmon::monitor_stream(ref, scores, opt);

  std::ostringstream os;
  bool alarm = false;
  for (const auto& v : verdicts) {
    os << v.to_json().dump() << "\n";
    alarm = alarm || v.alarm;
  }
  const json config = {{"records", a.records}, {"reference", a.reference}, {"method", a.method},
                       {"level", a.level},     {"z", a.z},                 {"convention", a.convention}};
  emit(g, os.str(), run_header("monitor", g.seed, config));
  std::cerr << verdicts.size() << " windows, " << (alarm ? "alarm raised" : "no alarm") << "\n";
  return alarm ? kExitAlarm : kExitOk;
}

// ---------------------------------------------------------------------------

struct ReferenceArgs {
  std::string records;
  std::size_t window_size = 500;
  bool calibrate = false;
};

int cmd_reference(const Globals& g, const ReferenceArgs& a) {
  const auto records = read_records_file(a.records);
  const auto outcomes = acmon::labelled_outcomes(records);
  const auto ref = acmon::build_reference(outcomes, a.window_size, a.calibrate);
  const json config = {{"records", a.records}, {"window_size", a.window_size}, {"calibrate", a.calibrate}};
  emit(g, ref.to_json().dump(2) + "\n", run_header("reference", g.seed, config));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CalibrateArgs {
  std::string records;
  std::string out_map;
  std::size_t bins = 20;
};

int cmd_calibrate(const Globals& g, const CalibrateArgs& a) {
  const auto records = read_records_file(a.records);
  const auto outcomes = acmon::labelled_outcomes(records);
  const auto map = acmon::fit_isotonic(outcomes);
  std::vector<acmon::ScoredOutcome> after(outcomes);
  for (auto& o : after) o.score = map.apply(o.score);

  const std::string map_path = !a.out_map.empty() ? a.out_map : (g.out.empty() ? std::string() : g.out + ".map.json");
  const json config = {{"records", a.records}, {"bins", a.bins}, {"out_map", map_path}};
  if (!map_path.empty()) {
    write_text(map_path, map.to_json().dump(2) + "\n");
    write_text(sibling_run_json(map_path), run_header("calibrate", g.seed, config).dump(2) + "\n");
  }
  json report = {{"records", outcomes.size()},
                 {"breakpoints", map.breakpoints().size()},
                 {"ace_before", acmon::ace(outcomes, a.bins)},
                 {"ace_after", acmon::ace(after, a.bins)},
                 {"bins", a.bins},
                 {"map", map_path.empty() ? json(nullptr) : json(map_path)}};
  emit(g, report.dump(2) + "\n", run_header("calibrate", g.seed, config));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::size_t n = 10000;
  double shift_fraction = 0.0;
  bool unlabelled = false;
};

// Prediction records whose scores follow the Beta mixtures and whose labels
// are drawn so the scores are calibrated. predicted is always 1; label records
// whether that prediction was right.
int cmd_generate(const Globals& g, const GenerateArgs& a) {
  const auto scores = acmon::mix_gradual(acmon::BetaMixture::original(), acmon::BetaMixture::shifted(),
                                         a.shift_fraction, a.n, acmon::derive_seed(g.seed, acmon::streams::kMonitor, 0));
  const auto outcomes = acmon::attach_labels(scores, acmon::derive_seed(g.seed, acmon::streams::kMonitor, 1));
  std::ostringstream os;
  for (const auto& o : outcomes) {
    json rec = {{"score", o.score}, {"predicted", 1}};
    rec["label"] = a.unlabelled ? json(nullptr) : json(o.correct ? 1 : 0);
    os << rec.dump() << "\n";
  }
  const json config = {{"n", a.n}, {"shift_fraction", a.shift_fraction}, {"unlabelled", a.unlabelled}};
  emit(g, os.str(), run_header("generate", g.seed, config));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-free accuracy monitoring from confidence scores"};
  app.set_version_flag("--version", std::string(acmon::kVersion));
  app.require_subcommand(1);

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);

  PbArgs pb;
  auto* pb_cmd = app.add_subcommand("pb", "Poisson binomial queries on a list of probabilities");
  pb_cmd->add_option("probs", pb.probs_file, "File with one probability per line")->required();
  pb_cmd->add_flag("--pmf", pb.pmf, "Report the PMF");
  pb_cmd->add_flag("--cdf", pb.cdf, "Report the CDF");
  pb_cmd->add_flag("--mean", pb.mean, "Report the mean");
  pb_cmd->add_flag("--variance", pb.variance, "Report the variance");
  pb_cmd->add_option("--interval", pb.interval, "Central interval at this level");
  pb_cmd->add_option("--method", pb.method, "PMF algorithm: dft or dp")->capture_default_str();
  pb_cmd->add_option("--convention", pb.convention, "conservative or inclusive")->capture_default_str();

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate-calibrated", "Estimator sweep and interval coverage on Beta mixtures");
  sim.trials = sim_cmd->add_option("--trials", sim.cfg.sweep_trials, "Trials per sweep cell")->capture_default_str();
  sim.coverage_trials =
      sim_cmd->add_option("--coverage-trials", sim.cfg.coverage_trials, "Trials per coverage cell")->capture_default_str();
  sim.n = sim_cmd->add_option("--n", sim.cfg.sweep_sizes, "Window sizes for the sweep");
  sim.window_sizes = sim_cmd->add_option("--window-sizes", sim.cfg.coverage_sizes, "Window sizes for coverage");
  sim.reference_n = sim_cmd->add_option("--reference-n", sim.cfg.reference_n, "Reference sample size");
  sim.shift_steps = sim_cmd->add_option("--shift-steps", sim.cfg.shift_steps, "Number of shift increments");
  sim.level = sim_cmd->add_option("--level", sim.cfg.level, "Interval level");
  sim.sem_z = sim_cmd->add_option("--sem-z", sim.cfg.sem_z, "SEM band multiplier");
  sim_cmd->add_option("--threads", sim.cfg.threads, "Worker threads (0 = all cores)");
  sim_cmd->add_flag("--plot-data", sim.plot_data, "Also write long-format CSV");

  ShiftArgs shift;
  auto* shift_cmd = app.add_subcommand("covariate-shift", "Estimators on trained classifiers under covariate shift");
  shift.trials = shift_cmd->add_option("--trials", shift.cfg.trials, "Bootstrap trials per cell")->capture_default_str();
  shift.n = shift_cmd->add_option("--n", shift.cfg.sample_size, "Bootstrap sample size")->capture_default_str();
  shift.scen_opt = shift_cmd->add_option("--scenarios", shift.scenarios, "linear and/or circular");
  shift.model_opt = shift_cmd->add_option("--models", shift.models, "LR, GNB, KNN, BayesOptimal");
  shift.knn_k = shift_cmd->add_option("--knn-k", shift.cfg.knn_k, "Neighbours for KNN");
  shift.ace_bins = shift_cmd->add_option("--ace-bins", shift.cfg.ace_bins, "Bins for ACE");
  shift_cmd->add_option("--threads", shift.cfg.threads, "Worker threads (0 = all cores)");
  shift_cmd->add_flag("--plot-data", shift.plot_data, "Also write long-format CSV");

  MonitorArgs mon;
  auto* mon_cmd = app.add_subcommand("monitor", "Windowed monitoring of a prediction record stream");
  mon_cmd->add_option("--records", mon.records, "JSONL prediction records")->required();
  mon_cmd->add_option("--reference", mon.reference, "Reference JSON")->required();
  mon_cmd->add_option("--method", mon.method, "AC, ATC, DocFeat or BinomialBaseline")->capture_default_str();
  mon_cmd->add_option("--level", mon.level, "Interval level")->capture_default_str();
  mon_cmd->add_option("-z", mon.z, "Control limit width in standard deviations")->capture_default_str();
  mon_cmd->add_option("--window-size", mon.window_size, "Expected window size (must match reference)");
  mon_cmd->add_option("--convention", mon.convention, "conservative or inclusive")->capture_default_str();

  ReferenceArgs refa;
  auto* ref_cmd = app.add_subcommand("reference", "Build a reference window from labelled records");
  ref_cmd->add_option("--records", refa.records, "Labelled JSONL records")->required();
  ref_cmd->add_option("--window-size", refa.window_size, "Monitoring window size")->capture_default_str();
  ref_cmd->add_flag("--calibrate", refa.calibrate, "Fit an isotonic map on half of the records");

  CalibrateArgs cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit an isotonic calibration map and report ACE");
  cal_cmd->add_option("--records", cal.records, "Labelled JSONL records")->required();
  cal_cmd->add_option("--out-map", cal.out_map, "Where to write the map JSON");
  cal_cmd->add_option("--bins", cal.bins, "ACE bins")->capture_default_str();

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write Beta-mixture prediction records as JSONL");
  gen_cmd->add_option("--n", gen.n, "Number of records")->capture_default_str();
  gen_cmd->add_option("--shift-fraction", gen.shift_fraction, "Share drawn from the shifted mixture")
      ->capture_default_str();
  gen_cmd->add_flag("--unlabelled", gen.unlabelled, "Write null labels");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (*pb_cmd) return cmd_pb(g, pb);
    if (*sim_cmd) return cmd_simulate_calibrated(g, sim);
    if (*shift_cmd) return cmd_covariate_shift(g, shift);
    if (*mon_cmd) return cmd_monitor(g, mon);
    if (*ref_cmd) return cmd_reference(g, refa);
    if (*cal_cmd) return cmd_calibrate(g, cal);
    if (*gen_cmd) return cmd_generate(g, gen);
  } catch (const acmon::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
