#include "acil/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "acil/error.hpp"

namespace acil {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ValidationError("config key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

Rational parse_rational(const std::string& key, const std::string& value) {
  if (auto slash = value.find('/'); slash != std::string::npos) {
    return Rational{parse_number<std::uint32_t>(key, trim(value.substr(0, slash))),
                    parse_number<std::uint32_t>(key, trim(value.substr(slash + 1)))};
  }
  const double x = parse_number<double>(key, value);
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("config key '" + key + "' must lie in [0, 1]");
  constexpr std::uint32_t kDen = 1000000;
  return Rational{static_cast<std::uint32_t>(std::llround(x * kDen)), kDen};
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

Matrix append_rows(const Matrix& top, const Matrix& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

std::unique_ptr<Extractor> make_extractor(const ExperimentConfig& config, Eigen::Index input_dim) {
  if (config.extractor == ExtractorKind::Identity) return std::make_unique<IdentityExtractor>(input_dim);
  const Eigen::Index width = config.extractor_width > 0 ? config.extractor_width : input_dim;
  return std::make_unique<RandomProjectionExtractor>(input_dim, width, config.extractor_seed);
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const {
  if (features.empty() || labels.empty()) throw ValidationError("config must name 'features' and 'labels'");
  if (test_features.has_value() != test_labels.has_value()) {
    throw ValidationError("'test_features' and 'test_labels' must be given together");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be positive");
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw ValidationError("holdout_fraction must lie in [0, 1)");
  }
  if (d_fe < 1) throw ValidationError("d_fe must be positive");
  if (fe_std && !(*fe_std > 0.0)) throw ValidationError("fe_std must be positive");
  if (chunk_size < 1) throw ValidationError("chunk_size must be positive");
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be non-negative");
  if (verify_cap < 1) throw ValidationError("verify_cap must be positive");
  if (extractor_width < 0) throw ValidationError("extractor_width must be non-negative");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["features"] = features.generic_string();
  j["labels"] = labels.generic_string();
  j["test_features"] = test_features ? nlohmann::json(test_features->generic_string()) : nlohmann::json(nullptr);
  j["test_labels"] = test_labels ? nlohmann::json(test_labels->generic_string()) : nlohmann::json(nullptr);
  j["base_fraction"] = std::to_string(split.base_fraction.num) + "/" + std::to_string(split.base_fraction.den);
  j["phases"] = split.phases;
  j["split_seed"] = split.seed;
  j["strict_even"] = split.strict_even;
  j["holdout_fraction"] = holdout_fraction;
  j["extractor"] = extractor == ExtractorKind::Identity ? "identity" : "random_projection";
  j["extractor_width"] = extractor_width;
  j["extractor_seed"] = extractor_seed;
  j["d_fe"] = d_fe;
  j["fe_seed"] = fe_seed;
  j["fe_std"] = fe_std ? nlohmann::json(*fe_std) : nlohmann::json(nullptr);
  j["gamma"] = gamma;
  j["chunk_size"] = chunk_size;
  j["tolerance"] = tolerance;
  j["verify_cap"] = verify_cap;
  return j;
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value,
                      const std::filesystem::path& base_dir) {
  if (key == "features") {
    c.features = resolve(base_dir, value);
  } else if (key == "labels") {
    c.labels = resolve(base_dir, value);
  } else if (key == "test_features") {
    c.test_features = resolve(base_dir, value);
  } else if (key == "test_labels") {
    c.test_labels = resolve(base_dir, value);
  } else if (key == "base_fraction") {
    c.split.base_fraction = parse_rational(key, value);
  } else if (key == "phases" || key == "K") {
    c.split.phases = parse_number<std::size_t>(key, value);
  } else if (key == "split_seed") {
    c.split.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "strict_even") {
    c.split.strict_even = parse_bool(key, value);
  } else if (key == "holdout_fraction") {
    c.holdout_fraction = parse_number<double>(key, value);
  } else if (key == "extractor") {
    if (value == "identity") {
      c.extractor = ExtractorKind::Identity;
    } else if (value.rfind("random_projection", 0) == 0) {
      c.extractor = ExtractorKind::RandomProjection;
      // Optional inline form: random_projection(width, seed)
      if (auto open = value.find('('); open != std::string::npos) {
        const auto close = value.find(')', open);
        const auto comma = value.find(',', open);
        if (close == std::string::npos || comma == std::string::npos || comma > close) {
          throw ValidationError("config key 'extractor': expected random_projection(width, seed)");
        }
        c.extractor_width = parse_number<Eigen::Index>(key, trim(value.substr(open + 1, comma - open - 1)));
        c.extractor_seed = parse_number<std::uint64_t>(key, trim(value.substr(comma + 1, close - comma - 1)));
      }
    } else {
      throw ValidationError("config key 'extractor': unknown extractor '" + value + "'");
    }
  } else if (key == "extractor_width") {
    c.extractor_width = parse_number<Eigen::Index>(key, value);
  } else if (key == "extractor_seed") {
    c.extractor_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "d_fe") {
    c.d_fe = parse_number<Eigen::Index>(key, value);
  } else if (key == "fe_seed") {
    c.fe_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "fe_std") {
    if (value == "auto") {
      c.fe_std.reset();
    } else {
      c.fe_std = parse_number<double>(key, value);
    }
  } else if (key == "gamma") {
    c.gamma = parse_number<double>(key, value);
  } else if (key == "chunk_size") {
    c.chunk_size = parse_number<Eigen::Index>(key, value);
  } else if (key == "tolerance" || key == "tol") {
    c.tolerance = parse_number<double>(key, value);
  } else if (key == "verify_cap") {
    c.verify_cap = parse_number<Eigen::Index>(key, value);
  } else if (key == "output_dir") {
    c.output_dir = resolve(base_dir, value);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), base_dir);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

// ---------------------------------------------------------------- agenda

PreparedExperiment prepare_experiment(const ExperimentConfig& config) {
  config.validate();
  for (const auto* p : {&config.features, &config.labels}) {
    if (!std::filesystem::exists(*p)) throw ValidationError("input file '" + p->string() + "' does not exist");
  }
  SampleSet train = load_sample_set(config.features, config.labels);
  SampleSet test;
  if (config.test_features) {
    test = load_sample_set(*config.test_features, *config.test_labels);
    if (test.dim() != train.dim()) throw ValidationError("test features differ in width from training features");
  } else {
    std::tie(train, test) = stratified_holdout(train, config.holdout_fraction, config.split.seed);
  }

  auto phases = split_phases(train, config.split);
  std::vector<ClassList> groups;
  for (const auto& p : phases) groups.push_back(p.class_ids);
  const std::set<ClassId> known(train.class_universe.begin(), train.class_universe.end());
  for (auto c : test.class_universe) {
    if (!known.contains(c)) throw ValidationError("test set contains class " + std::to_string(c) + " absent from training");
  }
  auto test_phases = assemble_phases(test, groups);

  auto extractor = make_extractor(config, train.dim());
  const Eigen::Index d_cnn = extractor->output_dim();
  auto expander = make_expander(d_cnn, config.d_fe, config.fe_seed,
                                config.fe_std.value_or(default_expansion_std(d_cnn)));
  return PreparedExperiment{std::move(phases), std::move(test_phases), std::move(extractor), std::move(expander)};
}

AgendaResult run_agenda(const std::vector<PhaseDataset>& train, const std::vector<PhaseDataset>& test,
                        const Extractor& extractor, const FeatureExpander& expander, double gamma,
                        Eigen::Index chunk_size) {
  if (train.empty()) throw ValidationError("no phases to train");
  if (test.size() != train.size()) throw ValidationError("train and test phase counts differ");
  validate_disjoint(train);

  AgendaResult result;
  Matrix union_features(0, expander.expanded_dim());
  std::vector<ClassId> union_labels;
  Matrix base_features;
  std::vector<ClassId> base_labels;

  for (std::size_t k = 0; k < train.size(); ++k) {
    const auto& phase = train[k];
    const auto start = std::chrono::steady_clock::now();
    const Matrix x = extract_and_expand(extractor, expander, phase.features);
    try {
      if (k == 0) {
        result.final_state = fit_base(x, phase.onehot, phase.class_ids, gamma);
      } else {
        result.final_state = update_phase(*result.final_state, PhaseUpdate{x, phase.onehot, phase.class_ids},
                                          UpdateOptions{chunk_size});
      }
    } catch (const ValidationError& e) {
      throw ValidationError("phase " + std::to_string(k) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("phase " + std::to_string(k) + ": " + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const Matrix test_x = test[k].features.rows() > 0 ? extract_and_expand(extractor, expander, test[k].features)
                                                       : Matrix(0, expander.expanded_dim());
    union_features = append_rows(union_features, test_x);
    union_labels.insert(union_labels.end(), test[k].labels.begin(), test[k].labels.end());
    if (k == 0) {
      base_features = test_x;
      base_labels = test[k].labels;
    }
    if (union_labels.empty() || base_labels.empty()) {
      throw ValidationError("phase " + std::to_string(k) + ": no test samples to evaluate");
    }

    PhaseRecord rec;
    rec.phase = k;
    rec.train_samples = static_cast<std::size_t>(phase.features.rows());
    rec.test_samples = test[k].labels.size();
    rec.class_ids = phase.class_ids;
    rec.accuracy = phase_accuracy(predict(*result.final_state, union_features).classes, union_labels);
    rec.base_accuracy = phase_accuracy(predict(*result.final_state, base_features).classes, base_labels);
    rec.seconds = seconds;
    rec.state_bytes = save_state(*result.final_state).size();
    result.log.accuracy.push_back(rec.accuracy);
    result.log.base_accuracy.push_back(rec.base_accuracy);
    result.phases.push_back(std::move(rec));
  }
  return result;
}

// ---------------------------------------------------------------- reports

nlohmann::json ExperimentReport::to_json(bool include_timing) const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["config"] = config;
  nlohmann::json phase_list = nlohmann::json::array();
  std::size_t seen = 0;
  for (const auto& p : phases) {
    seen += p.class_ids.size();
    phase_list.push_back({{"phase", p.phase},
                          {"classes", p.class_ids},
                          {"classes_seen", seen},
                          {"train_samples", p.train_samples},
                          {"test_samples", p.test_samples},
                          {"accuracy", p.accuracy},
                          {"base_accuracy", p.base_accuracy},
                          {"state_bytes", p.state_bytes}});
  }
  j["phases"] = phase_list;
  j["average_accuracy"] = average_accuracy;
  j["forgetting"] = forgetting ? nlohmann::json{{"signed", forgetting->signed_value},
                                                {"magnitude", forgetting->magnitude}}
                               : nlohmann::json(nullptr);
  j["final_accuracy"] = final_accuracy;
  j["memory"] = {{"autocorrelation_bytes", autocorrelation_bytes},
                 {"state_bytes", phases.empty() ? 0 : phases.back().state_bytes}};
  if (verification) j["verification"] = *verification;
  if (include_timing) {
    std::vector<double> secs;
    for (const auto& p : phases) secs.push_back(p.seconds);
    j["timing"] = {{"phase_seconds", secs}, {"total_seconds", std::accumulate(secs.begin(), secs.end(), 0.0)}};
  }
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto prepared = prepare_experiment(config);
  auto agenda = run_agenda(prepared.train, prepared.test, *prepared.extractor, prepared.expander, config.gamma,
                           config.chunk_size);

  ExperimentReport report;
  report.config = config.to_json();
  report.phases = agenda.phases;
  report.average_accuracy = average_incremental_accuracy(agenda.log);
  if (agenda.log.accuracy.size() >= 2) report.forgetting = forgetting_rate(agenda.log);
  report.final_accuracy = agenda.log.accuracy.back();
  const auto d = static_cast<std::size_t>(prepared.expander.expanded_dim());
  report.autocorrelation_bytes = d * d * sizeof(double);

  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    std::ofstream(config.output_dir / "report.json") << report.to_json().dump(2) << '\n';
    save_state_file(*agenda.final_state, config.output_dir / "state.bin");
  }
  return report;
}

nlohmann::json RepeatSummary::to_json() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    runs_json.push_back({{"seed", seeds[i]},
                         {"average_accuracy", runs[i].average_accuracy},
                         {"forgetting", runs[i].forgetting ? nlohmann::json(runs[i].forgetting->signed_value)
                                                           : nlohmann::json(nullptr)},
                         {"final_accuracy", runs[i].final_accuracy}});
  }
  return {{"schema", "acil.repeat/1"},
          {"runs", runs_json},
          {"average_accuracy", {{"mean", mean_average_accuracy}, {"std", std_average_accuracy}}},
          {"forgetting", {{"mean", mean_forgetting}, {"std", std_forgetting}}}};
}

RepeatSummary run_repeated(const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ValidationError("repeat needs at least one seed");
  RepeatSummary summary;
  summary.seeds = seeds;
  std::vector<double> abar;
  std::vector<double> forget;
  for (auto seed : seeds) {
    auto c = config;
    c.fe_seed = seed;
    c.extractor_seed = seed;
    if (!c.output_dir.empty()) c.output_dir /= "seed_" + std::to_string(seed);
    summary.runs.push_back(run_experiment(c));
    abar.push_back(summary.runs.back().average_accuracy);
    if (summary.runs.back().forgetting) forget.push_back(summary.runs.back().forgetting->signed_value);
  }
  summary.mean_average_accuracy = mean_of(abar);
  summary.std_average_accuracy = stddev_of(abar);
  summary.mean_forgetting = mean_of(forget);
  summary.std_forgetting = stddev_of(forget);
  return summary;
}

// ---------------------------------------------------------------- verify

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j = {{"passed", passed()},
                      {"tolerance", weights.tolerance},
                      {"max_abs", weights.max_abs},
                      {"rel_frobenius", weights.rel_frobenius},
                      {"max_autocorrelation_rel_error", max_autocorrelation_rel_error},
                      {"phases", phases},
                      {"d_fe", d_fe}};
  if (weights.worst_row >= 0) j["worst"] = {{"row", weights.worst_row}, {"class", weights.worst_class}};
  return j;
}

VerifyReport verify_experiment(const ExperimentConfig& config) {
  if (config.d_fe > config.verify_cap) {
    throw ValidationError("d_fe=" + std::to_string(config.d_fe) + " exceeds verify_cap=" +
                          std::to_string(config.verify_cap));
  }
  const auto prepared = prepare_experiment(config);

  JointProblem problem{{}, config.gamma};
  std::optional<AnalyticState> state;
  VerifyReport report;
  for (std::size_t k = 0; k < prepared.train.size(); ++k) {
    const auto& phase = prepared.train[k];
    Matrix x = extract_and_expand(*prepared.extractor, prepared.expander, phase.features);
    if (k == 0) {
      state = fit_base(x, phase.onehot, phase.class_ids, config.gamma);
    } else {
      state = update_phase(*state, PhaseUpdate{x, phase.onehot, phase.class_ids}, UpdateOptions{config.chunk_size});
    }
    problem.phases.push_back(JointPhase{std::move(x), phase.onehot, phase.class_ids});
    const auto r_check = compare_matrices(joint_autocorrelation(problem), state->autocorrelation(), 0.0);
    report.max_autocorrelation_rel_error = std::max(report.max_autocorrelation_rel_error, r_check.rel_frobenius);
  }
  report.weights = compare_states(joint_fit(problem), *state, config.tolerance);
  report.phases = prepared.train.size();
  report.d_fe = prepared.expander.expanded_dim();
  return report;
}

// ---------------------------------------------------------------- sweep

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "d_fe") return SweepAxis::ExpansionSize;
  if (name == "gamma") return SweepAxis::Gamma;
  if (name == "K" || name == "phases") return SweepAxis::Phases;
  throw ValidationError("unknown sweep axis '" + name + "' (expected d_fe, gamma or K)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::ExpansionSize: return "d_fe";
    case SweepAxis::Gamma: return "gamma";
    case SweepAxis::Phases: return "K";
  }
  return "?";
}

nlohmann::json SweepTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& cell : cells) {
    nlohmann::json row = {{"value", cell.value}};
    if (cell.report) {
      row["average_accuracy"] = cell.report->average_accuracy;
      row["forgetting"] = cell.report->forgetting ? nlohmann::json(cell.report->forgetting->signed_value)
                                                  : nlohmann::json(nullptr);
      row["forgetting_magnitude"] = cell.report->forgetting ? nlohmann::json(cell.report->forgetting->magnitude)
                                                            : nlohmann::json(nullptr);
      row["final_accuracy"] = cell.report->final_accuracy;
    } else {
      row["error"] = cell.error;
    }
    rows.push_back(row);
  }
  return {{"schema", "acil.sweep/1"}, {"axis", to_string(axis)}, {"cells", rows}};
}

std::string SweepTable::to_csv() const {
  std::ostringstream os;
  os << "axis,value,average_accuracy,forgetting,forgetting_magnitude,final_accuracy,error\n";
  for (const auto& cell : cells) {
    os << to_string(axis) << ',' << cell.value << ',';
    if (cell.report) {
      const auto& r = *cell.report;
      os << fmt_double(r.average_accuracy) << ','
         << (r.forgetting ? fmt_double(r.forgetting->signed_value) : "") << ','
         << (r.forgetting ? fmt_double(r.forgetting->magnitude) : "") << ',' << fmt_double(r.final_accuracy) << ",\n";
    } else {
      std::string err = cell.error;
      std::replace(err.begin(), err.end(), '"', '\'');
      os << ",,,,\"" << err << "\"\n";
    }
  }
  return os.str();
}

SweepTable run_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<std::string>& values) {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  SweepTable table;
  table.axis = axis;
  for (const auto& v : values) {
    SweepCell cell;
    cell.value = v;
    try {
      auto c = config;
      c.output_dir.clear();
      set_config_value(c, axis == SweepAxis::ExpansionSize ? "d_fe" : axis == SweepAxis::Gamma ? "gamma" : "K", v);
      c.validate();
      cell.report = run_experiment(c);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    table.cells.push_back(std::move(cell));
  }
  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    std::ofstream(config.output_dir / "sweep.json") << table.to_json().dump(2) << '\n';
    std::ofstream(config.output_dir / "sweep.csv") << table.to_csv();
  }
  return table;
}

// ---------------------------------------------------------------- report files

nlohmann::json load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open report '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("report '" + path.string() + "': parse error: " + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != kReportSchema || !j.contains("phases") ||
      !j["phases"].is_array()) {
    throw ValidationError("report '" + path.string() + "': not an " + std::string(kReportSchema) + " document");
  }
  return j;
}

std::string report_to_csv(const nlohmann::json& report) {
  std::ostringstream os;
  os << "phase,classes_seen,accuracy,base_accuracy\n";
  for (const auto& p : report.at("phases")) {
    os << p.at("phase").get<std::size_t>() << ',' << p.at("classes_seen").get<std::size_t>() << ','
       << fmt_double(p.at("accuracy").get<double>()) << ',' << fmt_double(p.at("base_accuracy").get<double>())
       << '\n';
  }
  return os.str();
}

std::string report_summary(const nlohmann::json& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "phase  classes  accuracy%  base_accuracy%\n";
  for (const auto& p : report.at("phases")) {
    os << std::setw(5) << p.at("phase").get<std::size_t>() << "  " << std::setw(7)
       << p.at("classes_seen").get<std::size_t>() << "  " << std::setw(9) << 100.0 * p.at("accuracy").get<double>()
       << "  " << std::setw(14) << 100.0 * p.at("base_accuracy").get<double>() << '\n';
  }
  os << "average incremental accuracy: " << 100.0 * report.at("average_accuracy").get<double>() << "%\n";
  if (const auto& f = report.at("forgetting"); !f.is_null()) {
    os << "forgetting: " << 100.0 * f.at("signed").get<double>() << "% (magnitude "
       << 100.0 * f.at("magnitude").get<double>() << "%)\n";
  }
  if (report.contains("memory")) {
    os << "state bytes: " << report["memory"].at("state_bytes").get<std::size_t>() << '\n';
  }
  return os.str();
}

std::string report_diff(const nlohmann::json& left, const nlohmann::json& right) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "phase  left_acc%  right_acc%  delta%\n";
  const auto& lp = left.at("phases");
  const auto& rp = right.at("phases");
  for (std::size_t i = 0; i < std::max(lp.size(), rp.size()); ++i) {
    os << std::setw(5) << i << "  ";
    const bool has_l = i < lp.size();
    const bool has_r = i < rp.size();
    const double l = has_l ? lp[i].at("accuracy").get<double>() : 0.0;
    const double r = has_r ? rp[i].at("accuracy").get<double>() : 0.0;
    os << std::setw(9) << (has_l ? pct(l) : "-") << "  " << std::setw(10) << (has_r ? pct(r) : "-") << "  ";
    if (has_l && has_r) {
      os << std::setw(6) << 100.0 * (r - l);
    } else {
      os << std::setw(6) << "-";
    }
    os << '\n';
  }
  const double la = left.at("average_accuracy").get<double>();
  const double ra = right.at("average_accuracy").get<double>();
  os << "average  " << std::setw(7) << 100.0 * la << "  " << std::setw(10) << 100.0 * ra << "  " << std::setw(6)
     << 100.0 * (ra - la) << '\n';
  return os.str();
}

}  // namespace acil
