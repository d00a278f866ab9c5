#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acil/analytic.hpp"
#include "acil/dataset.hpp"
#include "acil/features.hpp"
#include "acil/joint.hpp"
#include "acil/metrics.hpp"

namespace acil {

enum class ExtractorKind { Identity, RandomProjection };

/// Parameters of one experiment. Relative paths are resolved against the
/// config file's directory by load_config().
struct ExperimentConfig {
  std::filesystem::path features;
  std::filesystem::path labels;
  std::optional<std::filesystem::path> test_features;
  std::optional<std::filesystem::path> test_labels;

  SplitPlan split;
  double holdout_fraction = 0.2;

  ExtractorKind extractor = ExtractorKind::Identity;
  Eigen::Index extractor_width = 0;  // random_projection only
  std::uint64_t extractor_seed = 0;

  Eigen::Index d_fe = 1024;
  std::uint64_t fe_seed = 0;
  std::optional<double> fe_std;  // default 1/sqrt(d_cnn)

  double gamma = 0.1;
  Eigen::Index chunk_size = 4096;
  double tolerance = 1e-8;
  Eigen::Index verify_cap = 2048;
  std::filesystem::path output_dir;

  void validate() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Parses "key = value" lines ('#' starts a comment). Unknown keys are errors.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one "key = value" override on top of an existing config.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value,
                      const std::filesystem::path& base_dir = {});

/// Loaded corpus cut into phases, plus the frozen feature pipeline.
struct PreparedExperiment {
  std::vector<PhaseDataset> train;
  std::vector<PhaseDataset> test;
  std::unique_ptr<Extractor> extractor;
  FeatureExpander expander;
};

PreparedExperiment prepare_experiment(const ExperimentConfig& config);

struct PhaseRecord {
  std::size_t phase = 0;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  ClassList class_ids;
  double accuracy = 0.0;       // on the union of test sets 0..k
  double base_accuracy = 0.0;  // on the base test set
  double seconds = 0.0;
  std::size_t state_bytes = 0;
};

struct AgendaResult {
  std::vector<PhaseRecord> phases;
  PhaseAccuracyLog log;
  std::optional<AnalyticState> final_state;
};

/// Base training agenda followed by the incremental agenda over already
/// split phases; evaluates after every phase.
AgendaResult run_agenda(const std::vector<PhaseDataset>& train, const std::vector<PhaseDataset>& test,
                        const Extractor& extractor, const FeatureExpander& expander, double gamma,
                        Eigen::Index chunk_size);

struct ExperimentReport {
  nlohmann::json config;
  std::vector<PhaseRecord> phases;
  double average_accuracy = 0.0;
  std::optional<Forgetting> forgetting;
  double final_accuracy = 0.0;
  std::size_t autocorrelation_bytes = 0;
  std::optional<nlohmann::json> verification;

  /// Timing fields are kept under "timing" so the remainder is reproducible.
  [[nodiscard]] nlohmann::json to_json(bool include_timing = true) const;
};

inline constexpr const char* kReportSchema = "acil.report/1";

/// Runs the experiment; when config.output_dir is set, writes report.json
/// and state.bin there.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct RepeatSummary {
  std::vector<std::uint64_t> seeds;
  std::vector<ExperimentReport> runs;
  double mean_average_accuracy = 0.0;
  double std_average_accuracy = 0.0;
  double mean_forgetting = 0.0;
  double std_forgetting = 0.0;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// One run per seed; each seed replaces fe_seed and extractor_seed.
RepeatSummary run_repeated(const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds);

struct VerifyReport {
  Discrepancy weights;
  double max_autocorrelation_rel_error = 0.0;
  std::size_t phases = 0;
  Eigen::Index d_fe = 0;

  [[nodiscard]] bool passed() const { return weights.passed; }
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Runs the recursive agenda and the joint solve on the same expanded
/// features and compares the weights at config.tolerance. Also checks R
/// against a direct inverse after every phase.
VerifyReport verify_experiment(const ExperimentConfig& config);

enum class SweepAxis { ExpansionSize, Gamma, Phases };

SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepCell {
  std::string value;
  std::optional<ExperimentReport> report;
  std::string error;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::Gamma;
  std::vector<SweepCell> cells;

  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] std::string to_csv() const;
};

/// One run per value with everything else fixed. Failing cells record their
/// error and the sweep continues.
SweepTable run_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<std::string>& values);

/// Per-phase CSV (phase, classes_seen, accuracy, base_accuracy) from a report JSON.
std::string report_to_csv(const nlohmann::json& report);
std::string report_summary(const nlohmann::json& report);
std::string report_diff(const nlohmann::json& left, const nlohmann::json& right);

/// Reads and schema-checks a report file; errors name the path.
nlohmann::json load_report(const std::filesystem::path& path);

}  // namespace acil
