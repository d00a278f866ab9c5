// acil: command-line harness for analytic class-incremental experiments.
//
//   acil run -c config [--verify] [--repeat n] [--seeds s1,s2,...] [--set key=value]...
//   acil verify -c config [--tol 1e-8]
//   acil sweep -c config --axis {d_fe|gamma|K} --values v1,v2,...
//   acil report report.json [other.json] [--csv out.csv]
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure,
// 4 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "acil/error.hpp"
#include "acil/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string output_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config, "Experiment config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set", args.overrides, "Override a config entry, key=value");
  cmd->add_option("-o,--output", args.output_dir, "Output directory (overrides output_dir)");
}

acil::ExperimentConfig load(const CommonArgs& args) {
  auto config = acil::load_config(args.config);
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw acil::ValidationError("--set expects key=value, got '" + kv + "'");
    acil::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.output_dir.empty()) config.output_dir = args.output_dir;
  config.validate();
  return config;
}

void apply_thread_cap() {
  if (const char* env = std::getenv("ACIL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic class-incremental learning: exact recursive ridge classifier experiments"};
  app.require_subcommand(1);

  CommonArgs run_args;
  bool run_verify = false;
  int repeat = 0;
  std::vector<std::uint64_t> seeds;
  auto* run = app.add_subcommand("run", "Base agenda then K incremental phases; writes report.json and state.bin");
  add_common(run, run_args);
  run->add_flag("--verify", run_verify, "Also check against the joint solution and embed the result");
  run->add_option("--repeat", repeat, "Number of repeated runs (seeds fe_seed, fe_seed+1, ...)");
  run->add_option("--seeds", seeds, "Explicit seeds for repeated runs")->delimiter(',');

  CommonArgs verify_args;
  std::optional<double> tol;
  auto* verify = app.add_subcommand("verify", "Compare the recursive solution against the joint solve");
  add_common(verify, verify_args);
  verify->add_option("--tol", tol, "Max-abs tolerance on W (default from config, 1e-8)");

  CommonArgs sweep_args;
  std::string axis;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "One run per value along an axis; aggregates Abar and F");
  add_common(sweep, sweep_args);
  sweep->add_option("--axis", axis, "d_fe, gamma or K")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

  std::vector<std::string> report_paths;
  std::string csv_out;
  auto* report = app.add_subcommand("report", "Summarize one report, or diff two");
  report->add_option("paths", report_paths, "report.json [other.json]")->required()->expected(1, 2);
  report->add_option("--csv", csv_out, "Write per-phase CSV for plotting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every other usage error is a validation error.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }
  apply_thread_cap();

  try {
    if (*run) {
      auto config = load(run_args);
      if (repeat > 0 || !seeds.empty()) {
        if (seeds.empty()) {
          for (int i = 0; i < repeat; ++i) seeds.push_back(config.fe_seed + static_cast<std::uint64_t>(i));
        }
        const auto summary = acil::run_repeated(config, seeds);
        const auto j = summary.to_json();
        if (!config.output_dir.empty()) std::ofstream(config.output_dir / "repeat.json") << j.dump(2) << '\n';
        std::cout << j.dump(2) << '\n';
        return 0;
      }
      auto result = acil::run_experiment(config);
      if (run_verify) {
        const auto v = acil::verify_experiment(config);
        result.verification = v.to_json();
        if (!config.output_dir.empty()) {
          std::ofstream(config.output_dir / "report.json") << result.to_json().dump(2) << '\n';
        }
        std::cout << acil::report_summary(result.to_json());
        std::cout << "verification: " << v.weights.summary() << '\n';
        return v.passed() ? 0 : kExitVerification;
      }
      std::cout << acil::report_summary(result.to_json());
      return 0;
    }
    if (*verify) {
      auto config = load(verify_args);
      if (tol) config.tolerance = *tol;
      const auto v = acil::verify_experiment(config);
      std::cout << v.to_json().dump(2) << '\n';
      std::cerr << "verification: " << v.weights.summary() << '\n';
      return v.passed() ? 0 : kExitVerification;
    }
    if (*sweep) {
      const auto config = load(sweep_args);
      const auto table = acil::run_sweep(config, acil::parse_sweep_axis(axis), values);
      std::cout << table.to_csv();
      return 0;
    }
    if (*report) {
      const auto left = acil::load_report(report_paths.front());
      if (report_paths.size() == 2) {
        std::cout << acil::report_diff(left, acil::load_report(report_paths.back()));
      } else {
        std::cout << acil::report_summary(left);
      }
      if (!csv_out.empty()) {
        std::ofstream out(csv_out);
        if (!out) throw acil::ValidationError("cannot write '" + csv_out + "'");
        out << acil::report_to_csv(left);
      }
      return 0;
    }
  } catch (const acil::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const acil::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const acil::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
