#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "acil/analytic.hpp"
#include "acil/dataset.hpp"
#include "acil/error.hpp"
#include "acil/experiment.hpp"
#include "acil/features.hpp"
#include "acil/joint.hpp"
#include "acil/metrics.hpp"

namespace py = pybind11;

namespace {

py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

acil::JointProblem make_problem(const std::vector<std::tuple<acil::Matrix, acil::Matrix, acil::ClassList>>& phases,
                                double gamma) {
  acil::JointProblem problem{{}, gamma};
  for (const auto& [x, y, ids] : phases) problem.phases.push_back(acil::JointPhase{x, y, ids});
  return problem;
}

py::dict discrepancy_dict(const acil::Discrepancy& d) {
  py::dict out;
  out["passed"] = d.passed;
  out["max_abs"] = d.max_abs;
  out["rel_frobenius"] = d.rel_frobenius;
  out["tolerance"] = d.tolerance;
  out["worst_row"] = d.worst_row;
  out["worst_class"] = d.worst_class;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = R"pbdoc(
    Exact recursive ridge-regression classifier for class-incremental learning.

    The learner keeps only the weight matrix and the regularized feature
    autocorrelation matrix between phases; each update reproduces the joint
    ridge solution over all phases seen so far.
  )pbdoc";

  auto validation = py::register_exception<acil::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<acil::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  (void)validation;

  py::class_<acil::AnalyticState>(m, "AnalyticState")
      .def_property_readonly("weights", &acil::AnalyticState::weights)
      .def_property_readonly("autocorrelation", &acil::AnalyticState::autocorrelation)
      .def_property_readonly("class_registry", &acil::AnalyticState::class_registry)
      .def_property_readonly("gamma", &acil::AnalyticState::gamma)
      .def_property_readonly("phase_count", &acil::AnalyticState::phase_count)
      .def("__repr__", [](const acil::AnalyticState& s) {
        return "<AnalyticState d_fe=" + std::to_string(s.expanded_dim()) +
               " classes=" + std::to_string(s.class_count()) + " phases=" + std::to_string(s.phase_count()) + ">";
      });

  py::class_<acil::FeatureExpander>(m, "FeatureExpander")
      .def_property_readonly("weights", &acil::FeatureExpander::weights)
      .def_property_readonly("seed", &acil::FeatureExpander::seed)
      .def_property_readonly("stddev", &acil::FeatureExpander::stddev)
      .def_property_readonly("d_cnn", &acil::FeatureExpander::input_dim)
      .def_property_readonly("d_fe", &acil::FeatureExpander::expanded_dim);

  m.def(
      "make_expander",
      [](Eigen::Index d_cnn, Eigen::Index d_fe, std::uint64_t seed, std::optional<double> stddev) {
        return acil::make_expander(d_cnn, d_fe, seed, stddev.value_or(acil::default_expansion_std(d_cnn)));
      },
      py::arg("d_cnn"), py::arg("d_fe"), py::arg("seed") = 0, py::arg("std") = py::none(),
      "Frozen seeded Normal(0, std^2) expansion matrix; std defaults to 1/sqrt(d_cnn).");
  m.def("expand", &acil::expand, py::arg("expander"), py::arg("x_cnn"), "max(0, X W_fe)");

  m.def("one_hot", [](const std::vector<acil::ClassId>& labels, const acil::ClassList& ids) {
    return acil::one_hot(labels, ids);
  }, py::arg("labels"), py::arg("class_ids"));

  m.def("fit_base", &acil::fit_base, py::arg("features"), py::arg("onehot"), py::arg("class_ids"),
        py::arg("gamma") = 0.1);
  m.def(
      "update_phase",
      [](const acil::AnalyticState& state, const acil::Matrix& x, const acil::Matrix& y, const acil::ClassList& ids,
         Eigen::Index chunk_size) {
        return acil::update_phase(state, acil::PhaseUpdate{x, y, ids}, acil::UpdateOptions{chunk_size});
      },
      py::arg("state"), py::arg("features"), py::arg("onehot"), py::arg("class_ids"), py::arg("chunk_size") = 4096);
  m.def(
      "predict",
      [](const acil::AnalyticState& state, const acil::Matrix& x) {
        auto p = acil::predict(state, x);
        return py::make_tuple(p.classes, p.scores);
      },
      py::arg("state"), py::arg("features"), "Returns (class ids, score matrix).");

  m.def("save_state", [](const acil::AnalyticState& s) {
    const auto bytes = acil::save_state(s);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def("load_state", [](const py::bytes& b) {
    const std::string raw = b;
    return acil::load_state(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(raw.data()),
                                                          raw.size()));
  });

  m.def(
      "joint_fit",
      [](const std::vector<std::tuple<acil::Matrix, acil::Matrix, acil::ClassList>>& phases, double gamma) {
        auto sol = acil::joint_fit(make_problem(phases, gamma));
        return py::make_tuple(sol.weights, sol.class_registry);
      },
      py::arg("phases"), py::arg("gamma"), "phases: list of (features, onehot, class_ids). Returns (W, class ids).");
  m.def(
      "compare_states",
      [](const acil::Matrix& joint_w, const acil::ClassList& joint_ids, const acil::AnalyticState& state,
         double tol) { return discrepancy_dict(acil::compare_states({joint_w, joint_ids}, state, tol)); },
      py::arg("joint_weights"), py::arg("joint_class_ids"), py::arg("state"), py::arg("tol") = 1e-8);

  m.def("phase_accuracy", [](const std::vector<acil::ClassId>& p, const std::vector<acil::ClassId>& t) {
    return acil::phase_accuracy(p, t);
  });
  m.def("average_incremental_accuracy", [](std::vector<double> acc, std::vector<double> base) {
    return acil::average_incremental_accuracy({std::move(acc), std::move(base)});
  }, py::arg("accuracy"), py::arg("base_accuracy"));
  m.def("forgetting_rate", [](std::vector<double> acc, std::vector<double> base) {
    const auto f = acil::forgetting_rate({std::move(acc), std::move(base)});
    return py::make_tuple(f.signed_value, f.magnitude);
  }, py::arg("accuracy"), py::arg("base_accuracy"), "Returns (signed, magnitude).");

  m.def(
      "run_experiment",
      [](const std::filesystem::path& config_path, const std::vector<std::string>& overrides) {
        auto config = acil::load_config(config_path);
        for (const auto& kv : overrides) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw acil::ValidationError("override must be key=value");
          acil::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        return json_to_py(acil::run_experiment(config).to_json());
      },
      py::arg("config_path"), py::arg("overrides") = std::vector<std::string>{},
      "Runs the configured experiment and returns the report as a dict.");
  m.def(
      "verify_experiment",
      [](const std::filesystem::path& config_path, std::optional<double> tol) {
        auto config = acil::load_config(config_path);
        if (tol) config.tolerance = *tol;
        return json_to_py(acil::verify_experiment(config).to_json());
      },
      py::arg("config_path"), py::arg("tol") = py::none());

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
