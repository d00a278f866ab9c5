#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately avoid the Cholesky/Woodbury paths used by the library: ridge
// solutions come from an SVD of the augmented system, inverses from LU.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "acil/analytic.hpp"
#include "acil/features.hpp"
#include "acil/joint.hpp"
#include "acil/rng.hpp"
#include "acil/types.hpp"

namespace acil::testing {

inline std::filesystem::path digits_dir() { return ACIL_DATA_DIR "/digits"; }

inline Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * rng::normal(seed, static_cast<std::uint64_t>(i * cols + j));
  }
  return m;
}

/// Brute-force max(0, X W) with explicit loops.
inline Matrix relu_product_loops(const Matrix& x, const Matrix& w) {
  Matrix out = Matrix::Zero(x.rows(), w.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      long double acc = 0.0L;
      for (Eigen::Index k = 0; k < x.cols(); ++k) acc += static_cast<long double>(x(i, k)) * w(k, j);
      out(i, j) = acc > 0 ? static_cast<double>(acc) : 0.0;
    }
  }
  return out;
}

/// Ridge solution of min |Y - X W|^2 + gamma |W|^2 via SVD of [X; sqrt(gamma) I].
inline Matrix oracle_ridge(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double gamma) {
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd a(x.rows() + d, d);
  a << x, std::sqrt(gamma) * Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(x.rows() + d, y.cols());
  b.topRows(y.rows()) = y;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.solve(b);
}

/// (X^T X + gamma I)^-1 via partial-pivot LU.
inline Matrix oracle_inverse(const Eigen::MatrixXd& x, double gamma) {
  Eigen::MatrixXd g = x.transpose() * x;
  g.diagonal().array() += gamma;
  return g.partialPivLu().inverse();
}

/// One phase of a synthetic problem: ReLU random features of Gaussian inputs.
struct SyntheticPhase {
  Matrix features;
  Matrix onehot;
  ClassList class_ids;
};

struct SyntheticProblem {
  std::vector<SyntheticPhase> phases;
  double gamma = 0.1;
  Eigen::Index d_fe = 0;

  [[nodiscard]] Eigen::MatrixXd stacked_features(std::size_t upto) const {
    Eigen::Index rows = 0;
    for (std::size_t k = 0; k <= upto; ++k) rows += phases[k].features.rows();
    Eigen::MatrixXd out(rows, d_fe);
    Eigen::Index r = 0;
    for (std::size_t k = 0; k <= upto; ++k) {
      out.middleRows(r, phases[k].features.rows()) = phases[k].features;
      r += phases[k].features.rows();
    }
    return out;
  }

  /// Block-diagonal label matrix with explicit zero padding.
  [[nodiscard]] Eigen::MatrixXd stacked_labels(std::size_t upto) const {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (std::size_t k = 0; k <= upto; ++k) {
      rows += phases[k].onehot.rows();
      cols += phases[k].onehot.cols();
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (std::size_t k = 0; k <= upto; ++k) {
      out.block(r, c, phases[k].onehot.rows(), phases[k].onehot.cols()) = phases[k].onehot;
      r += phases[k].onehot.rows();
      c += phases[k].onehot.cols();
    }
    return out;
  }

  [[nodiscard]] JointProblem joint(std::size_t upto) const {
    JointProblem p{{}, gamma};
    for (std::size_t k = 0; k <= upto; ++k) {
      p.phases.push_back(JointPhase{phases[k].features, phases[k].onehot, phases[k].class_ids});
    }
    return p;
  }
};

/// sizes[0] is the base phase (must be >= 1). Phases with zero rows get no
/// classes unless `empty_phase_classes` is set.
inline SyntheticProblem make_problem(std::uint64_t seed, Eigen::Index d_fe, const std::vector<Eigen::Index>& sizes,
                                     double gamma, bool empty_phase_classes = false) {
  SyntheticProblem prob;
  prob.gamma = gamma;
  prob.d_fe = d_fe;
  const Eigen::Index d_cnn = std::max<Eigen::Index>(1, d_fe / 4);
  const auto expander = make_expander(d_cnn, d_fe, seed ^ 0xFEULL, default_expansion_std(d_cnn));
  ClassId next_class = 0;
  std::uint64_t counter = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const Eigen::Index n = sizes[k];
    std::size_t classes = 0;
    if (n > 0) {
      classes = 1 + static_cast<std::size_t>(rng::below(seed, counter++, 3));
      classes = std::min<std::size_t>(classes, static_cast<std::size_t>(n));
    } else if (empty_phase_classes) {
      classes = 1;
    }
    SyntheticPhase phase;
    for (std::size_t c = 0; c < classes; ++c) phase.class_ids.push_back(next_class++);
    const Matrix raw = gaussian(n, d_cnn, rng::splitmix64(seed + 7919 * (k + 1)));
    phase.features = expand(expander, raw);
    phase.onehot = Matrix::Zero(n, static_cast<Eigen::Index>(classes));
    for (Eigen::Index i = 0; i < n; ++i) {
      // First rows cover every class, the rest are random.
      const auto c = static_cast<std::size_t>(i) < classes ? static_cast<Eigen::Index>(i)
                                                           : static_cast<Eigen::Index>(rng::below(seed, counter++, classes));
      phase.onehot(i, c) = 1.0;
    }
    prob.phases.push_back(std::move(phase));
  }
  return prob;
}

/// Runs fit_base then update_phase over every phase; optionally records each intermediate state.
inline AnalyticState run_recursive(const SyntheticProblem& prob, Eigen::Index chunk_size = 4096,
                                   std::vector<AnalyticState>* trail = nullptr) {
  AnalyticState state = fit_base(prob.phases[0].features, prob.phases[0].onehot, prob.phases[0].class_ids, prob.gamma);
  if (trail) trail->push_back(state);
  for (std::size_t k = 1; k < prob.phases.size(); ++k) {
    const auto& p = prob.phases[k];
    state = update_phase(state, PhaseUpdate{p.features, p.onehot, p.class_ids}, UpdateOptions{chunk_size});
    if (trail) trail->push_back(state);
  }
  return state;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

inline double rel_frobenius(const Eigen::MatrixXd& reference, const Eigen::MatrixXd& candidate) {
  return (candidate - reference).norm() / reference.norm();
}

/// max |X^T (X W - Y) + gamma W|, the ridge normal-equation residual.
inline double normal_equation_residual(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const Eigen::MatrixXd& w,
                                       double gamma) {
  if (w.size() == 0) return 0.0;
  return (x.transpose() * (x * w - y) + gamma * w).cwiseAbs().maxCoeff();
}

}  // namespace acil::testing
