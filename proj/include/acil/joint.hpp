#pragma once

#include <string>
#include <vector>

#include "acil/analytic.hpp"
#include "acil/types.hpp"

namespace acil {

struct JointPhase {
  Matrix features;
  Matrix onehot;
  ClassList class_ids;
};

/// Every phase's data held at once; the non-recursive baseline.
struct JointProblem {
  std::vector<JointPhase> phases;
  double gamma = 0.1;
};

struct JointSolution {
  Matrix weights;  // d_fe x sum of phase class counts, phase-concatenation order
  ClassList class_registry;
};

/// W = (sum_i X_i^T X_i + gamma I)^-1 [X_0^T Y_0 ... X_k^T Y_k] with a single
/// Cholesky factorization of the accumulated Gram matrix.
JointSolution joint_fit(const JointProblem& problem);

/// Same solution from the literal stacked system: block-diagonal labels with
/// explicit zero padding against the vertically stacked features, solved as
/// one ridge problem through a QR factorization of [X; sqrt(gamma) I].
JointSolution joint_fit_stacked(const JointProblem& problem);

/// (sum_i X_i^T X_i + gamma I)^-1 computed directly.
Matrix joint_autocorrelation(const JointProblem& problem);

struct Discrepancy {
  double max_abs = 0.0;
  double rel_frobenius = 0.0;
  Eigen::Index worst_row = -1;
  ClassId worst_class = 0;
  double tolerance = 0.0;
  bool passed = false;

  [[nodiscard]] std::string summary() const;
};

/// Aligns the recursive state's columns to the joint solution by class id
/// and measures the difference. Throws ValidationError if the class sets differ.
Discrepancy compare_states(const JointSolution& joint, const AnalyticState& recursive, double tolerance);

/// Max-abs and relative Frobenius difference between two equally shaped matrices.
Discrepancy compare_matrices(const Matrix& reference, const Matrix& candidate, double tolerance);

}  // namespace acil
