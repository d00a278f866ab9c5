#include "acil/joint.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "acil/error.hpp"

namespace acil {

namespace {

using DenseMatrix = Eigen::MatrixXd;

Eigen::Index validate(const JointProblem& problem) {
  if (problem.phases.empty()) throw ValidationError("joint problem needs at least one phase");
  if (!(problem.gamma > 0.0)) throw ValidationError("gamma must be positive");
  const Eigen::Index d = problem.phases.front().features.cols();
  if (d < 1) throw ValidationError("joint problem features have no columns");
  std::set<ClassId> seen;
  for (const auto& p : problem.phases) {
    if (p.features.cols() != d) throw ValidationError("phases disagree on d_fe");
    if (p.onehot.rows() != p.features.rows() ||
        p.onehot.cols() != static_cast<Eigen::Index>(p.class_ids.size())) {
      throw ValidationError("phase label shape does not match its features and class ids");
    }
    for (auto c : p.class_ids) {
      if (!seen.insert(c).second) throw ValidationError("class " + std::to_string(c) + " appears in two phases");
    }
  }
  return d;
}

Eigen::Index total_classes(const JointProblem& problem) {
  Eigen::Index total = 0;
  for (const auto& p : problem.phases) total += static_cast<Eigen::Index>(p.class_ids.size());
  return total;
}

ClassList concatenated_registry(const JointProblem& problem) {
  ClassList out;
  for (const auto& p : problem.phases) out.insert(out.end(), p.class_ids.begin(), p.class_ids.end());
  return out;
}

Eigen::LLT<DenseMatrix> factor_gram(const JointProblem& problem, Eigen::Index d) {
  DenseMatrix gram = DenseMatrix::Zero(d, d);
  for (const auto& p : problem.phases) gram.noalias() += p.features.transpose() * p.features;
  gram.diagonal().array() += problem.gamma;
  Eigen::LLT<DenseMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("joint Gram matrix factorization failed");
  return llt;
}

}  // namespace

JointSolution joint_fit(const JointProblem& problem) {
  const Eigen::Index d = validate(problem);
  const auto llt = factor_gram(problem, d);

  DenseMatrix rhs(d, total_classes(problem));
  Eigen::Index col = 0;
  for (const auto& p : problem.phases) {
    const auto c = static_cast<Eigen::Index>(p.class_ids.size());
    rhs.middleCols(col, c) = p.features.transpose() * p.onehot;
    col += c;
  }
  return JointSolution{llt.solve(rhs), concatenated_registry(problem)};
}

JointSolution joint_fit_stacked(const JointProblem& problem) {
  const Eigen::Index d = validate(problem);
  Eigen::Index rows = 0;
  for (const auto& p : problem.phases) rows += p.features.rows();
  const Eigen::Index classes = total_classes(problem);

  // [X_0; ...; X_k; sqrt(gamma) I] W ~ [blockdiag(Y_0..Y_k); 0]
  DenseMatrix a = DenseMatrix::Zero(rows + d, d);
  DenseMatrix b = DenseMatrix::Zero(rows + d, classes);
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  for (const auto& p : problem.phases) {
    a.middleRows(r, p.features.rows()) = p.features;
    b.block(r, c, p.onehot.rows(), p.onehot.cols()) = p.onehot;
    r += p.features.rows();
    c += p.onehot.cols();
  }
  a.bottomRows(d) = std::sqrt(problem.gamma) * DenseMatrix::Identity(d, d);
  return JointSolution{a.colPivHouseholderQr().solve(b), concatenated_registry(problem)};
}

Matrix joint_autocorrelation(const JointProblem& problem) {
  const Eigen::Index d = validate(problem);
  return factor_gram(problem, d).solve(DenseMatrix::Identity(d, d));
}

std::string Discrepancy::summary() const {
  std::ostringstream os;
  os << (passed ? "PASS" : "FAIL") << " max_abs=" << max_abs << " rel_frobenius=" << rel_frobenius
     << " tol=" << tolerance;
  if (worst_row >= 0) os << " worst_at=(row " << worst_row << ", class " << worst_class << ")";
  return os.str();
}

Discrepancy compare_matrices(const Matrix& reference, const Matrix& candidate, double tolerance) {
  if (reference.rows() != candidate.rows() || reference.cols() != candidate.cols()) {
    throw ValidationError("compared matrices differ in shape");
  }
  Discrepancy out;
  out.tolerance = tolerance;
  if (reference.size() > 0) {
    const Matrix diff = (candidate - reference).cwiseAbs();
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    out.max_abs = diff.maxCoeff(&i, &j);
    out.worst_row = i;
    out.worst_class = static_cast<ClassId>(j);
    const double ref_norm = reference.norm();
    out.rel_frobenius = ref_norm > 0.0 ? diff.norm() / ref_norm : diff.norm();
  }
  out.passed = out.max_abs <= tolerance;
  return out;
}

Discrepancy compare_states(const JointSolution& joint, const AnalyticState& recursive, double tolerance) {
  const auto& reg = recursive.class_registry();
  if (std::set<ClassId>(reg.begin(), reg.end()) !=
          std::set<ClassId>(joint.class_registry.begin(), joint.class_registry.end()) ||
      reg.size() != joint.class_registry.size()) {
    throw ValidationError("class-set mismatch between joint solution and recursive state");
  }
  if (joint.weights.rows() != recursive.expanded_dim()) {
    throw ValidationError("joint solution and recursive state disagree on d_fe");
  }
  std::map<ClassId, Eigen::Index> column;
  for (std::size_t j = 0; j < reg.size(); ++j) column.emplace(reg[j], static_cast<Eigen::Index>(j));
  Matrix aligned(recursive.expanded_dim(), recursive.class_count());
  for (std::size_t j = 0; j < joint.class_registry.size(); ++j) {
    aligned.col(static_cast<Eigen::Index>(j)) = recursive.weights().col(column.at(joint.class_registry[j]));
  }
  auto out = compare_matrices(joint.weights, aligned, tolerance);
  if (out.worst_row >= 0) out.worst_class = joint.class_registry[out.worst_class];
  return out;
}

}  // namespace acil
