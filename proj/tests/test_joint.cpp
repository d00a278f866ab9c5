#include <gtest/gtest.h>

#include "acil/error.hpp"
#include "acil/joint.hpp"
#include "support/test_support.hpp"

namespace acil {
namespace {

using testing::max_abs_diff;

TEST(JointFit, SinglePhaseEqualsBaseFit) {
  const auto prob = testing::make_problem(21, 16, {40}, 0.1);
  const auto base = fit_base(prob.phases[0].features, prob.phases[0].onehot, prob.phases[0].class_ids, prob.gamma);
  const auto joint = joint_fit(prob.joint(0));
  EXPECT_LE(max_abs_diff(joint.weights, base.weights()), 1e-12);
  EXPECT_EQ(joint.class_registry, base.class_registry());
}

TEST(JointFit, MatchesLiteralStackedSystem) {
  const auto prob = testing::make_problem(22, 6, {10, 10}, 0.5);
  const auto gram = joint_fit(prob.joint(1));
  const auto stacked = joint_fit_stacked(prob.joint(1));
  EXPECT_LE(max_abs_diff(gram.weights, stacked.weights), 1e-10);
  // And a third route: the SVD oracle on explicit zero-padded labels.
  const Matrix oracle = testing::oracle_ridge(prob.stacked_features(1), prob.stacked_labels(1), prob.gamma);
  EXPECT_LE(max_abs_diff(gram.weights, oracle), 1e-10);
}

TEST(JointFit, GramAndStackedRoutesAgreeAcrossSizes) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Eigen::Index d = 4 + static_cast<Eigen::Index>(rng::below(seed, 0, 20));
    const auto prob = testing::make_problem(seed, d, {1 + static_cast<Eigen::Index>(rng::below(seed, 1, 30)), 7, 0, 12},
                                            seed % 3 == 0 ? 1e-3 : 0.3);
    const auto a = joint_fit(prob.joint(3));
    const auto b = joint_fit_stacked(prob.joint(3));
    EXPECT_LE(max_abs_diff(a.weights, b.weights), 1e-10) << "seed " << seed;
  }
}

TEST(JointFit, PermutedPhasesPermuteColumns) {
  const auto prob = testing::make_problem(23, 12, {20, 8, 15}, 0.1);
  auto permuted = prob.joint(2);
  std::swap(permuted.phases[1], permuted.phases[2]);
  const auto a = joint_fit(prob.joint(2));
  const auto b = joint_fit(permuted);
  const auto state = AnalyticState(b.weights, Matrix::Identity(12, 12), b.class_registry, 0.1, 0);
  EXPECT_TRUE(compare_states(a, state, 1e-12).passed);
}

TEST(JointFit, Errors) {
  EXPECT_THROW(joint_fit(JointProblem{{}, 0.1}), ValidationError);
  auto prob = testing::make_problem(24, 6, {5, 5}, 0.1).joint(1);
  auto overlapping = prob;
  overlapping.phases[1].class_ids = overlapping.phases[0].class_ids;
  overlapping.phases[1].onehot = Matrix::Zero(5, static_cast<Eigen::Index>(overlapping.phases[1].class_ids.size()));
  EXPECT_THROW(joint_fit(overlapping), ValidationError);
  auto bad_width = prob;
  bad_width.phases[1].features = Matrix::Ones(5, 7);
  EXPECT_THROW(joint_fit(bad_width), ValidationError);
  prob.gamma = 0.0;
  EXPECT_THROW(joint_fit(prob), ValidationError);
}

TEST(CompareStates, RecursiveAgainstJointRefit) {
  const auto prob = testing::make_problem(25, 32, {50, 9, 20, 1}, 0.1);
  const auto state = testing::run_recursive(prob);
  const auto report = compare_states(joint_fit(prob.joint(3)), state, 1e-8);
  EXPECT_TRUE(report.passed) << report.summary();
}

TEST(CompareStates, LocatesPerturbation) {
  const auto prob = testing::make_problem(26, 16, {30, 10}, 0.1);
  const auto state = testing::run_recursive(prob);
  Matrix w = state.weights();
  w(5, 1) += 1e-3;
  const AnalyticState perturbed(w, state.autocorrelation(), state.class_registry(), state.gamma(), state.phase_count());
  const auto report = compare_states(joint_fit(prob.joint(1)), perturbed, 1e-8);
  EXPECT_FALSE(report.passed);
  EXPECT_EQ(report.worst_row, 5);
  EXPECT_EQ(report.worst_class, state.class_registry()[1]);
  EXPECT_NEAR(report.max_abs, 1e-3, 1e-9);
}

TEST(CompareStates, ClassMismatch) {
  const auto prob = testing::make_problem(27, 8, {10}, 0.1);
  const auto state = testing::run_recursive(prob);
  auto joint = joint_fit(prob.joint(0));
  for (auto& c : joint.class_registry) c += 1000;
  EXPECT_THROW(compare_states(joint, state, 1e-8), ValidationError);
}

}  // namespace
}  // namespace acil
