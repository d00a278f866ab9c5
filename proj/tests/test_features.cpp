#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "acil/dataset.hpp"
#include "acil/error.hpp"
#include "acil/features.hpp"
#include "support/test_support.hpp"

namespace acil {
namespace {

TEST(Expander, ShapesAndBoundaries) {
  const auto big = make_expander(64, 8000, 0, 1.0);
  EXPECT_EQ(big.weights().rows(), 64);
  EXPECT_EQ(big.weights().cols(), 8000);

  const auto square = make_expander(4, 4, 7, 1.0);
  EXPECT_EQ(square.weights().rows(), 4);
  EXPECT_EQ(square.weights().cols(), 4);

  EXPECT_THROW(make_expander(8, 4, 0, 1.0), ValidationError);
  EXPECT_THROW(make_expander(4, 8, 0, 0.0), ValidationError);
}

TEST(Expander, DeterministicAndSeedSensitive) {
  const auto a = make_expander(16, 64, 42, 0.25);
  const auto b = make_expander(16, 64, 42, 0.25);
  EXPECT_EQ(std::memcmp(a.weights().data(), b.weights().data(), sizeof(double) * a.weights().size()), 0);
  const auto c = make_expander(16, 64, 43, 0.25);
  EXPECT_NE(a.weights(), c.weights());
}

TEST(Expander, EntriesFollowConfiguredNormal) {
  const auto e = make_expander(64, 8000, 0, 0.5);
  const auto& w = e.weights();
  const double n = static_cast<double>(w.size());
  const double mean = w.sum() / n;
  const double var = (w.array() - mean).square().sum() / (n - 1);
  // 512000 draws: standard error of the mean ~ 7e-4, of the variance ~ 5e-4.
  EXPECT_NEAR(mean, 0.0, 5e-3);
  EXPECT_NEAR(var, 0.25, 5e-3);
}

TEST(Expand, ZeroInputGivesZero) {
  const auto e = make_expander(3, 9, 1, 1.0);
  EXPECT_EQ(expand(e, Matrix::Zero(5, 3)), Matrix::Zero(5, 9));
}

TEST(Expand, HandCheckedRectifier) {
  Matrix w(2, 2);
  w << 1, -1, 5, 5;
  const FeatureExpander e(w, 0, 1.0);
  Matrix x(1, 2);
  x << 1, 0;
  Matrix expected(1, 2);
  expected << 1, 0;
  EXPECT_EQ(expand(e, x), expected);
}

TEST(Expand, MatchesBruteForceOracle) {
  const auto e = make_expander(8, 16, 11, default_expansion_std(8));
  const Matrix x = testing::gaussian(10, 8, 99);
  const Matrix oracle = testing::relu_product_loops(x, e.weights());
  EXPECT_LE(testing::max_abs_diff(expand(e, x), oracle), 1e-14);
}

TEST(Expand, DimensionMismatch) {
  const auto e = make_expander(3, 9, 1, 1.0);
  EXPECT_THROW(expand(e, Matrix::Zero(2, 4)), ValidationError);
}

TEST(Expand, NonNegativityAndPositiveHomogeneity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index d_cnn = 1 + static_cast<Eigen::Index>(rng::below(seed, 0, 12));
    const Eigen::Index d_fe = d_cnn + static_cast<Eigen::Index>(rng::below(seed, 1, 40));
    const auto e = make_expander(d_cnn, d_fe, seed, default_expansion_std(d_cnn));
    const Matrix x = testing::gaussian(7, d_cnn, seed + 100);
    const Matrix y = expand(e, x);
    EXPECT_GE(y.minCoeff(), 0.0);
    const double a = 0.5 + rng::uniform(seed, 3) * 4.0;
    EXPECT_LE(testing::max_abs_diff(expand(e, a * x), a * y), 1e-12 * (1.0 + y.cwiseAbs().maxCoeff()));
  }
}

TEST(Expand, WidthsAgreeInDistributionNotValues) {
  const Matrix x = testing::gaussian(200, 16, 5);
  const Matrix narrow = expand(make_expander(16, 256, 1, 0.25), x);
  const Matrix wide = expand(make_expander(16, 1024, 1, 0.25), x);
  // Mean of max(0, z) with z ~ N(0, s^2) is s / sqrt(2 pi); both widths should sit near
  // the same value since the row norms of x are shared.
  const double m1 = narrow.mean();
  const double m2 = wide.mean();
  EXPECT_NEAR(m1, m2, 0.1 * m2);
  EXPECT_NE(narrow.leftCols(4), wide.leftCols(4));
}

TEST(Extractors, IdentityComposesWithExpand) {
  const auto e = make_expander(5, 20, 3, 1.0);
  const IdentityExtractor id(5);
  const Matrix raw = testing::gaussian(6, 5, 8);
  EXPECT_EQ(extract_and_expand(id, e, raw), expand(e, raw));
  EXPECT_THROW(extract_and_expand(IdentityExtractor(4), e, testing::gaussian(6, 4, 8)), ValidationError);
}

TEST(Extractors, RandomProjectionIsFrozen) {
  const RandomProjectionExtractor rp(6, 12, 17);
  const auto e = make_expander(12, 48, 2, 0.3);
  const Matrix zero = Matrix::Zero(3, 6);
  const Matrix first = extract_and_expand(rp, e, zero);
  EXPECT_EQ(first, Matrix::Zero(3, 48));
  const Matrix raw = testing::gaussian(3, 6, 1);
  EXPECT_EQ(extract_and_expand(rp, e, raw), extract_and_expand(rp, e, raw));
  EXPECT_EQ(rp.output_dim(), 12);
  EXPECT_GE(rp.extract(raw).minCoeff(), 0.0);
}

TEST(Extractors, DigitsThroughIdentityAndWideExpansion) {
  const auto set = load_sample_set(testing::digits_dir() / "features.bin", testing::digits_dir() / "labels.txt");
  const IdentityExtractor id(set.dim());
  const auto e = make_expander(set.dim(), 1024, 0, default_expansion_std(set.dim()));
  const Matrix x = extract_and_expand(id, e, set.features);
  EXPECT_EQ(x.rows(), 1797);
  EXPECT_EQ(x.cols(), 1024);
  EXPECT_GE(x.minCoeff(), 0.0);
}

}  // namespace
}  // namespace acil
