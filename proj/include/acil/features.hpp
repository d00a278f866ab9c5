#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "acil/types.hpp"

namespace acil {

/// Backbone stage: maps raw samples to an N x d_cnn feature matrix.
/// Implementations are frozen after construction.
class Extractor {
 public:
  virtual ~Extractor() = default;

  [[nodiscard]] virtual Matrix extract(const Matrix& raw) const = 0;
  [[nodiscard]] virtual Eigen::Index input_dim() const = 0;
  [[nodiscard]] virtual Eigen::Index output_dim() const = 0;
  [[nodiscard]] virtual std::string describe() const = 0;
};

/// Pass-through for precomputed features.
class IdentityExtractor final : public Extractor {
 public:
  explicit IdentityExtractor(Eigen::Index dim);

  [[nodiscard]] Matrix extract(const Matrix& raw) const override;
  [[nodiscard]] Eigen::Index input_dim() const override { return dim_; }
  [[nodiscard]] Eigen::Index output_dim() const override { return dim_; }
  [[nodiscard]] std::string describe() const override;

 private:
  Eigen::Index dim_;
};

/// Frozen seeded projection followed by a rectifier, max(0, raw * P), with
/// P ~ Normal(0, 1/input_dim).
class RandomProjectionExtractor final : public Extractor {
 public:
  RandomProjectionExtractor(Eigen::Index input_dim, Eigen::Index width, std::uint64_t seed);

  [[nodiscard]] Matrix extract(const Matrix& raw) const override;
  [[nodiscard]] Eigen::Index input_dim() const override { return projection_.rows(); }
  [[nodiscard]] Eigen::Index output_dim() const override { return projection_.cols(); }
  [[nodiscard]] std::string describe() const override;

 private:
  Matrix projection_;
  std::uint64_t seed_;
};

/// Frozen random expansion layer: X_fe = max(0, X_cnn * W_fe).
class FeatureExpander {
 public:
  FeatureExpander(Matrix weights, std::uint64_t seed, double stddev);

  [[nodiscard]] const Matrix& weights() const { return weights_; }
  [[nodiscard]] Eigen::Index input_dim() const { return weights_.rows(); }
  [[nodiscard]] Eigen::Index expanded_dim() const { return weights_.cols(); }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] double stddev() const { return stddev_; }

 private:
  Matrix weights_;
  std::uint64_t seed_;
  double stddev_;
};

/// Fills a rows x cols matrix row-major with Normal(0, stddev^2) draws from
/// the counter generator; entry (i, j) uses counter i * cols + j.
Matrix seeded_normal_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double stddev);

/// Default expansion stddev, 1 / sqrt(d_cnn).
double default_expansion_std(Eigen::Index d_cnn);

/// Requires d_cnn <= d_fe and stddev > 0.
FeatureExpander make_expander(Eigen::Index d_cnn, Eigen::Index d_fe, std::uint64_t seed, double stddev);

Matrix expand(const FeatureExpander& expander, const Matrix& x_cnn);

Matrix extract_and_expand(const Extractor& extractor, const FeatureExpander& expander, const Matrix& raw);

}  // namespace acil
