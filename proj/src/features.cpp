#include "acil/features.hpp"

#include <cmath>

#include "acil/error.hpp"
#include "acil/rng.hpp"

namespace acil {

namespace {

void require_width(const Matrix& x, Eigen::Index expected, const char* stage) {
  if (x.cols() != expected) {
    throw ValidationError(std::string(stage) + ": dimension mismatch, expected " + std::to_string(expected) +
                          " columns but got " + std::to_string(x.cols()));
  }
}

}  // namespace

IdentityExtractor::IdentityExtractor(Eigen::Index dim) : dim_(dim) {
  if (dim < 1) throw ValidationError("identity extractor needs a positive width");
}

Matrix IdentityExtractor::extract(const Matrix& raw) const {
  require_width(raw, dim_, "identity extractor");
  return raw;
}

std::string IdentityExtractor::describe() const { return "identity"; }

RandomProjectionExtractor::RandomProjectionExtractor(Eigen::Index input_dim, Eigen::Index width,
                                                     std::uint64_t seed)
    : seed_(seed) {
  if (input_dim < 1 || width < 1) throw ValidationError("random projection needs positive dimensions");
  projection_ = seeded_normal_matrix(input_dim, width, seed, 1.0 / std::sqrt(static_cast<double>(input_dim)));
}

Matrix RandomProjectionExtractor::extract(const Matrix& raw) const {
  require_width(raw, projection_.rows(), "random projection extractor");
  return (raw * projection_).cwiseMax(0.0);
}

std::string RandomProjectionExtractor::describe() const {
  return "random_projection(" + std::to_string(projection_.cols()) + ", " + std::to_string(seed_) + ")";
}

FeatureExpander::FeatureExpander(Matrix weights, std::uint64_t seed, double stddev)
    : weights_(std::move(weights)), seed_(seed), stddev_(stddev) {
  if (weights_.rows() > weights_.cols()) {
    throw ValidationError("expansion size d_fe=" + std::to_string(weights_.cols()) +
                          " is smaller than d_cnn=" + std::to_string(weights_.rows()));
  }
}

Matrix seeded_normal_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double stddev) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = stddev * rng::normal(seed, static_cast<std::uint64_t>(i * cols + j));
    }
  }
  return m;
}

double default_expansion_std(Eigen::Index d_cnn) { return 1.0 / std::sqrt(static_cast<double>(d_cnn)); }

FeatureExpander make_expander(Eigen::Index d_cnn, Eigen::Index d_fe, std::uint64_t seed, double stddev) {
  if (d_cnn < 1 || d_fe < 1) throw ValidationError("expander dimensions must be positive");
  if (d_fe < d_cnn) {
    throw ValidationError("expansion size d_fe=" + std::to_string(d_fe) + " is smaller than d_cnn=" +
                          std::to_string(d_cnn));
  }
  if (!(stddev > 0.0) || !std::isfinite(stddev)) throw ValidationError("expansion stddev must be positive");
  return FeatureExpander(seeded_normal_matrix(d_cnn, d_fe, seed, stddev), seed, stddev);
}

Matrix expand(const FeatureExpander& expander, const Matrix& x_cnn) {
  require_width(x_cnn, expander.input_dim(), "expand");
  return (x_cnn * expander.weights()).cwiseMax(0.0);
}

Matrix extract_and_expand(const Extractor& extractor, const FeatureExpander& expander, const Matrix& raw) {
  if (extractor.output_dim() != expander.input_dim()) {
    throw ValidationError("extractor width " + std::to_string(extractor.output_dim()) +
                          " does not match expander input " + std::to_string(expander.input_dim()));
  }
  return expand(expander, extractor.extract(raw));
}

}  // namespace acil
