#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "acil/types.hpp"

namespace acil {

/// The learner's entire cross-phase memory: the classifier weights W
/// (d_fe x classes seen), the regularized feature autocorrelation matrix
/// R = (sum_i X_i^T X_i + gamma I)^-1 (d_fe x d_fe), and the registry mapping
/// W's columns to global class ids. No training samples are kept.
///
/// Values are immutable; fit_base/update_phase return new states.
class AnalyticState {
 public:
  /// Validates shapes, registry uniqueness, gamma > 0 and finiteness.
  AnalyticState(Matrix weights, Matrix autocorrelation, ClassList class_registry, double gamma,
                std::size_t phase_count);

  [[nodiscard]] const Matrix& weights() const { return weights_; }
  [[nodiscard]] const Matrix& autocorrelation() const { return autocorrelation_; }
  [[nodiscard]] const ClassList& class_registry() const { return registry_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] std::size_t phase_count() const { return phase_count_; }
  [[nodiscard]] Eigen::Index expanded_dim() const { return autocorrelation_.rows(); }
  [[nodiscard]] Eigen::Index class_count() const { return weights_.cols(); }

 private:
  Matrix weights_;
  Matrix autocorrelation_;
  ClassList registry_;
  double gamma_;
  std::size_t phase_count_;
};

/// One phase's expanded features, targets and the new classes they introduce.
struct PhaseUpdate {
  Matrix features;  // N_k x d_fe
  Matrix onehot;    // N_k x |class_ids|
  ClassList class_ids;
};

struct UpdateOptions {
  /// Rows absorbed per recursive step; bounds the inner solve size.
  Eigen::Index chunk_size = 4096;
};

/// Closed-form ridge fit on the base phase:
///   W = (X^T X + gamma I)^-1 X^T Y via Cholesky solve, R = (X^T X + gamma I)^-1.
AnalyticState fit_base(const Matrix& features, const Matrix& onehot, const ClassList& class_ids, double gamma);

/// Exact recursive update with the current phase only.
///   R_k = R - R X^T (I + X R X^T)^-1 X R
///   W_k = [ W - R_k X^T X W  |  R_k X^T Y ]
/// The result equals the joint ridge solution over every phase seen so far.
/// Rows are absorbed in chunks of options.chunk_size; each chunk is an exact
/// step so chunking does not change the result.
AnalyticState update_phase(const AnalyticState& state, const PhaseUpdate& update,
                           const UpdateOptions& options = {});

struct Prediction {
  std::vector<ClassId> classes;
  Matrix scores;
};

/// scores = X W; each row predicts the class of its largest score, ties going
/// to the lowest column. Softmax is skipped since it preserves the argmax.
Prediction predict(const AnalyticState& state, const Matrix& features);

/// Column index of each row's maximum, lowest index on ties.
std::vector<Eigen::Index> argmax_rows(const Matrix& scores);

/// Binary state image: "ACILSTAT", u32 version, f64 gamma, u32 d_fe,
/// u32 class count, u32 class ids[], u32 phase count, W and R as row-major
/// f64 blocks, then a CRC-64/XZ trailer over everything before it.
std::vector<std::uint8_t> save_state(const AnalyticState& state);
AnalyticState load_state(std::span<const std::uint8_t> bytes);

void save_state_file(const AnalyticState& state, const std::filesystem::path& path);
AnalyticState load_state_file(const std::filesystem::path& path);

/// CRC-64/XZ (ECMA-182 polynomial, reflected, init and xorout all ones).
std::uint64_t crc64(std::span<const std::uint8_t> bytes);

}  // namespace acil
