#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "acil/types.hpp"

namespace acil {

/// Feature rows with integer class labels. Build through make_sample_set()
/// so the invariants (matching row counts, finite values, sorted universe)
/// hold.
struct SampleSet {
  Matrix features;
  std::vector<ClassId> labels;
  ClassList class_universe;

  [[nodiscard]] Eigen::Index rows() const { return features.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return features.cols(); }
};

/// One phase of class-incremental training data. Columns of `onehot` follow
/// `class_ids` positionally.
struct PhaseDataset {
  std::size_t phase_index = 0;
  Matrix features;
  Matrix onehot;
  ClassList class_ids;
  std::vector<ClassId> labels;
};

struct Rational {
  std::uint32_t num = 1;
  std::uint32_t den = 2;
};

struct SplitPlan {
  Rational base_fraction{1, 2};
  std::size_t phases = 5;  // K incremental phases after the base phase
  std::uint64_t seed = 0;
  bool strict_even = false;
};

SampleSet make_sample_set(Matrix features, std::vector<ClassId> labels);

/// Reads a feature file (ACILFEAT binary or headerless CSV) and a label file
/// (ACILLABL binary or one integer per line).
SampleSet load_sample_set(const std::filesystem::path& feature_path,
                          const std::filesystem::path& label_path);

Matrix read_feature_file(const std::filesystem::path& path);
std::vector<ClassId> read_label_file(const std::filesystem::path& path);

enum class FeatureDtype : std::uint8_t { Float32 = 1, Float64 = 2 };

void write_feature_file(const std::filesystem::path& path, const Matrix& features,
                        FeatureDtype dtype = FeatureDtype::Float64);
void write_label_file(const std::filesystem::path& path, std::span<const ClassId> labels,
                      bool binary = false);

/// Matrix of {0,1}; row i has its single 1 at the position of labels[i] in class_ids.
Matrix one_hot(std::span<const ClassId> labels, std::span<const ClassId> class_ids);

/// Shuffles the class universe by plan.seed and cuts it into the base group
/// followed by K near-even incremental groups.
std::vector<ClassList> plan_class_groups(const ClassList& class_universe, const SplitPlan& plan);

/// Builds one PhaseDataset per class group, keeping input row order. Groups
/// with no samples in `data` yield empty phases.
std::vector<PhaseDataset> assemble_phases(const SampleSet& data,
                                          const std::vector<ClassList>& groups);

/// Base phase plus K incremental phases; every class must have samples.
std::vector<PhaseDataset> split_phases(const SampleSet& data, const SplitPlan& plan);

/// Throws ValidationError naming the first class shared by two phases.
void validate_disjoint(std::span<const PhaseDataset> phases);

/// Seeded stratified holdout: per class, round(fraction * n) samples go to
/// the test side (capped so at least one stays for training).
std::pair<SampleSet, SampleSet> stratified_holdout(const SampleSet& data, double fraction,
                                                   std::uint64_t seed);

}  // namespace acil
