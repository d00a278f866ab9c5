#pragma once

#include <span>
#include <vector>

#include "acil/types.hpp"

namespace acil {

/// accuracy[k]: phase-k model on the union of test sets of phases 0..k.
/// base_accuracy[k]: phase-k model on the base-phase test set only.
struct PhaseAccuracyLog {
  std::vector<double> accuracy;
  std::vector<double> base_accuracy;
};

struct Forgetting {
  double signed_value = 0.0;  // A_K^base - A_0^base
  double magnitude = 0.0;
};

/// Fraction of exact matches. Throws on empty or unequal-length input.
double phase_accuracy(std::span<const ClassId> predictions, std::span<const ClassId> truths);

/// Mean of accuracy over the K+1 phases.
double average_incremental_accuracy(const PhaseAccuracyLog& log);

/// Requires K >= 1.
Forgetting forgetting_rate(const PhaseAccuracyLog& log);

void validate_log(const PhaseAccuracyLog& log);

}  // namespace acil
