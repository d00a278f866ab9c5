#include "acil/metrics.hpp"

#include <cmath>
#include <numeric>

#include "acil/error.hpp"

namespace acil {

double phase_accuracy(std::span<const ClassId> predictions, std::span<const ClassId> truths) {
  if (predictions.size() != truths.size()) throw ValidationError("prediction and truth lengths differ");
  if (predictions.empty()) throw ValidationError("accuracy of an empty set is undefined");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) hits += predictions[i] == truths[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

void validate_log(const PhaseAccuracyLog& log) {
  if (log.accuracy.empty()) throw ValidationError("accuracy log is empty");
  if (log.accuracy.size() != log.base_accuracy.size()) {
    throw ValidationError("accuracy and base-accuracy logs differ in length");
  }
  for (const auto* list : {&log.accuracy, &log.base_accuracy}) {
    for (double a : *list) {
      if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("accuracy entries must lie in [0, 1]");
    }
  }
}

double average_incremental_accuracy(const PhaseAccuracyLog& log) {
  validate_log(log);
  return std::accumulate(log.accuracy.begin(), log.accuracy.end(), 0.0) /
         static_cast<double>(log.accuracy.size());
}

Forgetting forgetting_rate(const PhaseAccuracyLog& log) {
  validate_log(log);
  if (log.base_accuracy.size() < 2) throw ValidationError("forgetting needs at least one incremental phase");
  const double f = log.base_accuracy.back() - log.base_accuracy.front();
  return Forgetting{f, std::abs(f)};
}

}  // namespace acil
