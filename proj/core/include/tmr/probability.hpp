#pragma once

#include <span>
#include <vector>

namespace tmr {

/// Class-probability output of a classifier over its own class set.
struct ProbabilityVector {
  std::vector<int> classes;  // ascending class labels
  std::vector<double> probs;

  /// Probability of `label`; 0 when the label is not in the class set.
  double of(int label) const;
  /// Most probable label; ties go to the lowest label.
  int argmax() const;
  /// Entries non-negative and summing to 1 within `tol`.
  bool valid(double tol = 1e-9) const;
};

/// Sorted distinct labels.
std::vector<int> distinct_classes(std::span<const int> labels);

}  // namespace tmr
