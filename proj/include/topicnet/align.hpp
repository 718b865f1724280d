#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "topicnet/oblimin.hpp"

namespace topicnet {

/// Average Euclidean norm of the rows.
template <typename Derived>
typename Derived::Scalar mean_origin_distance(const Eigen::MatrixBase<Derived>& positions) {
  if (positions.rows() == 0) return typename Derived::Scalar(0);
  return positions.rowwise().norm().mean();
}

/// Topic positions A_k across word-set fractions and their aligned forms.
struct PositionFamily {
  std::vector<int> fractions;               // ascending
  std::map<int, Eigen::MatrixXd> A;         // posterior-mean topic positions
  std::map<int, Eigen::MatrixXd> A_star;    // Procrustes-matched to the baseline
  std::map<int, Eigen::MatrixXd> B;         // A_star * R
  Eigen::MatrixXd R;
  int baseline_k = 0;
  double criterion = 0.0;
  double initial_criterion = 0.0;
  std::vector<double> criterion_trace;
  int rotation_iterations = 0;
  bool rotation_converged = false;

  /// Builds a family from per-fraction A matrices; throws ConfigError on an
  /// empty input or inconsistent shapes.
  static PositionFamily from(std::map<int, Eigen::MatrixXd> positions);
};

/// argmax over k of mean_origin_distance(A_k); ties go to the larger k.
int select_baseline(const PositionFamily& family);

/// Orthogonal Procrustes of every A_k onto A_{baseline_k}; the baseline is
/// copied unchanged.
void match_to_baseline(PositionFamily& family);

/// B_k = A*_k * R for every k. Throws NumericError on a dimension mismatch.
void apply_rotation(PositionFamily& family, const Eigen::MatrixXd& R);

struct AlignOptions {
  std::optional<int> baseline_k;  // overrides the automatic choice
  ObliminOptions oblimin;
};

/// select_baseline (or the override), match_to_baseline, oblimin on the
/// baseline, apply_rotation. Throws ConfigError when the override is not in
/// the family or d < 2, NumericError when the baseline is identically zero.
void align_family(PositionFamily& family, const AlignOptions& options = {});

}  // namespace topicnet
