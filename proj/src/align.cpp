#include "topicnet/align.hpp"

#include <string>

#include <spdlog/spdlog.h>

#include "topicnet/error.hpp"
#include "topicnet/procrustes.hpp"

namespace topicnet {

PositionFamily PositionFamily::from(std::map<int, Eigen::MatrixXd> positions) {
  if (positions.empty()) throw ConfigError("align: empty position family");
  PositionFamily family;
  const auto& first = positions.begin()->second;
  for (const auto& [k, a] : positions) {
    if (a.rows() != first.rows() || a.cols() != first.cols())
      throw ConfigError("align: A_" + std::to_string(k) + " shape differs from the rest of the family");
    family.fractions.push_back(k);
  }
  family.A = std::move(positions);
  family.baseline_k = family.fractions.front();
  return family;
}

int select_baseline(const PositionFamily& family) {
  if (family.A.empty()) throw ConfigError("align: empty position family");
  int best_k = family.A.begin()->first;
  double best = -1.0;
  for (const auto& [k, a] : family.A) {
    const double d = mean_origin_distance(a);
    if (d >= best) {  // map order is ascending, so >= prefers the larger k
      best = d;
      best_k = k;
    }
  }
  return best_k;
}

void match_to_baseline(PositionFamily& family) {
  const auto base_it = family.A.find(family.baseline_k);
  if (base_it == family.A.end())
    throw ConfigError("align: baseline " + std::to_string(family.baseline_k) + "% not in family");
  const Eigen::MatrixXd& base = base_it->second;
  family.A_star.clear();
  for (const auto& [k, a] : family.A)
    family.A_star.emplace(k, k == family.baseline_k ? a : procrustes_align(a, base));
}

void apply_rotation(PositionFamily& family, const Eigen::MatrixXd& R) {
  family.B.clear();
  for (const auto& [k, a_star] : family.A_star) {
    if (a_star.cols() != R.rows()) throw NumericError("align: rotation does not match position dimension");
    family.B.emplace(k, a_star * R);
  }
  family.R = R;
}

void align_family(PositionFamily& family, const AlignOptions& options) {
  if (options.baseline_k) {
    if (!family.A.contains(*options.baseline_k))
      throw ConfigError("align: baseline override " + std::to_string(*options.baseline_k) + "% not in family");
    family.baseline_k = *options.baseline_k;
  } else {
    family.baseline_k = select_baseline(family);
  }
  match_to_baseline(family);

  const Eigen::MatrixXd& base = family.A_star.at(family.baseline_k);
  if (base.cols() < 2) throw ConfigError("align: oblique rotation needs at least two dimensions");
  if (base.squaredNorm() == 0.0) throw NumericError("align: baseline topic positions are identically zero");

  const auto rotated = oblimin_rotate(base, options.oblimin);
  if (!rotated.converged) spdlog::warn("align: oblimin rotation did not converge in {} iterations", rotated.iterations);
  family.criterion = rotated.criterion;
  family.initial_criterion = rotated.initial_criterion;
  family.criterion_trace = rotated.trace;
  family.rotation_iterations = rotated.iterations;
  family.rotation_converged = rotated.converged;
  apply_rotation(family, rotated.rotation);
}

}  // namespace topicnet
