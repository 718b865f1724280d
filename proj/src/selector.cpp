#include "topicnet/selector.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "topicnet/error.hpp"

namespace topicnet {

std::vector<WordStats> word_stats(const Eigen::MatrixXd& delta) {
  if (delta.rows() < 2) throw ConfigError("select: word statistics need at least two topics");
  std::vector<WordStats> stats;
  stats.reserve(static_cast<std::size_t>(delta.cols()));
  const double topics = static_cast<double>(delta.rows());
  for (Eigen::Index j = 0; j < delta.cols(); ++j) {
    const auto col = delta.col(j);
    const double mean = col.mean();
    const double sd = col.maxCoeff() == col.minCoeff() ? 0.0 : std::sqrt((col.array() - mean).square().sum() / topics);
    stats.push_back({static_cast<WordId>(j), sd / mean, col.maxCoeff()});
  }
  return stats;
}

double upper_percentile_cut(std::span<const double> values, int percent) {
  if (values.empty()) throw ConfigError("select: no values to cut");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // Integer arithmetic keeps the rank exact.
  auto rank = (static_cast<long long>(percent) * static_cast<long long>(sorted.size()) + 99) / 100;
  rank = std::clamp<long long>(rank, 1, static_cast<long long>(sorted.size()));
  return sorted[static_cast<std::size_t>(rank - 1)];
}

std::vector<WordId> select_words(std::span<const WordStats> stats, int percent, SelectionMode mode) {
  std::vector<double> cvs, maxes;
  cvs.reserve(stats.size());
  maxes.reserve(stats.size());
  for (const auto& s : stats) {
    cvs.push_back(s.cv);
    maxes.push_back(s.max_prob);
  }
  const double cv_cut = upper_percentile_cut(cvs, percent);
  const double max_cut = upper_percentile_cut(maxes, percent);

  std::vector<WordId> kept;
  for (const auto& s : stats) {
    const bool by_cv = s.cv >= cv_cut;
    const bool by_max = s.max_prob >= max_cut;
    if (mode == SelectionMode::intersection ? (by_cv && by_max) : (by_cv || by_max)) kept.push_back(s.word);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

MatrixFamily build_family(const Eigen::MatrixXd& delta, std::span<const WordStats> stats, std::span<const int> fractions,
                          SelectionMode mode) {
  MatrixFamily family;
  family.fractions.assign(fractions.begin(), fractions.end());
  std::sort(family.fractions.begin(), family.fractions.end());
  family.fractions.erase(std::unique(family.fractions.begin(), family.fractions.end()), family.fractions.end());
  if (family.fractions.empty()) throw ConfigError("select: no fractions given");

  for (int k : family.fractions) {
    if (k <= 0 || k > 100) throw ConfigError("select: fraction " + std::to_string(k) + "% outside (0, 100]");
    auto words = select_words(stats, k, mode);
    if (words.empty()) throw ConfigError("select: fraction " + std::to_string(k) + "% retains no words");

    Eigen::MatrixXd x(delta.rows(), static_cast<Eigen::Index>(words.size()));
    for (std::size_t c = 0; c < words.size(); ++c)
      x.col(static_cast<Eigen::Index>(c)) = delta.col(words[c]).unaryExpr([](double v) { return std::log(v); });
    family.matrices.emplace(k, std::move(x));
    family.word_sets.emplace(k, std::move(words));
  }
  return family;
}

std::vector<int> fraction_range(int lo, int hi) {
  if (lo > hi) std::swap(lo, hi);
  std::vector<int> out;
  for (int k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

}  // namespace topicnet
