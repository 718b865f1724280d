#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "topicnet/corpus.hpp"

namespace topicnet {

/// Fraction of `values` that are <= x. Throws std::domain_error on an empty range.
template <typename Scalar>
double ecdf(std::span<const Scalar> values, Scalar x);

/// Eigen overload for row or column expressions.
template <typename Derived>
double ecdf(const Eigen::DenseBase<Derived>& values, typename Derived::Scalar x) {
  using Scalar = typename Derived::Scalar;
  const typename Derived::PlainObject plain = values;
  return ecdf(std::span<const Scalar>(plain.data(), static_cast<std::size_t>(plain.size())), x);
}

struct ScoreConfig {
  std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
  double top_fraction = 0.20;

  void validate() const;
};

struct RankedWord {
  WordId word = 0;  // global vocabulary id
  double score = 0.0;
  double affinity = 0.0;
  bool top = false;
};

/// Scores of every (topic, word) cell of one matrix family member.
struct ScoreTable {
  Eigen::MatrixXd score;     // P x N
  Eigen::MatrixXd affinity;  // exp(-gamma)
  std::vector<WordId> words; // column -> vocabulary id
  std::map<int, std::vector<RankedWord>> top_words;  // topic -> full ranking
};

/// Exclusivity score of cell (i, j):
///   w1/(2 - F_col(delta)) + w2/(2 - F_row(delta)) + w3/(1 + F_col(gamma)) + w4/(1 + F_row(gamma))
/// where F_col ranges over topics for word j and F_row over words for topic i.
double score_cell(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& gamma, Eigen::Index i, Eigen::Index j,
                  const ScoreConfig& config = {});

/// Every cell at once (rank-based, O(PN log PN)); identical to score_cell.
/// Throws ConfigError on shape mismatch or negative gamma.
Eigen::MatrixXd score_matrix(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& gamma, const ScoreConfig& config = {});

/// Number of flagged words for N columns: ceil(top_fraction * N), at least one.
std::size_t top_count(std::size_t words, double top_fraction);

/// Words of topic i by score descending, then affinity descending, then word id.
std::vector<RankedWord> rank_topic_words(const ScoreTable& table, int topic, const ScoreConfig& config = {});

/// Scores, affinities and rankings for every topic. `words` maps columns to
/// vocabulary ids (defaults to 0..N-1 when empty).
ScoreTable score_table(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& gamma, std::vector<WordId> words = {},
                       const ScoreConfig& config = {});

/// Words flagged top for `topic` in every table, ordered by mean score
/// descending (ties by word id). Throws ConfigError for fewer than two tables.
std::vector<WordId> intersect_top_words(std::span<const ScoreTable> tables, int topic);

template <typename Scalar>
double ecdf(std::span<const Scalar> values, Scalar x) {
  if (values.empty()) throw std::domain_error("ecdf of an empty sample");
  const auto below = std::count_if(values.begin(), values.end(), [x](Scalar v) { return v <= x; });
  return static_cast<double>(below) / static_cast<double>(values.size());
}

}  // namespace topicnet
