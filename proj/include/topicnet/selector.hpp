#pragma once

#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "topicnet/corpus.hpp"

namespace topicnet {

/// Dispersion of one word's probabilities across topics.
struct WordStats {
  WordId word = 0;
  double cv = 0.0;        // population sd / mean of the column
  double max_prob = 0.0;  // column max
};

enum class SelectionMode { intersection, union_ };

/// Reduced log-probability matrices indexed by retained-word percentage.
struct MatrixFamily {
  std::vector<int> fractions;                       // ascending percents
  std::map<int, Eigen::MatrixXd> matrices;          // topics x selected words, ln(delta)
  std::map<int, std::vector<WordId>> word_sets;     // ascending word ids
};

/// Throws ConfigError for fewer than two topics.
std::vector<WordStats> word_stats(const Eigen::MatrixXd& delta);

/// Cut value for the top `percent`% of `values`: the ceil(percent * n / 100)-th
/// largest entry. Everything at or above it is kept, ties included.
double upper_percentile_cut(std::span<const double> values, int percent);

/// Word ids passing the cv and max-probability cuts for `percent`.
std::vector<WordId> select_words(std::span<const WordStats> stats, int percent,
                                 SelectionMode mode = SelectionMode::intersection);

/// One X_k per percent. Throws ConfigError naming k when a cut keeps no word,
/// or when a percent lies outside (0, 100].
MatrixFamily build_family(const Eigen::MatrixXd& delta, std::span<const WordStats> stats, std::span<const int> fractions,
                          SelectionMode mode = SelectionMode::intersection);

/// Inclusive percent range lo..hi with unit step.
std::vector<int> fraction_range(int lo, int hi);

}  // namespace topicnet
