#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "topicnet/corpus.hpp"
#include "topicnet/rng.hpp"

namespace topicnet {

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct BtmConfig {
  int topics = 20;
  double alpha = 3.0;
  double beta = 0.01;
  int iterations = 70000;  // total sweeps, burn-in included
  int burn_in = 20000;
  int thinning = 100;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// Collapsed-sampler sufficient statistics.
///
/// `topic_word_totals[z]` caches the row sum of `topic_words`; under a
/// consistent assignment it equals `2 * topic_biterms[z]`.
struct BtmCounts {
  CountVector topic_biterms;    // n_z, length K
  CountMatrix topic_words;      // n_{w|z}, K x M
  CountVector topic_word_totals;
  std::vector<int> assignment;  // topic of each biterm

  static BtmCounts zeros(int topics, std::size_t vocabulary_size);

  /// Builds counts from explicit n_z and n_{w|z}; totals are recomputed.
  static BtmCounts from_counts(CountVector topic_biterms, CountMatrix topic_words);

  int topics() const noexcept { return static_cast<int>(topic_biterms.size()); }
  Eigen::Index vocabulary_size() const noexcept { return topic_words.cols(); }

  void add(const Biterm& b, int topic);
  void remove(const Biterm& b, int topic);
};

/// Row-stochastic topic-word matrix (topics x words) and topic proportions.
struct TopicWordMatrix {
  Eigen::MatrixXd delta;
  Eigen::VectorXd theta;
};

/// p(z | z_{-b}, B) for biterm `b`; `counts` must already exclude b.
/// Throws NumericError on negative counts.
Eigen::VectorXd conditional_topic_prob(const BtmCounts& counts, const Biterm& b, const BtmConfig& config);

/// Uniform-random initial topic for every biterm.
BtmCounts initialize_counts(std::span<const Biterm> biterms, int topics, std::size_t vocabulary_size, Rng& rng);

/// Resamples the topic of biterm `index` (remove, draw, add back).
void reassign(BtmCounts& counts, std::span<const Biterm> biterms, std::size_t index, const BtmConfig& config, Rng& rng);

/// One pass of `reassign` over every biterm in order.
void gibbs_sweep(BtmCounts& counts, std::span<const Biterm> biterms, const BtmConfig& config, Rng& rng);

/// Running mean of the per-sample estimators
///   phi_{w|z} = (n_{w|z} + beta) / (sum_w n_{w|z} + M beta)
///   theta_z   = (n_z + alpha) / (|B| + K alpha)
class DistributionAccumulator {
 public:
  explicit DistributionAccumulator(const BtmConfig& config) : config_(config) {}
  void add(const BtmCounts& counts);
  std::size_t samples() const noexcept { return samples_; }
  /// Throws ConfigError if no sample was added.
  TopicWordMatrix mean() const;

 private:
  BtmConfig config_;
  Eigen::MatrixXd phi_sum_;
  Eigen::VectorXd theta_sum_;
  std::size_t samples_ = 0;
};

TopicWordMatrix estimate_distributions(std::span<const BtmCounts> samples, const BtmConfig& config);

struct BtmFit {
  TopicWordMatrix distributions;
  BtmCounts final_counts;
  std::size_t retained_samples = 0;
};

/// Full sampler run: random init, `iterations` sweeps, averaging the sweeps
/// t > burn_in with (t - burn_in) % thinning == 0 (t counted from 1).
/// Throws DataError for an empty vocabulary or biterm set.
BtmFit fit_btm(const BitermSet& biterms, std::size_t vocabulary_size, const BtmConfig& config);

}  // namespace topicnet
