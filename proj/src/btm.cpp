#include "topicnet/btm.hpp"

#include <string>

#include <spdlog/spdlog.h>

#include "topicnet/error.hpp"

namespace topicnet {

void BtmConfig::validate() const {
  if (topics < 2) throw ConfigError("btm: need at least two topics");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("btm: alpha and beta must be positive");
  if (iterations < 1 || thinning < 1 || burn_in < 0) throw ConfigError("btm: iterations and thinning must be positive");
  if (burn_in >= iterations) throw ConfigError("btm: burn_in must be smaller than iterations");
}

BtmCounts BtmCounts::zeros(int topics, std::size_t vocabulary_size) {
  BtmCounts c;
  c.topic_biterms = CountVector::Zero(topics);
  c.topic_words = CountMatrix::Zero(topics, static_cast<Eigen::Index>(vocabulary_size));
  c.topic_word_totals = CountVector::Zero(topics);
  return c;
}

BtmCounts BtmCounts::from_counts(CountVector topic_biterms, CountMatrix topic_words) {
  BtmCounts c;
  c.topic_word_totals = topic_words.rowwise().sum();
  c.topic_biterms = std::move(topic_biterms);
  c.topic_words = std::move(topic_words);
  return c;
}

void BtmCounts::add(const Biterm& b, int topic) {
  topic_biterms(topic) += 1;
  topic_words(topic, b.first) += 1;
  topic_words(topic, b.second) += 1;
  topic_word_totals(topic) += 2;
}

void BtmCounts::remove(const Biterm& b, int topic) {
  topic_biterms(topic) -= 1;
  topic_words(topic, b.first) -= 1;
  topic_words(topic, b.second) -= 1;
  topic_word_totals(topic) -= 2;
}

namespace {

// Unnormalized weights into `out`; returns their sum.
double topic_weights(const BtmCounts& c, const Biterm& b, double alpha, double beta, Eigen::VectorXd& out) {
  const double m_beta = static_cast<double>(c.vocabulary_size()) * beta;
  double total = 0.0;
  for (int z = 0; z < c.topics(); ++z) {
    const auto nz = c.topic_biterms(z);
    const auto ni = c.topic_words(z, b.first);
    const auto nj = c.topic_words(z, b.second);
    if (nz < 0 || ni < 0 || nj < 0 || c.topic_word_totals(z) < 0)
      throw NumericError("btm: negative count in topic " + std::to_string(z));
    const double denom = static_cast<double>(c.topic_word_totals(z)) + m_beta;
    const double w = (static_cast<double>(nz) + alpha) * (static_cast<double>(ni) + beta) *
                     (static_cast<double>(nj) + beta) / (denom * denom);
    out(z) = w;
    total += w;
  }
  return total;
}

}  // namespace

Eigen::VectorXd conditional_topic_prob(const BtmCounts& counts, const Biterm& b, const BtmConfig& config) {
  Eigen::VectorXd p(counts.topics());
  const double total = topic_weights(counts, b, config.alpha, config.beta, p);
  return p / total;
}

BtmCounts initialize_counts(std::span<const Biterm> biterms, int topics, std::size_t vocabulary_size, Rng& rng) {
  auto counts = BtmCounts::zeros(topics, vocabulary_size);
  std::uniform_int_distribution<int> pick(0, topics - 1);
  counts.assignment.reserve(biterms.size());
  for (const auto& b : biterms) {
    const int z = pick(rng);
    counts.assignment.push_back(z);
    counts.add(b, z);
  }
  return counts;
}

namespace {

void reassign_with(BtmCounts& counts, const Biterm& b, int& topic, const BtmConfig& config, Rng& rng,
                   Eigen::VectorXd& weights) {
  counts.remove(b, topic);
  const double total = topic_weights(counts, b, config.alpha, config.beta, weights);
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  int z = 0;
  double cumulative = weights(0);
  while (cumulative <= u && z + 1 < counts.topics()) cumulative += weights(++z);
  topic = z;
  counts.add(b, z);
}

}  // namespace

void reassign(BtmCounts& counts, std::span<const Biterm> biterms, std::size_t index, const BtmConfig& config,
              Rng& rng) {
  Eigen::VectorXd weights(counts.topics());
  reassign_with(counts, biterms[index], counts.assignment[index], config, rng, weights);
}

void gibbs_sweep(BtmCounts& counts, std::span<const Biterm> biterms, const BtmConfig& config, Rng& rng) {
  Eigen::VectorXd weights(counts.topics());
  for (std::size_t i = 0; i < biterms.size(); ++i)
    reassign_with(counts, biterms[i], counts.assignment[i], config, rng, weights);
}

void DistributionAccumulator::add(const BtmCounts& counts) {
  const auto topics = counts.topics();
  const auto words = counts.vocabulary_size();
  if (samples_ == 0) {
    phi_sum_ = Eigen::MatrixXd::Zero(topics, words);
    theta_sum_ = Eigen::VectorXd::Zero(topics);
  }
  const double m_beta = static_cast<double>(words) * config_.beta;
  const double biterm_total = static_cast<double>(counts.topic_biterms.sum());
  for (Eigen::Index z = 0; z < topics; ++z) {
    const double denom = static_cast<double>(counts.topic_word_totals(z)) + m_beta;
    phi_sum_.row(z).array() += (counts.topic_words.row(z).cast<double>().array() + config_.beta) / denom;
    theta_sum_(z) += (static_cast<double>(counts.topic_biterms(z)) + config_.alpha) /
                     (biterm_total + static_cast<double>(topics) * config_.alpha);
  }
  ++samples_;
}

TopicWordMatrix DistributionAccumulator::mean() const {
  if (samples_ == 0) throw ConfigError("btm: no retained samples to estimate distributions from");
  const double n = static_cast<double>(samples_);
  return {phi_sum_ / n, theta_sum_ / n};
}

TopicWordMatrix estimate_distributions(std::span<const BtmCounts> samples, const BtmConfig& config) {
  DistributionAccumulator acc(config);
  for (const auto& s : samples) acc.add(s);
  return acc.mean();
}

BtmFit fit_btm(const BitermSet& biterms, std::size_t vocabulary_size, const BtmConfig& config) {
  config.validate();
  if (vocabulary_size == 0) throw DataError("btm: empty vocabulary, nothing to fit");
  if (biterms.total() == 0) throw DataError("btm: corpus yields no biterms");

  Rng rng(config.seed);
  auto counts = initialize_counts(biterms.biterms, config.topics, vocabulary_size, rng);
  DistributionAccumulator acc(config);
  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    gibbs_sweep(counts, biterms.biterms, config, rng);
    if (sweep > config.burn_in && (sweep - config.burn_in) % config.thinning == 0) acc.add(counts);
    if (sweep % 1000 == 0) spdlog::debug("btm: sweep {}/{}", sweep, config.iterations);
  }
  const auto retained = acc.samples();
  return {acc.mean(), std::move(counts), retained};
}

}  // namespace topicnet
