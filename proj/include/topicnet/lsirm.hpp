#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topicnet/rng.hpp"

namespace topicnet {

/// Gaussian latent space item response model
///
///   x_ij = beta_i + theta_j - ||v_i - u_j|| + eps_ij,  eps_ij ~ N(0, sigma2)
///
/// with beta_i ~ N(0, 1), theta_j ~ N(0, sigma_theta2), v_i, u_j ~ N(0, I_d),
/// sigma2 ~ IG(a, b) and sigma_theta2 ~ IG(a_theta, b_theta). Rows of X are
/// topics (P), columns are words (N).
struct LsirmConfig {
  int dim = 2;
  int iterations = 55000;  // total sweeps, burn-in included
  int burn_in = 5000;
  int thinning = 5;
  double jump_beta = 0.28;
  double jump_theta = 1.0;
  double jump_latent = 0.06;
  double prior_a = 0.001;
  double prior_b = 0.001;
  double prior_a_theta = 0.001;
  double prior_b_theta = 0.001;
  std::uint64_t seed = 0;
  /// Keep every retained sample in memory. When off, the chain is replayed
  /// from its seed to compute matched position means.
  bool keep_samples = false;

  void validate() const;
};

struct LsirmState {
  Eigen::VectorXd beta;   // P
  Eigen::VectorXd theta;  // N
  Eigen::MatrixXd V;      // P x d topic positions
  Eigen::MatrixXd U;      // N x d word positions
  double sigma2 = 1.0;
  double sigma_theta2 = 1.0;

  /// beta = theta = 0, positions drawn from N(0, I), variances at 1.
  static LsirmState initial(Eigen::Index topics, Eigen::Index words, int dim, Rng& rng);
};

struct AcceptanceRates {
  double beta = 0.0;
  double theta = 0.0;
  double topic_positions = 0.0;
  double word_positions = 0.0;
};

/// Per-block proposal bookkeeping for one chain.
struct AcceptanceTally {
  std::int64_t beta_accepted = 0, beta_proposed = 0;
  std::int64_t theta_accepted = 0, theta_proposed = 0;
  std::int64_t v_accepted = 0, v_proposed = 0;
  std::int64_t u_accepted = 0, u_proposed = 0;

  AcceptanceRates rates() const;
};

/// Throws DataError on non-finite X, ConfigError on mismatched dimensions.
double log_likelihood(const Eigen::MatrixXd& x, const LsirmState& state);

/// Log-likelihood plus every log-prior, normalizing constants included.
/// Throws NumericError when a variance is not positive.
double log_posterior(const Eigen::MatrixXd& x, const LsirmState& state, const LsirmConfig& config);

/// Metropolis accept for a symmetric proposal: P(accept) = min(1, exp(log_ratio)).
bool metropolis_accept(double log_ratio, Rng& rng);

/// sigma2 | rest ~ IG(a + PN/2, b + SSR/2).
double draw_sigma2(const Eigen::MatrixXd& x, const LsirmState& state, const LsirmConfig& config, Rng& rng);
/// sigma_theta2 | theta ~ IG(a_theta + N/2, b_theta + sum(theta^2)/2).
double draw_sigma_theta2(const LsirmState& state, const LsirmConfig& config, Rng& rng);

/// One sweep: random-walk Metropolis for each beta_i, theta_j, v_i, u_j (in
/// that block order), then Gibbs draws for sigma2 and sigma_theta2.
void mcmc_step(const Eigen::MatrixXd& x, LsirmState& state, const LsirmConfig& config, Rng& rng,
               AcceptanceTally* tally = nullptr);

struct PositionSample {
  Eigen::MatrixXd V;
  Eigen::MatrixXd U;
};

struct ChainMatch {
  std::vector<PositionSample> samples;
  std::size_t reference = 0;
  bool skipped = false;  // reference V was all zero
};

/// Aligns every sample onto the highest-log-posterior one. The orthogonal
/// transform is fitted on the V block and applied to V and U alike.
/// Throws ConfigError for an empty list or mismatched log-posterior count.
ChainMatch within_chain_procrustes(std::vector<PositionSample> samples, std::span<const double> log_posteriors);

struct LsirmPosterior {
  std::vector<LsirmState> samples;  // matched; filled only with keep_samples
  std::vector<std::int64_t> sample_iterations;
  std::vector<double> sample_log_posterior;
  std::size_t reference_sample = 0;
  LsirmState mean;        // posterior means, positions after matching
  Eigen::MatrixXd A;      // P x d mean topic positions
  Eigen::MatrixXd gamma;  // P x N distances between mean positions
  AcceptanceRates acceptance;
  std::size_t retained = 0;
  bool alignment_skipped = false;
  std::vector<std::string> warnings;
};

/// Runs the configured schedule (sweep t retained when t > burn_in and
/// (t - burn_in) % thinning == 0), matches positions and summarizes.
/// Throws ConfigError when P < 2 or N < 2.
LsirmPosterior fit_lsirm(const Eigen::MatrixXd& x, const LsirmConfig& config);

}  // namespace topicnet
