#include "topicnet/lsirm.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "topicnet/error.hpp"
#include "topicnet/procrustes.hpp"

namespace topicnet {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double normal_logpdf(double x, double variance) { return -0.5 * (kLog2Pi + std::log(variance)) - x * x / (2.0 * variance); }

double inverse_gamma_logpdf(double x, double shape, double scale) {
  return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

double draw_inverse_gamma(double shape, double scale, Rng& rng) {
  return scale / std::gamma_distribution<double>(shape, 1.0)(rng);
}

void check_shapes(const Eigen::MatrixXd& x, const LsirmState& s) {
  if (s.beta.size() != x.rows() || s.theta.size() != x.cols() || s.V.rows() != x.rows() || s.U.rows() != x.cols() ||
      s.V.cols() != s.U.cols())
    throw ConfigError("lsirm: state dimensions do not match the data matrix");
}

Eigen::MatrixXd distances(const LsirmState& s) { return pairwise_distances(s.V, s.U); }

double sum_squared_residuals(const Eigen::MatrixXd& x, const LsirmState& s) {
  const Eigen::MatrixXd mean = (s.beta.replicate(1, x.cols()) + s.theta.transpose().replicate(x.rows(), 1)) - distances(s);
  return (x - mean).squaredNorm();
}

}  // namespace

void LsirmConfig::validate() const {
  if (dim < 1) throw ConfigError("lsirm: latent dimension must be positive");
  if (iterations < 1 || thinning < 1 || burn_in < 0) throw ConfigError("lsirm: iterations and thinning must be positive");
  if (burn_in >= iterations) throw ConfigError("lsirm: burn_in must be smaller than iterations");
  if (!(jump_beta > 0) || !(jump_theta > 0) || !(jump_latent > 0)) throw ConfigError("lsirm: jump scales must be positive");
  if (!(prior_a > 0) || !(prior_b > 0) || !(prior_a_theta > 0) || !(prior_b_theta > 0))
    throw ConfigError("lsirm: inverse-gamma hyperparameters must be positive");
}

LsirmState LsirmState::initial(Eigen::Index topics, Eigen::Index words, int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  LsirmState s;
  s.beta = Eigen::VectorXd::Zero(topics);
  s.theta = Eigen::VectorXd::Zero(words);
  s.V.resize(topics, dim);
  s.U.resize(words, dim);
  for (Eigen::Index i = 0; i < s.V.size(); ++i) s.V.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < s.U.size(); ++i) s.U.data()[i] = normal(rng);
  return s;
}

AcceptanceRates AcceptanceTally::rates() const {
  auto rate = [](std::int64_t a, std::int64_t n) { return n == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(n); };
  return {rate(beta_accepted, beta_proposed), rate(theta_accepted, theta_proposed), rate(v_accepted, v_proposed),
          rate(u_accepted, u_proposed)};
}

double log_likelihood(const Eigen::MatrixXd& x, const LsirmState& state) {
  check_shapes(x, state);
  if (!x.allFinite()) throw DataError("lsirm: data matrix has non-finite entries");
  if (!(state.sigma2 > 0)) throw NumericError("lsirm: sigma2 must be positive");
  const double ssr = sum_squared_residuals(x, state);
  const double cells = static_cast<double>(x.size());
  return -0.5 * cells * (kLog2Pi + std::log(state.sigma2)) - ssr / (2.0 * state.sigma2);
}

double log_posterior(const Eigen::MatrixXd& x, const LsirmState& state, const LsirmConfig& config) {
  if (x.rows() == 0 || x.cols() == 0) throw ConfigError("lsirm: empty data matrix");
  if (!(state.sigma2 > 0) || !(state.sigma_theta2 > 0)) throw NumericError("lsirm: variances must be positive");
  double lp = log_likelihood(x, state);
  for (double b : state.beta) lp += normal_logpdf(b, 1.0);
  for (double t : state.theta) lp += normal_logpdf(t, state.sigma_theta2);
  for (Eigen::Index i = 0; i < state.V.size(); ++i) lp += normal_logpdf(state.V.data()[i], 1.0);
  for (Eigen::Index i = 0; i < state.U.size(); ++i) lp += normal_logpdf(state.U.data()[i], 1.0);
  lp += inverse_gamma_logpdf(state.sigma2, config.prior_a, config.prior_b);
  lp += inverse_gamma_logpdf(state.sigma_theta2, config.prior_a_theta, config.prior_b_theta);
  return lp;
}

bool metropolis_accept(double log_ratio, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return std::log(u) < log_ratio;
}

double draw_sigma2(const Eigen::MatrixXd& x, const LsirmState& state, const LsirmConfig& config, Rng& rng) {
  const double ssr = sum_squared_residuals(x, state);
  return draw_inverse_gamma(config.prior_a + 0.5 * static_cast<double>(x.size()), config.prior_b + 0.5 * ssr, rng);
}

double draw_sigma_theta2(const LsirmState& state, const LsirmConfig& config, Rng& rng) {
  return draw_inverse_gamma(config.prior_a_theta + 0.5 * static_cast<double>(state.theta.size()),
                            config.prior_b_theta + 0.5 * state.theta.squaredNorm(), rng);
}

void mcmc_step(const Eigen::MatrixXd& x, LsirmState& s, const LsirmConfig& config, Rng& rng, AcceptanceTally* tally) {
  const Eigen::Index topics = x.rows(), words = x.cols();
  const int dim = static_cast<int>(s.V.cols());
  const double inv_two_var = 1.0 / (2.0 * s.sigma2);
  Eigen::MatrixXd dist = distances(s);
  std::normal_distribution<double> normal;
  AcceptanceTally local;

  // beta_i: row i of the likelihood, N(0, 1) prior.
  for (Eigen::Index i = 0; i < topics; ++i) {
    const double old_b = s.beta(i);
    const double new_b = old_b + config.jump_beta * normal(rng);
    double delta = -(new_b * new_b - old_b * old_b) / 2.0;
    for (Eigen::Index j = 0; j < words; ++j) {
      const double base = x(i, j) - s.theta(j) + dist(i, j);
      const double r_old = base - old_b, r_new = base - new_b;
      delta += (r_old * r_old - r_new * r_new) * inv_two_var;
    }
    ++local.beta_proposed;
    if (metropolis_accept(delta, rng)) {
      s.beta(i) = new_b;
      ++local.beta_accepted;
    }
  }

  // theta_j: column j, N(0, sigma_theta2) prior.
  for (Eigen::Index j = 0; j < words; ++j) {
    const double old_t = s.theta(j);
    const double new_t = old_t + config.jump_theta * normal(rng);
    double delta = -(new_t * new_t - old_t * old_t) / (2.0 * s.sigma_theta2);
    for (Eigen::Index i = 0; i < topics; ++i) {
      const double base = x(i, j) - s.beta(i) + dist(i, j);
      const double r_old = base - old_t, r_new = base - new_t;
      delta += (r_old * r_old - r_new * r_new) * inv_two_var;
    }
    ++local.theta_proposed;
    if (metropolis_accept(delta, rng)) {
      s.theta(j) = new_t;
      ++local.theta_accepted;
    }
  }

  Eigen::RowVectorXd proposal(dim);
  Eigen::VectorXd new_dist;

  // v_i: distances to every word change.
  new_dist.resize(words);
  for (Eigen::Index i = 0; i < topics; ++i) {
    for (int c = 0; c < dim; ++c) proposal(c) = s.V(i, c) + config.jump_latent * normal(rng);
    double delta = -(proposal.squaredNorm() - s.V.row(i).squaredNorm()) / 2.0;
    for (Eigen::Index j = 0; j < words; ++j) {
      new_dist(j) = (proposal - s.U.row(j)).norm();
      const double base = x(i, j) - s.beta(i) - s.theta(j);
      const double r_old = base + dist(i, j), r_new = base + new_dist(j);
      delta += (r_old * r_old - r_new * r_new) * inv_two_var;
    }
    ++local.v_proposed;
    if (metropolis_accept(delta, rng)) {
      s.V.row(i) = proposal;
      dist.row(i) = new_dist.transpose();
      ++local.v_accepted;
    }
  }

  // u_j: distances to every topic change.
  new_dist.resize(topics);
  for (Eigen::Index j = 0; j < words; ++j) {
    for (int c = 0; c < dim; ++c) proposal(c) = s.U(j, c) + config.jump_latent * normal(rng);
    double delta = -(proposal.squaredNorm() - s.U.row(j).squaredNorm()) / 2.0;
    for (Eigen::Index i = 0; i < topics; ++i) {
      new_dist(i) = (s.V.row(i) - proposal).norm();
      const double base = x(i, j) - s.beta(i) - s.theta(j);
      const double r_old = base + dist(i, j), r_new = base + new_dist(i);
      delta += (r_old * r_old - r_new * r_new) * inv_two_var;
    }
    ++local.u_proposed;
    if (metropolis_accept(delta, rng)) {
      s.U.row(j) = proposal;
      dist.col(j) = new_dist;
      ++local.u_accepted;
    }
  }

  s.sigma2 = draw_sigma2(x, s, config, rng);
  s.sigma_theta2 = draw_sigma_theta2(s, config, rng);

  if (tally) {
    tally->beta_accepted += local.beta_accepted;
    tally->beta_proposed += local.beta_proposed;
    tally->theta_accepted += local.theta_accepted;
    tally->theta_proposed += local.theta_proposed;
    tally->v_accepted += local.v_accepted;
    tally->v_proposed += local.v_proposed;
    tally->u_accepted += local.u_accepted;
    tally->u_proposed += local.u_proposed;
  }
}

ChainMatch within_chain_procrustes(std::vector<PositionSample> samples, std::span<const double> log_posteriors) {
  if (samples.empty()) throw ConfigError("lsirm: no samples to match");
  if (log_posteriors.size() != samples.size()) throw ConfigError("lsirm: one log-posterior per sample required");

  ChainMatch out;
  for (std::size_t s = 1; s < log_posteriors.size(); ++s)
    if (log_posteriors[s] > log_posteriors[out.reference]) out.reference = s;

  const Eigen::MatrixXd reference = samples[out.reference].V;
  if (reference.squaredNorm() == 0.0) {
    spdlog::warn("lsirm: reference topic positions are all zero, skipping Procrustes matching");
    out.skipped = true;
  } else {
    for (auto& sample : samples) {
      const Eigen::MatrixXd q = orthogonal_procrustes(sample.V, reference);
      sample.V = sample.V * q;
      sample.U = sample.U * q;
    }
  }
  out.samples = std::move(samples);
  return out;
}

namespace {

using ChainVisitor = std::function<void(std::int64_t iteration, const LsirmState&)>;

// Replays from the seed, so two calls visit identical states.
AcceptanceTally run_chain(const Eigen::MatrixXd& x, const LsirmConfig& config, const ChainVisitor& visit) {
  Rng rng(config.seed);
  auto state = LsirmState::initial(x.rows(), x.cols(), config.dim, rng);
  AcceptanceTally tally;
  for (int t = 1; t <= config.iterations; ++t) {
    mcmc_step(x, state, config, rng, &tally);
    if (t > config.burn_in && (t - config.burn_in) % config.thinning == 0) visit(t, state);
  }
  return tally;
}

// Running sums in sample order; shared by both the stored and replayed paths.
struct MeanAccumulator {
  LsirmState sum;
  std::size_t count = 0;

  void add_scalars(const LsirmState& s) {
    if (count == 0) {
      sum.beta = Eigen::VectorXd::Zero(s.beta.size());
      sum.theta = Eigen::VectorXd::Zero(s.theta.size());
      sum.V = Eigen::MatrixXd::Zero(s.V.rows(), s.V.cols());
      sum.U = Eigen::MatrixXd::Zero(s.U.rows(), s.U.cols());
      sum.sigma2 = sum.sigma_theta2 = 0.0;
    }
    sum.beta += s.beta;
    sum.theta += s.theta;
    sum.sigma2 += s.sigma2;
    sum.sigma_theta2 += s.sigma_theta2;
    ++count;
  }
  void add_positions(const Eigen::MatrixXd& v, const Eigen::MatrixXd& u) {
    sum.V += v;
    sum.U += u;
  }
  LsirmState mean() const {
    const double n = static_cast<double>(count);
    return {sum.beta / n, sum.theta / n, sum.V / n, sum.U / n, sum.sigma2 / n, sum.sigma_theta2 / n};
  }
};

}  // namespace

LsirmPosterior fit_lsirm(const Eigen::MatrixXd& x, const LsirmConfig& config) {
  config.validate();
  if (x.rows() < 2) throw ConfigError("lsirm: need at least two topics (rows)");
  if (x.cols() < 2) throw ConfigError("lsirm: need at least two words (columns)");
  if (!x.allFinite()) throw DataError("lsirm: data matrix has non-finite entries");

  LsirmPosterior post;
  MeanAccumulator acc;
  std::vector<Eigen::MatrixXd> topic_positions;
  std::vector<LsirmState> kept;

  const auto tally = run_chain(x, config, [&](std::int64_t t, const LsirmState& s) {
    post.sample_iterations.push_back(t);
    post.sample_log_posterior.push_back(log_posterior(x, s, config));
    acc.add_scalars(s);
    if (config.keep_samples)
      kept.push_back(s);
    else
      topic_positions.push_back(s.V);
  });
  post.retained = post.sample_log_posterior.size();
  if (post.retained == 0) throw ConfigError("lsirm: schedule retains no samples");

  if (config.keep_samples) {
    std::vector<PositionSample> positions;
    positions.reserve(kept.size());
    for (const auto& s : kept) positions.push_back({s.V, s.U});
    auto match = within_chain_procrustes(std::move(positions), post.sample_log_posterior);
    post.reference_sample = match.reference;
    post.alignment_skipped = match.skipped;
    for (std::size_t s = 0; s < kept.size(); ++s) {
      kept[s].V = std::move(match.samples[s].V);
      kept[s].U = std::move(match.samples[s].U);
      acc.add_positions(kept[s].V, kept[s].U);
    }
    post.samples = std::move(kept);
  } else {
    // Same reference rule as within_chain_procrustes, applied on replay.
    for (std::size_t s = 1; s < post.retained; ++s)
      if (post.sample_log_posterior[s] > post.sample_log_posterior[post.reference_sample]) post.reference_sample = s;
    const Eigen::MatrixXd reference = topic_positions[post.reference_sample];
    post.alignment_skipped = reference.squaredNorm() == 0.0;
    if (post.alignment_skipped) spdlog::warn("lsirm: reference topic positions are all zero, skipping Procrustes matching");
    std::size_t index = 0;
    run_chain(x, config, [&](std::int64_t, const LsirmState& s) {
      const auto& v = topic_positions[index++];
      if (post.alignment_skipped) {
        acc.add_positions(v, s.U);
        return;
      }
      const Eigen::MatrixXd q = orthogonal_procrustes(v, reference);
      const Eigen::MatrixXd v_matched = v * q;
      const Eigen::MatrixXd u_matched = s.U * q;
      acc.add_positions(v_matched, u_matched);
    });
  }

  post.mean = acc.mean();
  post.A = post.mean.V;
  post.gamma = pairwise_distances(post.mean.V, post.mean.U);
  post.acceptance = tally.rates();

  auto check_rate = [&](const char* block, double rate) {
    if (rate == 0.0 || rate == 1.0) {
      post.warnings.push_back(fmt::format("acceptance rate of {} block is {}", block, rate));
      spdlog::warn("lsirm: acceptance rate of {} block is {}", block, rate);
    }
  };
  check_rate("beta", post.acceptance.beta);
  check_rate("theta", post.acceptance.theta);
  check_rate("topic position", post.acceptance.topic_positions);
  check_rate("word position", post.acceptance.word_positions);
  return post;
}

}  // namespace topicnet
