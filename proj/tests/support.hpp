#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topicnet/btm.hpp"
#include "topicnet/corpus.hpp"
#include "topicnet/lsirm.hpp"
#include "topicnet/rng.hpp"

namespace testing {

using topicnet::Rng;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

inline Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng, lo, hi);
  return m;
}

/// Haar-ish orthogonal matrix; half the time with determinant -1.
inline Eigen::MatrixXd random_orthogonal(Eigen::Index d, Rng& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(d, d, rng));
  Eigen::MatrixXd q = qr.householderQ();
  if (uniform(rng) < 0.5) q.col(0) = -q.col(0);
  return q;
}

inline Eigen::Matrix2d rotation2(double radians) {
  Eigen::Matrix2d r;
  r << std::cos(radians), -std::sin(radians), std::sin(radians), std::cos(radians);
  return r;
}

/// Unit-column T with factor correlations T^T T off the diagonal drawn
/// uniformly from [-max_corr, max_corr] (redrawn until positive definite).
inline Eigen::MatrixXd oblique_transform(Eigen::Index d, double max_corr, Rng& rng) {
  for (;;) {
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = a + 1; b < d; ++b) phi(a, b) = phi(b, a) = uniform(rng, -max_corr, max_corr);
    Eigen::LLT<Eigen::MatrixXd> llt(phi);
    if (llt.info() == Eigen::Success) return random_orthogonal(d, rng) * Eigen::MatrixXd(llt.matrixL()).transpose();
  }
}

/// Rows are probability vectors.
inline Eigen::MatrixXd random_stochastic(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m = uniform_matrix(rows, cols, rng, 1e-3, 1.0);
  for (Eigen::Index i = 0; i < rows; ++i) m.row(i) /= m.row(i).sum();
  return m;
}

inline std::vector<topicnet::Biterm> random_biterms(std::size_t count, int vocabulary, Rng& rng) {
  std::vector<topicnet::Biterm> out;
  while (out.size() < count) {
    const int a = uniform_int(rng, 0, vocabulary - 1), b = uniform_int(rng, 0, vocabulary - 1);
    if (a != b) out.push_back(topicnet::Biterm::make(a, b));
  }
  return out;
}

inline double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(b) / (a.norm() * b.norm()); }

/// Mean row cosine under the best row permutation of `estimate`.
inline double best_permutation_cosine(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
  std::vector<int> perm(static_cast<std::size_t>(truth.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  do {
    double total = 0.0;
    for (Eigen::Index i = 0; i < truth.rows(); ++i)
      total += cosine(truth.row(i).transpose(), estimate.row(perm[static_cast<std::size_t>(i)]).transpose());
    best = std::max(best, total / static_cast<double>(truth.rows()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n, mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline std::vector<double> upper_triangle_distances(const Eigen::MatrixXd& points) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) out.push_back((points.row(i) - points.row(j)).norm());
  return out;
}

struct SyntheticCorpus {
  Eigen::MatrixXd phi;  // K x M truth
  topicnet::BitermSet biterms;
  std::size_t vocabulary = 0;
};

/// Short documents, each drawn from one topic of a block-structured phi:
/// topic z puts 90% of its mass on its own words.
inline SyntheticCorpus synthetic_btm_corpus(int topics, int vocabulary, int documents, int mean_length, Rng& rng) {
  SyntheticCorpus out;
  out.vocabulary = static_cast<std::size_t>(vocabulary);
  out.phi = Eigen::MatrixXd::Zero(topics, vocabulary);
  const int block = vocabulary / topics;
  for (int z = 0; z < topics; ++z) {
    for (int w = 0; w < vocabulary; ++w) {
      const bool own = w / block == z;
      out.phi(z, w) = uniform(rng, 0.5, 1.5) * (own ? 0.9 / block : 0.1 / (vocabulary - block));
    }
    out.phi.row(z) /= out.phi.row(z).sum();
  }
  std::poisson_distribution<int> length(mean_length);
  for (int d = 0; d < documents; ++d) {
    const int z = uniform_int(rng, 0, topics - 1);
    const Eigen::RowVectorXd weights = out.phi.row(z);
    std::discrete_distribution<int> word(weights.data(), weights.data() + vocabulary);
    std::vector<topicnet::WordId> tokens(static_cast<std::size_t>(std::max(2, length(rng))));
    for (auto& t : tokens) t = word(rng);
    const auto doc = topicnet::extract_biterms(tokens);
    out.biterms.biterms.insert(out.biterms.biterms.end(), doc.biterms.begin(), doc.biterms.end());
  }
  return out;
}

struct SyntheticLsirm {
  topicnet::LsirmState truth;
  Eigen::MatrixXd x;
};

inline SyntheticLsirm synthetic_lsirm(Eigen::Index topics, Eigen::Index words, int dim, double sigma2, Rng& rng) {
  SyntheticLsirm out;
  auto& s = out.truth;
  s.beta = gaussian_matrix(topics, 1, rng);
  s.theta = gaussian_matrix(words, 1, rng);
  s.V = gaussian_matrix(topics, dim, rng);
  s.U = gaussian_matrix(words, dim, rng);
  s.sigma2 = sigma2;
  s.sigma_theta2 = 1.0;
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
  out.x.resize(topics, words);
  for (Eigen::Index i = 0; i < topics; ++i)
    for (Eigen::Index j = 0; j < words; ++j)
      out.x(i, j) = s.beta(i) + s.theta(j) - (s.V.row(i) - s.U.row(j)).norm() + noise(rng);
  return out;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("topicnet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
