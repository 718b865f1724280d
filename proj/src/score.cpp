#include "topicnet/score.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "topicnet/error.hpp"

namespace topicnet {

void ScoreConfig::validate() const {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("score: weights must be non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw ConfigError("score: weights must not all be zero");
  if (!(top_fraction > 0.0) || top_fraction > 1.0) throw ConfigError("score: top_fraction must lie in (0, 1]");
}

namespace {

void check_inputs(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& gamma) {
  if (delta.rows() != gamma.rows() || delta.cols() != gamma.cols())
    throw ConfigError("score: delta and gamma shapes differ");
  if (delta.size() == 0) throw ConfigError("score: empty table");
  if ((gamma.array() < 0.0).any()) throw ConfigError("score: gamma must be non-negative");
}

double combine(const ScoreConfig& c, double f_delta_col, double f_delta_row, double f_gamma_col, double f_gamma_row) {
  return c.weights[0] / (2.0 - f_delta_col) + c.weights[1] / (2.0 - f_delta_row) + c.weights[2] / (1.0 + f_gamma_col) +
         c.weights[3] / (1.0 + f_gamma_row);
}

// ECDF of every entry within its own vector, via a sorted copy.
template <typename Vec>
Eigen::VectorXd ecdf_all(const Vec& v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  Eigen::VectorXd out(v.size());
  const double n = static_cast<double>(sorted.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const auto upper = std::upper_bound(sorted.begin(), sorted.end(), v(k));
    out(k) = static_cast<double>(upper - sorted.begin()) / n;
  }
  return out;
}

}  // namespace

double score_cell(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& gamma, Eigen::Index i, Eigen::Index j,
                  const ScoreConfig& config) {
  check_inputs(delta, gamma);
  return combine(config, ecdf(delta.col(j), delta(i, j)), ecdf(delta.row(i), delta(i, j)), ecdf(gamma.col(j), gamma(i, j)),
                 ecdf(gamma.row(i), gamma(i, j)));
}

Eigen::MatrixXd score_matrix(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& gamma, const ScoreConfig& config) {
  check_inputs(delta, gamma);
  const Eigen::Index p = delta.rows(), n = delta.cols();
  Eigen::MatrixXd f_delta_col(p, n), f_delta_row(p, n), f_gamma_col(p, n), f_gamma_row(p, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    f_delta_col.col(j) = ecdf_all(delta.col(j));
    f_gamma_col.col(j) = ecdf_all(gamma.col(j));
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    f_delta_row.row(i) = ecdf_all(delta.row(i)).transpose();
    f_gamma_row.row(i) = ecdf_all(gamma.row(i)).transpose();
  }
  Eigen::MatrixXd s(p, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < p; ++i)
      s(i, j) = combine(config, f_delta_col(i, j), f_delta_row(i, j), f_gamma_col(i, j), f_gamma_row(i, j));
  return s;
}

std::size_t top_count(std::size_t words, double top_fraction) {
  if (words == 0) return 0;
  // Slack absorbs products like 0.2 * 15 = 3.0000000000000004.
  const auto n = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(words) - 1e-9));
  return std::clamp<std::size_t>(n, 1, words);
}

std::vector<RankedWord> rank_topic_words(const ScoreTable& table, int topic, const ScoreConfig& config) {
  if (topic < 0 || topic >= table.score.rows()) throw ConfigError("score: unknown topic " + std::to_string(topic));
  const auto n = static_cast<std::size_t>(table.score.cols());
  std::vector<RankedWord> ranked;
  ranked.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    ranked.push_back({table.words.empty() ? static_cast<WordId>(c) : table.words[c], table.score(topic, col),
                      table.affinity(topic, col), false});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedWord& a, const RankedWord& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.affinity != b.affinity) return a.affinity > b.affinity;
    return a.word < b.word;
  });
  const auto flagged = top_count(n, config.top_fraction);
  for (std::size_t r = 0; r < flagged; ++r) ranked[r].top = true;
  return ranked;
}

ScoreTable score_table(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& gamma, std::vector<WordId> words,
                       const ScoreConfig& config) {
  config.validate();
  if (words.empty()) {
    words.resize(static_cast<std::size_t>(delta.cols()));
    std::iota(words.begin(), words.end(), WordId{0});
  }
  if (words.size() != static_cast<std::size_t>(delta.cols())) throw ConfigError("score: one word id per column required");

  ScoreTable table;
  table.score = score_matrix(delta, gamma, config);
  table.affinity = (-gamma.array()).exp().matrix();
  table.words = std::move(words);
  for (int i = 0; i < table.score.rows(); ++i) table.top_words.emplace(i, rank_topic_words(table, i, config));
  return table;
}

std::vector<WordId> intersect_top_words(std::span<const ScoreTable> tables, int topic) {
  if (tables.size() < 2) throw ConfigError("score: intersecting top words needs at least two tables");
  std::map<WordId, std::pair<std::size_t, double>> tally;  // word -> (tables flagging it, summed score)
  for (const auto& table : tables) {
    const auto it = table.top_words.find(topic);
    if (it == table.top_words.end()) throw ConfigError("score: unknown topic " + std::to_string(topic));
    for (const auto& w : it->second) {
      if (!w.top) continue;
      auto& entry = tally[w.word];
      entry.first += 1;
      entry.second += w.score;
    }
  }
  std::vector<std::pair<WordId, double>> common;
  for (const auto& [word, entry] : tally)
    if (entry.first == tables.size()) common.emplace_back(word, entry.second / static_cast<double>(tables.size()));
  std::sort(common.begin(), common.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<WordId> out;
  out.reserve(common.size());
  for (const auto& [word, mean] : common) out.push_back(word);
  return out;
}

}  // namespace topicnet
