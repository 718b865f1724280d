#include "topicnet/plots.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "topicnet/error.hpp"
#include "topicnet/matrix_io.hpp"

namespace topicnet {

namespace {

std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
  auto p = stem;
  p += ext;
  return p;
}

void check_trajectory(const PositionFamily& family) {
  if (family.B.size() < 2) throw ConfigError("plot: trajectory needs at least two fractions");
  if (family.B.begin()->second.cols() < 2) throw ConfigError("plot: trajectory needs two latent dimensions");
}

std::string word_label(WordId id, std::span<const std::string> vocabulary) {
  if (id >= 0 && static_cast<std::size_t>(id) < vocabulary.size()) return vocabulary[static_cast<std::size_t>(id)];
  return std::to_string(id);
}

const std::vector<RankedWord>& ranking(const ScoreTable& table, int topic) {
  const auto it = table.top_words.find(topic);
  if (it == table.top_words.end()) throw ConfigError("plot: unknown topic " + std::to_string(topic + 1));
  return it->second;
}

}  // namespace

std::string trajectory_csv(const PositionFamily& family) {
  check_trajectory(family);
  std::string out = "fraction,topic,x,y\n";
  const Eigen::Index topics = family.B.begin()->second.rows();
  for (Eigen::Index i = 0; i < topics; ++i)
    for (auto it = family.B.rbegin(); it != family.B.rend(); ++it)
      out += fmt::format("{},{},{},{}\n", it->first, i + 1, format_double(it->second(i, 0)),
                         format_double(it->second(i, 1)));
  return out;
}

PlotFrame trajectory_frame(const PositionFamily& family) {
  check_trajectory(family);
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;  // origin always in view
  for (const auto& [k, b] : family.B) {
    x_lo = std::min(x_lo, b.col(0).minCoeff());
    x_hi = std::max(x_hi, b.col(0).maxCoeff());
    y_lo = std::min(y_lo, b.col(1).minCoeff());
    y_hi = std::max(y_hi, b.col(1).maxCoeff());
  }
  return PlotFrame::around(x_lo, x_hi, y_lo, y_hi, 0.08);
}

std::string trajectory_svg(const PositionFamily& family) {
  const auto frame = trajectory_frame(family);
  SvgDocument svg(frame.left + frame.width + 40, frame.top + frame.height + 50);
  svg.rect(0, 0, frame.left + frame.width + 40, frame.top + frame.height + 50, "#ffffff");
  svg.axes(frame, "axis 1", "axis 2");
  svg.line(frame.px(frame.x_min), frame.py(0), frame.px(frame.x_max), frame.py(0), "#999999", 1.0, "4 3");
  svg.line(frame.px(0), frame.py(frame.y_min), frame.px(0), frame.py(frame.y_max), "#999999", 1.0, "4 3");
  svg.text(frame.left + frame.width / 2, 18,
           fmt::format("Topic trajectories {}% to {}%", family.B.rbegin()->first, family.B.begin()->first), "middle", 13);

  const Eigen::Index topics = family.B.begin()->second.rows();
  for (Eigen::Index i = 0; i < topics; ++i) {
    std::vector<std::pair<double, double>> points;
    for (auto it = family.B.rbegin(); it != family.B.rend(); ++it)
      points.emplace_back(frame.px(it->second(i, 0)), frame.py(it->second(i, 1)));
    const auto color = palette_color(static_cast<std::size_t>(i));
    svg.polyline(points, color, 1.5, true, fmt::format("topic-{}", i + 1));
    svg.circle(points.back().first, points.back().second, 2.5, color);
    svg.text(points.back().first + 5, points.back().second - 5, fmt::format("T{}", i + 1));
  }
  return svg.str();
}

PlotFiles emit_trajectory(const PositionFamily& family, const std::filesystem::path& stem) {
  PlotFiles files{with_ext(stem, ".csv"), with_ext(stem, ".svg")};
  write_file_atomic(files.csv, trajectory_csv(family));
  write_file_atomic(files.svg, trajectory_svg(family));
  return files;
}

std::string distance_csv(const PositionFamily& family) {
  std::string out = "fraction,topic,distance\n";
  for (const auto& [k, a] : family.A)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out += fmt::format("{},{},{}\n", k, i + 1, format_double(a.row(i).norm()));
  return out;
}

std::string distance_svg(const PositionFamily& family) {
  if (family.A.empty()) throw ConfigError("plot: empty position family");
  double hi = 0.0;
  for (const auto& [k, a] : family.A) hi = std::max(hi, a.rowwise().norm().maxCoeff());
  const auto frame =
      PlotFrame::around(static_cast<double>(family.A.begin()->first), static_cast<double>(family.A.rbegin()->first), 0.0, hi);
  SvgDocument svg(frame.left + frame.width + 40, frame.top + frame.height + 50);
  svg.rect(0, 0, frame.left + frame.width + 40, frame.top + frame.height + 50, "#ffffff");
  svg.axes(frame, "retained words (%)", "distance from origin");
  svg.text(frame.left + frame.width / 2, 18, "Origin distance of topic positions", "middle", 13);

  if (family.A.contains(family.baseline_k)) {
    const double bx = frame.px(family.baseline_k);
    svg.line(bx, frame.top, bx, frame.top + frame.height, "#d62728", 1.5, "6 3");
    svg.text(bx + 4, frame.top + 12, fmt::format("baseline {}%", family.baseline_k));
  }

  const Eigen::Index topics = family.A.begin()->second.rows();
  for (Eigen::Index i = 0; i < topics; ++i) {
    std::vector<std::pair<double, double>> points;
    for (const auto& [k, a] : family.A) points.emplace_back(frame.px(k), frame.py(a.row(i).norm()));
    const auto color = palette_color(static_cast<std::size_t>(i));
    if (points.size() > 1) svg.polyline(points, color, 1.0, false, fmt::format("topic-{}", i + 1));
    for (const auto& [x, y] : points) svg.circle(x, y, 2.0, color);
  }
  std::vector<std::pair<double, double>> mean_points;
  for (const auto& [k, a] : family.A) mean_points.emplace_back(frame.px(k), frame.py(mean_origin_distance(a)));
  if (mean_points.size() > 1) svg.polyline(mean_points, "#000000", 2.5, false, "mean");
  return svg.str();
}

PlotFiles emit_distance_plot(const PositionFamily& family, const std::filesystem::path& stem) {
  PlotFiles files{with_ext(stem, ".csv"), with_ext(stem, ".svg")};
  write_file_atomic(files.csv, distance_csv(family));
  write_file_atomic(files.svg, distance_svg(family));
  return files;
}

std::string score_affinity_csv(const ScoreTable& table, int topic, std::span<const std::string> vocabulary) {
  std::string out = "word,score,affinity,class\n";
  for (const auto& w : ranking(table, topic))
    out += fmt::format("{},{},{},{}\n", csv_field(word_label(w.word, vocabulary)), format_double(w.score),
                       format_double(w.affinity), w.top ? 1 : 0);
  return out;
}

PlotFrame score_affinity_frame(const ScoreTable& table, int topic) {
  const auto& words = ranking(table, topic);
  double lo = 0.5, hi = 1.0;
  for (const auto& w : words) {
    lo = std::min(lo, w.score);
    hi = std::max(hi, w.score);
  }
  auto frame = PlotFrame::around(lo, hi, 0.0, 1.0, 0.02);
  return frame;
}

std::string score_affinity_svg(const ScoreTable& table, int topic, std::span<const std::string> vocabulary) {
  const auto& words = ranking(table, topic);
  const auto frame = score_affinity_frame(table, topic);
  SvgDocument svg(frame.left + frame.width + 40, frame.top + frame.height + 50);
  svg.rect(0, 0, frame.left + frame.width + 40, frame.top + frame.height + 50, "#ffffff");
  svg.axes(frame, "score", "affinity exp(-distance)");
  svg.text(frame.left + frame.width / 2, 18, fmt::format("Topic {}", topic + 1), "middle", 13);
  // Rest first so the top words are drawn on top.
  for (const bool top : {false, true}) {
    for (const auto& w : words) {
      if (w.top != top) continue;
      svg.circle(frame.px(w.score), frame.py(w.affinity), 3.0, top ? "#ff7f0e" : "#2ca02c",
                 top ? "class-1" : "class-0");
    }
  }
  // Labels for the top words only.
  for (const auto& w : words)
    if (w.top) svg.text(frame.px(w.score) + 4, frame.py(w.affinity) - 4, word_label(w.word, vocabulary), "start", 9);
  return svg.str();
}

PlotFiles emit_score_affinity_plot(const ScoreTable& table, int topic, const std::filesystem::path& stem,
                                   std::span<const std::string> vocabulary) {
  PlotFiles files{with_ext(stem, ".csv"), with_ext(stem, ".svg")};
  write_file_atomic(files.csv, score_affinity_csv(table, topic, vocabulary));
  write_file_atomic(files.svg, score_affinity_svg(table, topic, vocabulary));
  return files;
}

}  // namespace topicnet
