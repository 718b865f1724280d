#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "topicnet/align.hpp"
#include "topicnet/score.hpp"
#include "topicnet/svg.hpp"

namespace topicnet {

struct PlotFiles {
  std::filesystem::path csv;
  std::filesystem::path svg;
};

// Trajectory of rotated topic positions B_k, drawn from the largest fraction
// to the smallest. Uses the first two coordinates. Throws ConfigError when B
// holds fewer than two fractions or fewer than two dimensions.
std::string trajectory_csv(const PositionFamily& family);
std::string trajectory_svg(const PositionFamily& family);
PlotFrame trajectory_frame(const PositionFamily& family);
PlotFiles emit_trajectory(const PositionFamily& family, const std::filesystem::path& stem);

// Per-topic origin distance of A_k against k, baseline marked.
std::string distance_csv(const PositionFamily& family);
std::string distance_svg(const PositionFamily& family);
PlotFiles emit_distance_plot(const PositionFamily& family, const std::filesystem::path& stem);

// Score against affinity for one topic; class 1 marks the top-ranked words.
// `vocabulary` maps word ids to labels (ids are printed when empty).
// Throws ConfigError for an unknown topic.
std::string score_affinity_csv(const ScoreTable& table, int topic, std::span<const std::string> vocabulary = {});
std::string score_affinity_svg(const ScoreTable& table, int topic, std::span<const std::string> vocabulary = {});
PlotFrame score_affinity_frame(const ScoreTable& table, int topic);
PlotFiles emit_score_affinity_plot(const ScoreTable& table, int topic, const std::filesystem::path& stem,
                                   std::span<const std::string> vocabulary = {});

}  // namespace topicnet
