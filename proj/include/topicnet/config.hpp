#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "topicnet/align.hpp"
#include "topicnet/btm.hpp"
#include "topicnet/lsirm.hpp"
#include "topicnet/score.hpp"
#include "topicnet/selector.hpp"

namespace topicnet {

/// Everything `topicnet run` needs. Stage seeds are derived from `seed`.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path stoplist;  // empty: no stoplist
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;
  int jobs = 1;

  BtmConfig btm;
  std::vector<int> fractions = fraction_range(40, 60);
  SelectionMode selection = SelectionMode::intersection;
  LsirmConfig lsirm;
  bool dump_chains = false;
  AlignOptions align;
  ScoreConfig score;

  /// Checks every stage config; with `check_paths`, also that inputs exist.
  /// Throws ConfigError.
  void validate(bool check_paths = true) const;
};

/// Defaults as a JSON document; its leaf keys are the complete key set.
nlohmann::json default_config_json();

/// Overlays `overrides` on the defaults. Unknown keys and type mismatches
/// throw ConfigError.
PipelineConfig config_from_json(const nlohmann::json& overrides);
nlohmann::json to_json(const PipelineConfig& config);

/// Reads a JSON config file; relative corpus/stoplist paths resolve against
/// the file's directory. Throws ConfigError.
nlohmann::json load_config_file(const std::filesystem::path& path);

/// `40..60`, `40..60:5`, or a comma list `40,45,50`.
std::vector<int> parse_fractions(std::string_view spec);

/// Sets the dotted `key` (e.g. `btm.topics`) in `doc` from its command-line
/// text, interpreted as JSON when it parses and as a string otherwise.
void set_dotted(nlohmann::json& doc, std::string_view key, std::string_view value);

/// Dotted paths of every leaf in `doc`.
std::vector<std::string> leaf_keys(const nlohmann::json& doc);

}  // namespace topicnet
