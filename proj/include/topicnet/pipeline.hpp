#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "topicnet/config.hpp"

namespace topicnet {

enum class StageId { ingest, btm, select, lsirm, align, score, plot };

inline constexpr std::array kAllStages = {StageId::ingest, StageId::btm,   StageId::select, StageId::lsirm,
                                          StageId::align,  StageId::score, StageId::plot};

std::string_view stage_name(StageId stage);
std::optional<StageId> stage_from_name(std::string_view name);

struct StageRecord {
  std::string name;
  std::string input_hash;
  bool skipped = false;  // cache hit
  double seconds = 0.0;
  std::map<std::string, std::string> outputs;  // path relative to the output dir -> sha256
};

struct RunManifest {
  std::string version;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<StageRecord> stages;
  std::optional<std::string> error;

  nlohmann::json to_json() const;
};

/// Runs one stage on the artifacts already under `config.out`. A stage whose
/// input hash and outputs match its stamp is skipped unless `force` is set.
/// Errors are rethrown prefixed with the stage name, keeping their exit code.
StageRecord run_stage(StageId stage, const PipelineConfig& config, bool force = false);

/// corpus -> btm -> select -> lsirm (per fraction, `jobs` workers) -> align
/// -> score -> plot, writing `manifest.json` under `config.out` even when a
/// stage fails. Inputs are checked before anything is written.
RunManifest run_pipeline(const PipelineConfig& config);

/// True when every artifact listed in `<out>/manifest.json` exists and
/// matches its recorded hash; otherwise `problem` says what is wrong.
bool verify_manifest(const std::filesystem::path& out_dir, std::string* problem = nullptr);

/// Zero-padded percent used in artifact names, e.g. 47 -> "047".
std::string fraction_tag(int percent);

}  // namespace topicnet
