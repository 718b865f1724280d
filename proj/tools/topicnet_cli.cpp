// topicnet: topic word selection and latent topic networks from short texts.
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <spdlog/spdlog.h>

#include "topicnet/config.hpp"
#include "topicnet/error.hpp"
#include "topicnet/log.hpp"
#include "topicnet/pipeline.hpp"

using namespace topicnet;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Topic word selection and latent topic networks from short texts"};
  app.set_version_flag("--version", std::string(TOPICNET_VERSION));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  bool force = false;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_flag("--force", force, "re-run stages even when their inputs are unchanged");
  app.add_option("--set", sets, "override any config key, e.g. --set btm.topics=10");

  // Every config key gets a flag of the same (dotted) name; top-level keys
  // like --seed and --out come out of this too.
  std::map<std::string, std::string> overrides;
  for (const auto& key : leaf_keys(default_config_json()))
    app.add_option_function<std::string>("--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
                                         "config key " + key);
  app.add_option_function<std::string>("--fractions", [&](const std::string& v) { overrides["select.fractions"] = v; },
                                       "word fractions, e.g. 40..60");
  app.add_option_function<std::string>("--baseline-k", [&](const std::string& v) { overrides["align.baseline_k"] = v; },
                                       "force the alignment baseline fraction");

  std::map<std::string, CLI::App*> commands;
  for (auto stage : kAllStages) {
    const std::string name(stage_name(stage));
    commands[name] = app.add_subcommand(name, "run the " + name + " stage on artifacts in --out");
  }
  commands["run"] = app.add_subcommand("run", "run the full pipeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  nlohmann::json doc = config_path.empty() ? nlohmann::json::object() : load_config_file(config_path);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got `" + s + "`");
    set_dotted(doc, s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [key, value] : overrides) set_dotted(doc, key, value);
  const auto config = config_from_json(doc);

  if (commands["run"]->parsed()) {
    const auto manifest = run_pipeline(config);
    std::size_t skipped = 0;
    for (const auto& s : manifest.stages) skipped += s.skipped;
    spdlog::info("done: {} stages ({} cached), artifacts in {}", manifest.stages.size(), skipped, config.out.string());
    return 0;
  }
  for (auto stage : kAllStages) {
    if (!commands[std::string(stage_name(stage))]->parsed()) continue;
    config.validate(stage == StageId::ingest);
    const auto record = run_stage(stage, config, force);
    spdlog::info("{}: {} artifacts{}", record.name, record.outputs.size(), record.skipped ? " (cached)" : "");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(ExitCode::numeric);
  }
}
