#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include <fmt/format.h>

#include "doctest.h"
#include "support.hpp"
#include "topicnet/config.hpp"
#include "topicnet/error.hpp"
#include "topicnet/matrix_io.hpp"
#include "topicnet/pipeline.hpp"

using namespace topicnet;
namespace fs = std::filesystem;

namespace {

const std::string kQuick = "--select.fractions 40..43 --lsirm.iterations 600 --lsirm.burn_in 200";

int cli(const std::string& args, const fs::path& log) {
  const auto cmd = fmt::format("\"{}\" {} > \"{}\" 2>&1", TOPICNET_CLI, args, log.string());
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string mini_config() { return fmt::format("--config \"{}/mini_config.json\"", TOPICNET_DATA); }

PipelineConfig quick_config(const fs::path& out) {
  auto doc = load_config_file(fs::path(TOPICNET_DATA) / "mini_config.json");
  doc["out"] = out.string();
  doc["select"]["fractions"] = "40..43";
  doc["lsirm"]["iterations"] = 600;
  doc["lsirm"]["burn_in"] = 200;
  return config_from_json(doc);
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("seed derivation and fraction tags") {
    CHECK(fraction_tag(47) == "047");
    CHECK(fraction_tag(100) == "100");
    for (auto stage : kAllStages) CHECK(stage_from_name(stage_name(stage)) == stage);
    CHECK_FALSE(stage_from_name("bogus").has_value());
  }

  TEST_CASE("cli run writes every artifact and a verifiable manifest") {
    const auto dir = testing::scratch_dir("pipeline_cli");
    const auto out = dir / "out";
    REQUIRE(cli(fmt::format("{} {} --out \"{}\" run", mini_config(), kQuick, out.string()), dir / "run.log") == 0);
    for (const char* f : {"manifest.json", "corpus/vocabulary.txt", "corpus/biterms.tsv", "btm/delta.csv",
                          "btm/theta.csv", "select/manifest.json", "select/X_040.csv", "lsirm/k043/A.csv",
                          "lsirm/k043/gamma.csv", "align/B_041.csv", "align/distance.svg", "score/scores_042.csv",
                          "score/top_words.csv", "plots/trajectory.svg", "plots/trajectory.csv"})
      CHECK_MESSAGE(fs::exists(out / f), f);
    std::string problem;
    CHECK_MESSAGE(verify_manifest(out, &problem), problem);

    // Tampering is detected.
    write_file_atomic(out / "btm/theta.csv", "topic,theta\n");
    CHECK_FALSE(verify_manifest(out, &problem));
    fs::remove_all(dir);
  }

  TEST_CASE("a second run is served from cache and a deleted artifact is regenerated") {
    const auto dir = testing::scratch_dir("pipeline_cache");
    const auto config = quick_config(dir / "out");
    const auto first = run_pipeline(config);
    REQUIRE_FALSE(first.error.has_value());
    for (const auto& s : first.stages) CHECK_FALSE(s.skipped);

    const auto second = run_pipeline(config);
    REQUIRE(second.stages.size() == kAllStages.size());
    for (const auto& s : second.stages) CHECK_MESSAGE(s.skipped, s.name);

    const auto a = dir / "out" / "lsirm" / "k042" / "A.csv";
    const auto before = read_file(a);
    fs::remove(a);
    const auto third = run_pipeline(config);
    CHECK(read_file(a) == before);
    CHECK(third.stages[0].skipped);
    CHECK_FALSE(third.stages[3].skipped);
    std::string problem;
    CHECK_MESSAGE(verify_manifest(dir / "out", &problem), problem);
    fs::remove_all(dir);
  }

  TEST_CASE("changing a setting reruns only the affected stages") {
    const auto dir = testing::scratch_dir("pipeline_settings");
    auto config = quick_config(dir / "out");
    run_pipeline(config);
    config.score.top_fraction = 0.3;
    const auto rerun = run_pipeline(config);
    for (std::size_t i = 0; i < rerun.stages.size(); ++i)
      CHECK_MESSAGE(rerun.stages[i].skipped == (i < 5), rerun.stages[i].name);
    fs::remove_all(dir);
  }

  TEST_CASE("identical seeds give identical artifacts") {
    const auto dir = testing::scratch_dir("pipeline_determinism");
    run_pipeline(quick_config(dir / "a"));
    run_pipeline(quick_config(dir / "b"));
    for (const char* f : {"btm/delta.csv", "lsirm/k040/A.csv", "align/B_043.csv", "score/scores_041.csv"})
      CHECK_MESSAGE(read_file(dir / "a" / f) == read_file(dir / "b" / f), f);
    auto other = quick_config(dir / "c");
    other.seed += 1;
    run_pipeline(other);
    CHECK(read_file(dir / "a" / "btm/delta.csv") != read_file(dir / "c" / "btm/delta.csv"));
    fs::remove_all(dir);
  }

  TEST_CASE("configuration errors exit 2 before writing anything") {
    const auto dir = testing::scratch_dir("pipeline_errors");
    const auto out = dir / "out";
    CHECK(cli(fmt::format("{} --corpus \"{}\" --out \"{}\" run", mini_config(), (dir / "nope.tsv").string(),
                          out.string()),
              dir / "missing.log") == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(cli(fmt::format("{} --btm.topics 1 --out \"{}\" run", mini_config(), out.string()), dir / "topics.log") == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(cli(fmt::format("{} --no-such-flag run", mini_config()), dir / "flag.log") == 2);
    CHECK(cli(fmt::format("{} --out \"{}\" lsirm", mini_config(), out.string()), dir / "order.log") == 2);
    fs::remove_all(dir);
  }

  TEST_CASE("a malformed corpus line exits 3") {
    const auto dir = testing::scratch_dir("pipeline_data");
    write_file_atomic(dir / "bad.tsv", "doc1\tfine text here\nno tab on this line\n");
    const int code = cli(fmt::format("{} --corpus \"{}\" --out \"{}\" ingest", mini_config(),
                                     (dir / "bad.tsv").string(), (dir / "out").string()),
                         dir / "bad.log");
    CHECK(code == 3);
    fs::remove_all(dir);
  }
}
