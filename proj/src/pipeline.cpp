#include "topicnet/pipeline.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "topicnet/corpus.hpp"
#include "topicnet/error.hpp"
#include "topicnet/matrix_io.hpp"
#include "topicnet/plots.hpp"
#include "topicnet/rng.hpp"

namespace topicnet {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view stage_name(StageId stage) {
  switch (stage) {
    case StageId::ingest: return "ingest";
    case StageId::btm: return "btm";
    case StageId::select: return "select";
    case StageId::lsirm: return "lsirm";
    case StageId::align: return "align";
    case StageId::score: return "score";
    case StageId::plot: return "plot";
  }
  return "?";
}

std::optional<StageId> stage_from_name(std::string_view name) {
  for (auto s : kAllStages)
    if (stage_name(s) == name) return s;
  return std::nullopt;
}

std::string fraction_tag(int percent) { return fmt::format("{:03d}", percent); }

json RunManifest::to_json() const {
  json stages_json = json::array();
  for (const auto& s : stages)
    stages_json.push_back(
        {{"name", s.name}, {"input_hash", s.input_hash}, {"skipped", s.skipped}, {"seconds", s.seconds}, {"outputs", s.outputs}});
  json out{{"version", version}, {"seed", seed}, {"config", config}, {"stages", stages_json}};
  if (error) out["error"] = *error;
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Artifact plumbing

class StageOutputs {
 public:
  explicit StageOutputs(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& rel, const std::string& content) {
    write_file_atomic(root_ / rel, content);
    std::lock_guard lock(mutex_);
    outputs_[rel] = sha256_hex(content);
  }
  std::map<std::string, std::string> take() { return std::move(outputs_); }

 private:
  fs::path root_;
  std::mutex mutex_;
  std::map<std::string, std::string> outputs_;
};

fs::path stamp_path(const fs::path& root, StageId stage) {
  return root / ".stamps" / (std::string(stage_name(stage)) + ".json");
}

std::string tagged(const std::string& stage, const std::string& what) {
  return what.starts_with(stage + ":") ? what : stage + ": " + what;
}

std::optional<json> read_stamp(const fs::path& root, StageId stage) {
  const auto path = stamp_path(root, stage);
  if (!fs::exists(path)) return std::nullopt;
  try {
    return json::parse(read_file(path));
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

bool outputs_intact(const fs::path& root, const json& outputs) {
  for (const auto& [rel, hash] : outputs.items()) {
    const auto path = root / rel;
    if (!fs::is_regular_file(path) || sha256_file(path) != hash.get<std::string>()) return false;
  }
  return true;
}

// Upstream artifacts as recorded in the upstream stamp, re-hashed from disk.
std::map<std::string, std::string> upstream_outputs(const fs::path& root, StageId upstream) {
  const auto stamp = read_stamp(root, upstream);
  if (!stamp)
    throw ConfigError(fmt::format("missing {} artifacts in {}; run `topicnet {}` first", stage_name(upstream),
                                  root.string(), stage_name(upstream)));
  std::map<std::string, std::string> out;
  for (const auto& [rel, hash] : (*stamp)["outputs"].items()) {
    const auto path = root / rel;
    if (!fs::is_regular_file(path))
      throw ConfigError(fmt::format("artifact {} is missing; re-run `topicnet {}`", path.string(), stage_name(upstream)));
    out[rel] = sha256_file(path);
  }
  return out;
}

std::uint64_t parse_u64(std::string_view text, const std::string& source, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw ParseError(source, line, "expected an integer");
  return v;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

template <typename F>
void parallel_for(std::size_t count, int jobs, F&& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Readers for upstream artifacts

Vocabulary read_vocabulary(const fs::path& root) {
  Vocabulary vocab;
  for (const auto& line : read_lines(root / "corpus/vocabulary.txt"))
    if (!line.empty()) vocab.add(line);
  return vocab;
}

BitermSet read_biterms(const fs::path& root) {
  const auto path = root / "corpus/biterms.tsv";
  BitermSet set;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(path.string(), line_no, "expected `first<TAB>second`");
    const auto a = parse_u64(std::string_view(line).substr(0, tab), path.string(), line_no);
    const auto b = parse_u64(std::string_view(line).substr(tab + 1), path.string(), line_no);
    set.biterms.push_back(Biterm::make(static_cast<WordId>(a), static_cast<WordId>(b)));
  }
  return set;
}

struct SelectManifest {
  std::vector<int> fractions;
  std::map<int, std::vector<WordId>> word_sets;
};

SelectManifest read_select_manifest(const fs::path& root) {
  const auto doc = json::parse(read_file(root / "select/manifest.json"));
  SelectManifest m;
  for (const auto& entry : doc["fractions"]) {
    const int k = entry["fraction"].get<int>();
    m.fractions.push_back(k);
    m.word_sets[k] = entry["word_ids"].get<std::vector<WordId>>();
  }
  return m;
}

std::string x_file(int k) { return "select/X_" + fraction_tag(k) + ".csv"; }
std::string lsirm_dir(int k) { return "lsirm/k" + fraction_tag(k); }
std::string score_file(int k) { return "score/scores_" + fraction_tag(k) + ".csv"; }

ScoreTable read_score_table(const fs::path& path) {
  // topic,word_id,word,score,affinity,top in per-topic ranking order.
  const auto lines = read_lines(path);
  std::map<int, std::vector<RankedWord>> ranked;
  std::set<WordId> ids;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto f = split_csv_line(lines[n]);
    if (f.size() != 6) throw ParseError(path.string(), n + 1, "expected 6 fields");
    const int topic = std::stoi(f[0]) - 1;
    const auto id = static_cast<WordId>(std::stol(f[1]));
    ranked[topic].push_back({id, std::stod(f[3]), std::stod(f[4]), f[5] == "1"});
    ids.insert(id);
  }
  ScoreTable table;
  table.words.assign(ids.begin(), ids.end());
  std::map<WordId, Eigen::Index> column;
  for (std::size_t c = 0; c < table.words.size(); ++c) column[table.words[c]] = static_cast<Eigen::Index>(c);
  table.score = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ranked.size()), static_cast<Eigen::Index>(ids.size()));
  table.affinity = table.score;
  for (const auto& [topic, words] : ranked)
    for (const auto& w : words) {
      table.score(topic, column[w.word]) = w.score;
      table.affinity(topic, column[w.word]) = w.affinity;
    }
  table.top_words = std::move(ranked);
  return table;
}

// ---------------------------------------------------------------------------
// Stages. Each returns the json that, with upstream hashes, keys its cache.

struct StageContext {
  const PipelineConfig& config;
  fs::path root;
  StageOutputs& out;
};

void do_ingest(StageContext& ctx) {
  const auto stoplist = ctx.config.stoplist.empty() ? Stoplist{} : load_stoplist(ctx.config.stoplist);
  const auto corpus = ingest(ctx.config.corpus, stoplist);
  const auto biterms = extract_biterms(corpus);

  std::string vocab;
  for (const auto& w : corpus.vocabulary.words()) vocab += w + "\n";
  std::string docs;
  for (const auto& d : corpus.documents) {
    docs += d.id + "\t";
    for (std::size_t t = 0; t < d.tokens.size(); ++t) docs += (t ? " " : "") + d.tokens[t];
    docs += "\n";
  }
  std::string pairs;
  for (const auto& b : biterms.biterms) pairs += fmt::format("{}\t{}\n", b.first, b.second);

  ctx.out.write("corpus/vocabulary.txt", vocab);
  ctx.out.write("corpus/documents.tsv", docs);
  ctx.out.write("corpus/biterms.tsv", pairs);
  ctx.out.write("corpus/summary.json", json{{"documents", corpus.documents.size()},
                                            {"vocabulary_size", corpus.vocabulary.size()},
                                            {"biterms", biterms.total()}}
                                           .dump(2) + "\n");
  spdlog::info("ingest: {} documents, {} words, {} biterms", corpus.documents.size(), corpus.vocabulary.size(),
               biterms.total());
}

BtmConfig btm_config(const PipelineConfig& c) {
  auto b = c.btm;
  b.seed = derive_seed(c.seed, Stage::btm);
  return b;
}

void do_btm(StageContext& ctx) {
  const auto vocab = read_vocabulary(ctx.root);
  const auto biterms = read_biterms(ctx.root);
  const auto cfg = btm_config(ctx.config);
  const auto fit = fit_btm(biterms, vocab.size(), cfg);

  LabeledMatrix delta{"topic", topic_labels(cfg.topics), vocab.words(), fit.distributions.delta};
  LabeledMatrix theta{"topic", topic_labels(cfg.topics), {"theta"}, fit.distributions.theta};
  ctx.out.write("btm/delta.csv", to_csv(delta));
  ctx.out.write("btm/theta.csv", to_csv(theta));
  ctx.out.write("btm/meta.json", json{{"topics", cfg.topics},
                                      {"alpha", cfg.alpha},
                                      {"beta", cfg.beta},
                                      {"seed", cfg.seed},
                                      {"iterations", cfg.iterations},
                                      {"burn_in", cfg.burn_in},
                                      {"thinning", cfg.thinning},
                                      {"retained_samples", fit.retained_samples},
                                      {"vocabulary_size", vocab.size()},
                                      {"biterms", biterms.total()}}
                                         .dump(2) + "\n");
  spdlog::info("btm: {} topics from {} retained samples", cfg.topics, fit.retained_samples);
}

void do_select(StageContext& ctx) {
  const auto delta = read_matrix_csv(ctx.root / "btm/delta.csv");
  const auto stats = word_stats(delta.values);
  const auto family = build_family(delta.values, stats, ctx.config.fractions, ctx.config.selection);

  std::string stats_csv = "word,cv,max_prob\n";
  for (const auto& s : stats)
    stats_csv += fmt::format("{},{},{}\n", csv_field(delta.col_labels[static_cast<std::size_t>(s.word)]),
                             format_double(s.cv), format_double(s.max_prob));
  ctx.out.write("select/word_stats.csv", stats_csv);

  json entries = json::array();
  for (int k : family.fractions) {
    const auto& ids = family.word_sets.at(k);
    std::vector<std::string> labels;
    for (WordId id : ids) labels.push_back(delta.col_labels[static_cast<std::size_t>(id)]);
    ctx.out.write(x_file(k), to_csv({"topic", delta.row_labels, labels, family.matrices.at(k)}));
    entries.push_back({{"fraction", k}, {"words", ids.size()}, {"file", x_file(k)}, {"word_ids", ids}});
  }
  ctx.out.write("select/manifest.json",
                json{{"mode", ctx.config.selection == SelectionMode::intersection ? "intersection" : "union"},
                     {"fractions", entries}}
                        .dump(2) + "\n");
}

std::string chain_csv(const LsirmPosterior& post) {
  if (post.samples.empty()) return {};
  const auto& first = post.samples.front();
  std::string out = "iteration,log_posterior,sigma2,sigma_theta2";
  for (Eigen::Index i = 0; i < first.beta.size(); ++i) out += fmt::format(",beta_{}", i + 1);
  for (Eigen::Index j = 0; j < first.theta.size(); ++j) out += fmt::format(",theta_{}", j + 1);
  for (Eigen::Index i = 0; i < first.V.rows(); ++i)
    for (Eigen::Index c = 0; c < first.V.cols(); ++c) out += fmt::format(",v_{}_{}", i + 1, c + 1);
  for (Eigen::Index j = 0; j < first.U.rows(); ++j)
    for (Eigen::Index c = 0; c < first.U.cols(); ++c) out += fmt::format(",u_{}_{}", j + 1, c + 1);
  out += '\n';
  for (std::size_t s = 0; s < post.samples.size(); ++s) {
    const auto& st = post.samples[s];
    out += fmt::format("{},{},{},{}", post.sample_iterations[s], format_double(post.sample_log_posterior[s]),
                       format_double(st.sigma2), format_double(st.sigma_theta2));
    for (double v : st.beta) out += "," + format_double(v);
    for (double v : st.theta) out += "," + format_double(v);
    for (Eigen::Index i = 0; i < st.V.rows(); ++i)
      for (Eigen::Index c = 0; c < st.V.cols(); ++c) out += "," + format_double(st.V(i, c));
    for (Eigen::Index j = 0; j < st.U.rows(); ++j)
      for (Eigen::Index c = 0; c < st.U.cols(); ++c) out += "," + format_double(st.U(j, c));
    out += '\n';
  }
  return out;
}

void do_lsirm(StageContext& ctx) {
  const auto manifest = read_select_manifest(ctx.root);
  parallel_for(manifest.fractions.size(), ctx.config.jobs, [&](std::size_t index) {
    const int k = manifest.fractions[index];
    const auto x = read_matrix_csv(ctx.root / x_file(k));
    auto cfg = ctx.config.lsirm;
    cfg.seed = derive_seed(ctx.config.seed, Stage::lsirm, static_cast<std::uint64_t>(k));
    spdlog::info("lsirm: fitting X_{} ({} x {})", k, x.values.rows(), x.values.cols());
    const auto post = fit_lsirm(x.values, cfg);

    const auto dir = lsirm_dir(k);
    ctx.out.write(dir + "/A.csv", to_csv({"topic", x.row_labels, dim_labels(post.A.cols()), post.A}));
    ctx.out.write(dir + "/gamma.csv", to_csv({"topic", x.row_labels, x.col_labels, post.gamma}));
    json summary{{"fraction", k},
                 {"seed", cfg.seed},
                 {"retained_samples", post.retained},
                 {"reference_sample", post.reference_sample},
                 {"alignment_skipped", post.alignment_skipped},
                 {"sigma2_mean", post.mean.sigma2},
                 {"sigma_theta2_mean", post.mean.sigma_theta2},
                 {"beta_mean", std::vector<double>(post.mean.beta.begin(), post.mean.beta.end())},
                 {"acceptance",
                  {{"beta", post.acceptance.beta},
                   {"theta", post.acceptance.theta},
                   {"topic_positions", post.acceptance.topic_positions},
                   {"word_positions", post.acceptance.word_positions}}},
                 {"warnings", post.warnings},
                 {"config", to_json(ctx.config)["lsirm"]}};
    ctx.out.write(dir + "/summary.json", summary.dump(2) + "\n");
    if (ctx.config.dump_chains) ctx.out.write(dir + "/chain.csv", chain_csv(post));
  });
}

PositionFamily read_positions(const fs::path& root, const std::vector<int>& fractions) {
  std::map<int, Eigen::MatrixXd> positions;
  for (int k : fractions) positions.emplace(k, read_matrix_csv(root / (lsirm_dir(k) + "/A.csv")).values);
  return PositionFamily::from(std::move(positions));
}

void do_align(StageContext& ctx) {
  const auto manifest = read_select_manifest(ctx.root);
  auto family = read_positions(ctx.root, manifest.fractions);
  align_family(family, ctx.config.align);

  const auto topics = topic_labels(family.A.begin()->second.rows());
  const auto dims = dim_labels(family.R.cols());
  for (int k : family.fractions) {
    ctx.out.write("align/A_" + fraction_tag(k) + ".csv", to_csv({"topic", topics, dims, family.A.at(k)}));
    ctx.out.write("align/A_star_" + fraction_tag(k) + ".csv", to_csv({"topic", topics, dims, family.A_star.at(k)}));
    ctx.out.write("align/B_" + fraction_tag(k) + ".csv", to_csv({"topic", topics, dims, family.B.at(k)}));
  }
  json r = json::array();
  for (Eigen::Index i = 0; i < family.R.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < family.R.cols(); ++j) row.push_back(family.R(i, j));
    r.push_back(row);
  }
  ctx.out.write("align/manifest.json", json{{"fractions", family.fractions},
                                            {"baseline_k", family.baseline_k},
                                            {"baseline_overridden", ctx.config.align.baseline_k.has_value()},
                                            {"R", r},
                                            {"criterion", family.criterion},
                                            {"initial_criterion", family.initial_criterion},
                                            {"iterations", family.rotation_iterations},
                                            {"converged", family.rotation_converged}}
                                           .dump(2) + "\n");
  ctx.out.write("align/distance.csv", distance_csv(family));
  ctx.out.write("align/distance.svg", distance_svg(family));
  spdlog::info("align: baseline {}%, oblimin criterion {:.6g} -> {:.6g}", family.baseline_k, family.initial_criterion,
               family.criterion);
}

void do_score(StageContext& ctx) {
  const auto delta = read_matrix_csv(ctx.root / "btm/delta.csv");
  const auto manifest = read_select_manifest(ctx.root);
  std::vector<ScoreTable> tables;
  for (int k : manifest.fractions) {
    const auto& ids = manifest.word_sets.at(k);
    Eigen::MatrixXd sub(delta.values.rows(), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t c = 0; c < ids.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = delta.values.col(ids[c]);
    const auto gamma = read_matrix_csv(ctx.root / (lsirm_dir(k) + "/gamma.csv"));
    auto table = score_table(sub, gamma.values, ids, ctx.config.score);

    std::string csv = "topic,word_id,word,score,affinity,top\n";
    for (const auto& [topic, ranked] : table.top_words)
      for (const auto& w : ranked)
        csv += fmt::format("{},{},{},{},{},{}\n", topic + 1, w.word,
                           csv_field(delta.col_labels[static_cast<std::size_t>(w.word)]), format_double(w.score),
                           format_double(w.affinity), w.top ? 1 : 0);
    ctx.out.write(score_file(k), csv);
    tables.push_back(std::move(table));
  }

  std::string common = "topic,rank,word_id,word,mean_score\n";
  const int topics = static_cast<int>(delta.values.rows());
  for (int i = 0; i < topics; ++i) {
    std::vector<WordId> words;
    if (tables.size() >= 2) {
      words = intersect_top_words(tables, i);
    } else {
      for (const auto& w : tables.front().top_words.at(i))
        if (w.top) words.push_back(w.word);
    }
    for (std::size_t r = 0; r < words.size(); ++r) {
      double sum = 0.0;
      for (const auto& t : tables) {
        const auto col = std::find(t.words.begin(), t.words.end(), words[r]) - t.words.begin();
        sum += t.score(i, col);
      }
      common += fmt::format("{},{},{},{},{}\n", i + 1, r + 1, words[r],
                            csv_field(delta.col_labels[static_cast<std::size_t>(words[r])]),
                            format_double(sum / static_cast<double>(tables.size())));
    }
  }
  ctx.out.write("score/top_words.csv", common);
}

void do_plot(StageContext& ctx) {
  const auto align_doc = json::parse(read_file(ctx.root / "align/manifest.json"));
  const auto fractions = align_doc["fractions"].get<std::vector<int>>();
  const int baseline = align_doc["baseline_k"].get<int>();

  PositionFamily family;
  family.fractions = fractions;
  family.baseline_k = baseline;
  for (int k : fractions) family.B.emplace(k, read_matrix_csv(ctx.root / ("align/B_" + fraction_tag(k) + ".csv")).values);
  if (family.B.size() >= 2) {
    ctx.out.write("plots/trajectory.csv", trajectory_csv(family));
    ctx.out.write("plots/trajectory.svg", trajectory_svg(family));
  } else {
    spdlog::warn("plot: a single fraction has no trajectory; skipping the trajectory plot");
  }

  const auto vocab = read_vocabulary(ctx.root);
  const auto table = read_score_table(ctx.root / score_file(baseline));
  for (const auto& [topic, ranked] : table.top_words) {
    const auto stem = fmt::format("plots/score_affinity_k{}_topic{:02d}", fraction_tag(baseline), topic + 1);
    ctx.out.write(stem + ".csv", score_affinity_csv(table, topic, vocab.words()));
    ctx.out.write(stem + ".svg", score_affinity_svg(table, topic, vocab.words()));
  }
}

// ---------------------------------------------------------------------------

struct StageSpec {
  std::vector<StageId> upstream;
  json settings;
  void (*body)(StageContext&);
};

StageSpec spec_for(StageId stage, const PipelineConfig& c) {
  const auto cfg = to_json(c);
  switch (stage) {
    case StageId::ingest: return {{}, json::object(), do_ingest};
    case StageId::btm: return {{StageId::ingest}, {{"btm", cfg["btm"]}, {"seed", btm_config(c).seed}}, do_btm};
    case StageId::select: return {{StageId::btm}, cfg["select"], do_select};
    case StageId::lsirm: return {{StageId::select}, {{"lsirm", cfg["lsirm"]}, {"seed", c.seed}}, do_lsirm};
    case StageId::align: return {{StageId::lsirm, StageId::select}, cfg["align"], do_align};
    case StageId::score: return {{StageId::btm, StageId::select, StageId::lsirm}, cfg["score"], do_score};
    case StageId::plot: return {{StageId::ingest, StageId::align, StageId::score}, json::object(), do_plot};
  }
  throw NumericError("unknown stage");
}

std::string input_hash(StageId stage, const PipelineConfig& config, const StageSpec& spec) {
  std::string key = fmt::format("{}\n{}\n", stage_name(stage), spec.settings.dump());
  if (stage == StageId::ingest) {
    key += "corpus " + sha256_file(config.corpus) + "\n";
    key += "stoplist " + (config.stoplist.empty() ? std::string("-") : sha256_file(config.stoplist)) + "\n";
  }
  for (auto up : spec.upstream)
    for (const auto& [rel, hash] : upstream_outputs(config.out, up)) key += rel + " " + hash + "\n";
  return sha256_hex(key);
}

}  // namespace

StageRecord run_stage(StageId stage, const PipelineConfig& config, bool force) {
  const auto started = std::chrono::steady_clock::now();
  StageRecord record;
  record.name = std::string(stage_name(stage));
  try {
    const auto spec = spec_for(stage, config);
    record.input_hash = input_hash(stage, config, spec);

    if (!force) {
      if (const auto stamp = read_stamp(config.out, stage);
          stamp && (*stamp)["input_hash"] == record.input_hash && outputs_intact(config.out, (*stamp)["outputs"])) {
        record.skipped = true;
        record.outputs = (*stamp)["outputs"].get<std::map<std::string, std::string>>();
        spdlog::info("{}: up to date, skipped", record.name);
        return record;
      }
    }

    // A stale stamp must not survive a failed re-run.
    fs::remove(stamp_path(config.out, stage));
    StageOutputs outputs(config.out);
    StageContext ctx{config, config.out, outputs};
    spec.body(ctx);
    record.outputs = outputs.take();
    write_file_atomic(stamp_path(config.out, stage),
                      json{{"input_hash", record.input_hash}, {"outputs", record.outputs}}.dump(2) + "\n");
  } catch (const Error& e) {
    throw Error(tagged(record.name, e.what()), e.code());
  } catch (const json::exception& e) {
    throw DataError(record.name + ": malformed artifact: " + e.what());
  } catch (const fs::filesystem_error& e) {
    throw IoError(record.name + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(record.name + ": malformed artifact: " + e.what());
  }
  record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

RunManifest run_pipeline(const PipelineConfig& config) {
  config.validate(true);

  RunManifest manifest;
  manifest.version = TOPICNET_VERSION;
  manifest.seed = config.seed;
  manifest.config = to_json(config);

  auto write_manifest = [&] {
    write_file_atomic(config.out / "manifest.json", manifest.to_json().dump(2) + "\n");
  };
  fs::create_directories(config.out);
  for (auto stage : kAllStages) {
    try {
      manifest.stages.push_back(run_stage(stage, config));
    } catch (const std::exception& e) {
      manifest.error = e.what();
      write_manifest();
      throw;
    }
  }
  write_manifest();
  return manifest;
}

bool verify_manifest(const fs::path& out_dir, std::string* problem) {
  auto fail = [problem](std::string why) {
    if (problem) *problem = std::move(why);
    return false;
  };
  const auto path = out_dir / "manifest.json";
  if (!fs::is_regular_file(path)) return fail("no manifest.json in " + out_dir.string());
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    return fail(std::string("manifest.json: ") + e.what());
  }
  if (doc.contains("error")) return fail("run failed: " + doc["error"].get<std::string>());
  for (const auto& stage : doc["stages"])
    for (const auto& [rel, hash] : stage["outputs"].items()) {
      const auto artifact = out_dir / rel;
      if (!fs::is_regular_file(artifact)) return fail("missing artifact " + rel);
      if (sha256_file(artifact) != hash.get<std::string>()) return fail("hash mismatch for " + rel);
    }
  return true;
}

}  // namespace topicnet
