#include "topicnet/config.hpp"

#include <charconv>
#include <fstream>

#include "topicnet/error.hpp"

namespace topicnet {

using nlohmann::json;

void PipelineConfig::validate(bool check_paths) const {
  if (corpus.empty()) throw ConfigError("config: corpus path is required");
  if (check_paths) {
    if (!std::filesystem::is_regular_file(corpus)) throw ConfigError("config: corpus file not found: " + corpus.string());
    if (!stoplist.empty() && !std::filesystem::is_regular_file(stoplist))
      throw ConfigError("config: stoplist file not found: " + stoplist.string());
  }
  if (jobs < 1) throw ConfigError("config: jobs must be at least 1");
  if (fractions.empty()) throw ConfigError("config: no selector fractions");
  for (int k : fractions)
    if (k <= 0 || k > 100) throw ConfigError("config: fraction " + std::to_string(k) + "% outside (0, 100]");
  btm.validate();
  lsirm.validate();
  score.validate();
  if (lsirm.dim < 2) throw ConfigError("config: oblique rotation needs lsirm.dim >= 2");
}

json default_config_json() {
  return json{
      {"corpus", ""},
      {"stoplist", ""},
      {"out", "out"},
      {"seed", 1},
      {"jobs", 1},
      {"btm",
       {{"topics", 20}, {"alpha", 3.0}, {"beta", 0.01}, {"iterations", 70000}, {"burn_in", 20000}, {"thinning", 100}}},
      {"select", {{"fractions", "40..60"}, {"mode", "intersection"}}},
      {"lsirm",
       {{"dim", 2},
        {"iterations", 55000},
        {"burn_in", 5000},
        {"thinning", 5},
        {"jump_beta", 0.28},
        {"jump_theta", 1.0},
        {"jump_latent", 0.06},
        {"prior_a", 0.001},
        {"prior_b", 0.001},
        {"prior_a_theta", 0.001},
        {"prior_b_theta", 0.001},
        {"dump_chain", false}}},
      {"align",
       {{"baseline_k", nullptr},
        {"oblimin_gamma", 0.0},
        {"max_iterations", 1000},
        {"gradient_tolerance", 1e-5},
        {"improvement_tolerance", 1e-8},
        {"random_starts", 10}}},
      {"score", {{"weights", {0.25, 0.25, 0.25, 0.25}}, {"top_fraction", 0.2}}},
  };
}

namespace {

void check_known_keys(const json& defaults, const json& overrides, const std::string& prefix) {
  for (const auto& [key, value] : overrides.items()) {
    const auto path = prefix.empty() ? key : prefix + "." + key;
    if (!defaults.contains(key)) throw ConfigError("config: unknown key `" + path + "`");
    if (defaults[key].is_object()) {
      if (!value.is_object()) throw ConfigError("config: `" + path + "` must be an object");
      check_known_keys(defaults[key], value, path);
    }
  }
}

std::vector<int> fractions_from(const json& v) {
  if (v.is_string()) return parse_fractions(v.get<std::string>());
  if (v.is_array()) return v.get<std::vector<int>>();
  throw ConfigError("config: select.fractions must be a range string or a list");
}

}  // namespace

PipelineConfig config_from_json(const json& overrides) {
  auto doc = default_config_json();
  if (!overrides.is_null()) {
    if (!overrides.is_object()) throw ConfigError("config: top level must be an object");
    check_known_keys(doc, overrides, "");
    doc.merge_patch(overrides);
    // merge_patch drops keys set to null; restore the nullable ones.
    if (!doc["align"].contains("baseline_k")) doc["align"]["baseline_k"] = nullptr;
  }

  PipelineConfig c;
  try {
    c.corpus = doc["corpus"].get<std::string>();
    c.stoplist = doc["stoplist"].get<std::string>();
    c.out = doc["out"].get<std::string>();
    c.seed = doc["seed"].get<std::uint64_t>();
    c.jobs = doc["jobs"].get<int>();

    const auto& b = doc["btm"];
    c.btm.topics = b["topics"].get<int>();
    c.btm.alpha = b["alpha"].get<double>();
    c.btm.beta = b["beta"].get<double>();
    c.btm.iterations = b["iterations"].get<int>();
    c.btm.burn_in = b["burn_in"].get<int>();
    c.btm.thinning = b["thinning"].get<int>();

    const auto& s = doc["select"];
    c.fractions = fractions_from(s["fractions"]);
    const auto mode = s["mode"].get<std::string>();
    if (mode == "intersection")
      c.selection = SelectionMode::intersection;
    else if (mode == "union")
      c.selection = SelectionMode::union_;
    else
      throw ConfigError("config: select.mode must be `intersection` or `union`");

    const auto& l = doc["lsirm"];
    c.lsirm.dim = l["dim"].get<int>();
    c.lsirm.iterations = l["iterations"].get<int>();
    c.lsirm.burn_in = l["burn_in"].get<int>();
    c.lsirm.thinning = l["thinning"].get<int>();
    c.lsirm.jump_beta = l["jump_beta"].get<double>();
    c.lsirm.jump_theta = l["jump_theta"].get<double>();
    c.lsirm.jump_latent = l["jump_latent"].get<double>();
    c.lsirm.prior_a = l["prior_a"].get<double>();
    c.lsirm.prior_b = l["prior_b"].get<double>();
    c.lsirm.prior_a_theta = l["prior_a_theta"].get<double>();
    c.lsirm.prior_b_theta = l["prior_b_theta"].get<double>();
    c.dump_chains = l["dump_chain"].get<bool>();
    c.lsirm.keep_samples = c.dump_chains;

    const auto& a = doc["align"];
    if (!a["baseline_k"].is_null()) c.align.baseline_k = a["baseline_k"].get<int>();
    c.align.oblimin.gamma = a["oblimin_gamma"].get<double>();
    c.align.oblimin.max_iterations = a["max_iterations"].get<int>();
    c.align.oblimin.gradient_tolerance = a["gradient_tolerance"].get<double>();
    c.align.oblimin.improvement_tolerance = a["improvement_tolerance"].get<double>();
    c.align.oblimin.random_starts = a["random_starts"].get<int>();
    if (c.align.oblimin.random_starts < 0) throw ConfigError("config: align.random_starts must be non-negative");

    const auto& sc = doc["score"];
    const auto weights = sc["weights"].get<std::vector<double>>();
    if (weights.size() != 4) throw ConfigError("config: score.weights needs four entries");
    std::copy(weights.begin(), weights.end(), c.score.weights.begin());
    c.score.top_fraction = sc["top_fraction"].get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

json to_json(const PipelineConfig& c) {
  json fractions = json::array();
  for (int k : c.fractions) fractions.push_back(k);
  return json{
      {"corpus", c.corpus.string()},
      {"stoplist", c.stoplist.string()},
      {"out", c.out.string()},
      {"seed", c.seed},
      {"jobs", c.jobs},
      {"btm",
       {{"topics", c.btm.topics},
        {"alpha", c.btm.alpha},
        {"beta", c.btm.beta},
        {"iterations", c.btm.iterations},
        {"burn_in", c.btm.burn_in},
        {"thinning", c.btm.thinning}}},
      {"select", {{"fractions", fractions}, {"mode", c.selection == SelectionMode::intersection ? "intersection" : "union"}}},
      {"lsirm",
       {{"dim", c.lsirm.dim},
        {"iterations", c.lsirm.iterations},
        {"burn_in", c.lsirm.burn_in},
        {"thinning", c.lsirm.thinning},
        {"jump_beta", c.lsirm.jump_beta},
        {"jump_theta", c.lsirm.jump_theta},
        {"jump_latent", c.lsirm.jump_latent},
        {"prior_a", c.lsirm.prior_a},
        {"prior_b", c.lsirm.prior_b},
        {"prior_a_theta", c.lsirm.prior_a_theta},
        {"prior_b_theta", c.lsirm.prior_b_theta},
        {"dump_chain", c.dump_chains}}},
      {"align",
       {{"baseline_k", c.align.baseline_k ? json(*c.align.baseline_k) : json(nullptr)},
        {"oblimin_gamma", c.align.oblimin.gamma},
        {"max_iterations", c.align.oblimin.max_iterations},
        {"gradient_tolerance", c.align.oblimin.gradient_tolerance},
        {"improvement_tolerance", c.align.oblimin.improvement_tolerance},
        {"random_starts", c.align.oblimin.random_starts}}},
      {"score", {{"weights", c.score.weights}, {"top_fraction", c.score.top_fraction}}},
  };
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  for (const char* key : {"corpus", "stoplist"}) {
    if (doc.contains(key) && doc[key].is_string()) {
      std::filesystem::path p = doc[key].get<std::string>();
      if (!p.empty() && p.is_relative()) doc[key] = (base / p).lexically_normal().string();
    }
  }
  return doc;
}

std::vector<int> parse_fractions(std::string_view spec) {
  auto to_int = [spec](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw ConfigError("config: bad fraction spec `" + std::string(spec) + "`");
    return v;
  };
  std::vector<int> out;
  if (const auto dots = spec.find(".."); dots != std::string_view::npos) {
    auto rest = spec.substr(dots + 2);
    int step = 1;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
      step = to_int(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const int lo = to_int(spec.substr(0, dots)), hi = to_int(rest);
    if (step < 1 || lo > hi) throw ConfigError("config: bad fraction range `" + std::string(spec) + "`");
    for (int k = lo; k <= hi; k += step) out.push_back(k);
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      auto end = spec.find(',', start);
      if (end == std::string_view::npos) end = spec.size();
      out.push_back(to_int(spec.substr(start, end - start)));
      start = end + 1;
    }
  }
  if (out.empty()) throw ConfigError("config: empty fraction spec");
  return out;
}

void set_dotted(json& doc, std::string_view key, std::string_view value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part(key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (dot == std::string_view::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[part] = parsed.is_discarded() ? json(std::string(value)) : parsed;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

namespace {
void collect_leaves(const json& doc, const std::string& prefix, std::vector<std::string>& out) {
  for (const auto& [key, value] : doc.items()) {
    const auto path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object())
      collect_leaves(value, path, out);
    else
      out.push_back(path);
  }
}
}  // namespace

std::vector<std::string> leaf_keys(const json& doc) {
  std::vector<std::string> out;
  collect_leaves(doc, "", out);
  return out;
}

}  // namespace topicnet
