#include "topicnet/corpus.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "topicnet/error.hpp"

namespace topicnet {

WordId Vocabulary::add(std::string_view word) {
  if (auto it = index_.find(std::string(word)); it != index_.end()) return it->second;
  const auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(word);
  index_.emplace(words_.back(), id);
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  if (auto it = index_.find(std::string(word)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::string normalize_token(std::string_view raw) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!raw.empty() && is_space(raw.front())) raw.remove_prefix(1);
  while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);
  std::string out(raw);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Stoplist parse_stoplist(std::istream& in) {
  Stoplist words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto word = normalize_token(line);
    if (!word.empty()) words.insert(std::move(word));
  }
  return words;
}

Stoplist load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read stoplist " + path.string());
  return parse_stoplist(in);
}

Corpus parse_corpus(std::istream& in, const Stoplist& stoplist, std::string_view source) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(std::string(source), line_no, "expected `id<TAB>tokens`");
    auto id = normalize_token(std::string_view(line).substr(0, tab));
    if (id.empty()) throw ParseError(std::string(source), line_no, "empty document id");
    if (!seen_ids.insert(id).second) throw ParseError(std::string(source), line_no, "duplicate document id `" + id + "`");

    Document doc{std::move(id), {}};
    std::istringstream tokens(line.substr(tab + 1));
    std::string raw;
    while (tokens >> raw) {
      auto token = normalize_token(raw);
      if (token.empty() || stoplist.contains(token)) continue;
      corpus.vocabulary.add(token);
      doc.tokens.push_back(std::move(token));
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (in.bad()) throw IoError("read failure on " + std::string(source));
  return corpus;
}

Corpus ingest(const std::filesystem::path& path, const Stoplist& stoplist) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read corpus " + path.string());
  return parse_corpus(in, stoplist, path.string());
}

BitermSet extract_biterms(std::span<const WordId> tokens) {
  BitermSet set;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i + 1; j < tokens.size(); ++j) {
      if (tokens[i] == tokens[j]) continue;
      set.biterms.push_back(Biterm::make(tokens[i], tokens[j]));
    }
  }
  return set;
}

BitermSet extract_biterms(const Corpus& corpus) {
  BitermSet set;
  std::vector<WordId> ids;
  for (const auto& doc : corpus.documents) {
    ids.clear();
    for (const auto& token : doc.tokens) {
      auto id = corpus.vocabulary.find(token);
      if (!id) throw DataError("token `" + token + "` of document " + doc.id + " missing from vocabulary");
      ids.push_back(*id);
    }
    auto doc_set = extract_biterms(ids);
    set.biterms.insert(set.biterms.end(), doc_set.biterms.begin(), doc_set.biterms.end());
  }
  return set;
}

}  // namespace topicnet
