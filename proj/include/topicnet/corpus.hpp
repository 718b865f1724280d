#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace topicnet {

using WordId = std::int32_t;

struct Document {
  std::string id;
  std::vector<std::string> tokens;
};

/// Words in order of first appearance; ids are dense in [0, size()).
class Vocabulary {
 public:
  WordId add(std::string_view word);
  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocabulary;
};

using Stoplist = std::unordered_set<std::string>;

/// An unordered word pair stored with the smaller id first.
struct Biterm {
  WordId first;
  WordId second;

  static Biterm make(WordId a, WordId b) noexcept { return a < b ? Biterm{a, b} : Biterm{b, a}; }
  friend bool operator==(const Biterm&, const Biterm&) = default;
  friend auto operator<=>(const Biterm&, const Biterm&) = default;
};

/// Biterms with multiplicity, one entry per occurrence, in document order.
struct BitermSet {
  std::vector<Biterm> biterms;
  std::size_t total() const noexcept { return biterms.size(); }
};

/// Lowercases ASCII and strips surrounding whitespace.
std::string normalize_token(std::string_view raw);

/// One word per line; blank lines and `#` comments ignored.
Stoplist parse_stoplist(std::istream& in);
Stoplist load_stoplist(const std::filesystem::path& path);

/// Lines of the form `id<TAB>token token ...`. Blank lines are skipped.
/// `source` names the input in parse errors.
Corpus parse_corpus(std::istream& in, const Stoplist& stoplist, std::string_view source = "<stream>");
Corpus ingest(const std::filesystem::path& path, const Stoplist& stoplist);

/// All unordered position pairs per document, self-pairs dropped.
BitermSet extract_biterms(const Corpus& corpus);
BitermSet extract_biterms(std::span<const WordId> document_tokens);

}  // namespace topicnet
