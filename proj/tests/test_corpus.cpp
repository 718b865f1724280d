#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "topicnet/corpus.hpp"
#include "topicnet/error.hpp"

using namespace topicnet;

namespace {

Corpus parse(const std::string& text, const Stoplist& stop = {}) {
  std::istringstream in(text);
  return parse_corpus(in, stop, "test");
}

std::vector<std::pair<WordId, WordId>> pairs_of(const BitermSet& set) {
  std::vector<std::pair<WordId, WordId>> out;
  for (const auto& b : set.biterms) out.emplace_back(b.first, b.second);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("stoplisted tokens are dropped") {
    const auto c = parse("d1\tfever cough data\n", {"data"});
    REQUIRE(c.documents.size() == 1);
    CHECK(c.documents[0].id == "d1");
    CHECK(c.documents[0].tokens == std::vector<std::string>{"fever", "cough"});
    CHECK(c.vocabulary.size() == 2);
  }

  TEST_CASE("empty input gives an empty corpus that btm refuses") {
    const auto c = parse("");
    CHECK(c.documents.empty());
    CHECK(c.vocabulary.empty());
    BtmConfig config;
    config.topics = 2;
    config.iterations = 2;
    config.burn_in = 0;
    config.thinning = 1;
    CHECK_THROWS_AS(fit_btm(extract_biterms(c), c.vocabulary.size(), config), DataError);
  }

  TEST_CASE("fully stoplisted document is kept with no tokens") {
    const auto c = parse("d1\tcase data\nd2\tlung scan\n", {"case", "data"});
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[0].tokens.empty());
    CHECK(extract_biterms(c).total() == 1);
  }

  TEST_CASE("tokens are lowercased and vocabulary follows first appearance") {
    const auto c = parse("a\tLung  SCAN\r\n\nb\tscan ct\n");
    CHECK(c.vocabulary.words() == std::vector<std::string>{"lung", "scan", "ct"});
    CHECK(c.vocabulary.find("scan") == 1);
    CHECK_FALSE(c.vocabulary.find("mask").has_value());
  }

  TEST_CASE("malformed lines raise parse errors with the line number") {
    try {
      parse("d1\tok\nno tab here\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.code() == ExitCode::data);
    }
    CHECK_THROWS_AS(parse("d1\ta\nd1\tb\n"), ParseError);
    CHECK_THROWS_AS(parse("\tno id\n"), ParseError);
  }

  TEST_CASE("stoplist file ignores comments and blank lines") {
    std::istringstream in("# header\nvirus\n\n  Data \n");
    const auto stop = parse_stoplist(in);
    CHECK(stop.size() == 2);
    CHECK(stop.contains("virus"));
    CHECK(stop.contains("data"));
  }

  TEST_CASE("bundled stoplist holds the 42 filtered keywords") {
    const auto stop = load_stoplist(std::filesystem::path(TOPICNET_DATA) / "stoplist.txt");
    CHECK(stop.size() == 42);
    for (const char* w : {"p.001", "z9.738", "coronaviru", "e.g.", "l.", "death"}) CHECK(stop.contains(w));
  }

  TEST_CASE("ingest of a missing file is an io error") {
    CHECK_THROWS_AS(ingest("/definitely/not/here.tsv", {}), IoError);
  }

  TEST_CASE("biterms of [a,b,c] are the three unordered pairs") {
    const std::vector<WordId> doc{0, 1, 2};
    const auto set = extract_biterms(doc);
    CHECK(set.total() == 3);
    CHECK(pairs_of(set) == std::vector<std::pair<WordId, WordId>>{{0, 1}, {0, 2}, {1, 2}});
  }

  TEST_CASE("a single token has no biterm") {
    const std::vector<WordId> doc{4};
    CHECK(extract_biterms(doc).total() == 0);
  }

  TEST_CASE("[a,a,b] keeps (a,b) twice and drops the self-pair") {
    const std::vector<WordId> doc{0, 0, 1};
    const auto set = extract_biterms(doc);
    CHECK(set.total() == 2);
    CHECK(pairs_of(set) == std::vector<std::pair<WordId, WordId>>{{0, 1}, {0, 1}});
  }

  TEST_CASE("biterm count matches the distinct-position pair oracle") {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<WordId> doc(static_cast<std::size_t>(testing::uniform_int(rng, 0, 15)));
      for (auto& w : doc) w = testing::uniform_int(rng, 0, 4);
      std::size_t expected = 0;
      for (std::size_t i = 0; i < doc.size(); ++i)
        for (std::size_t j = i + 1; j < doc.size(); ++j) expected += doc[i] != doc[j];
      const auto set = extract_biterms(doc);
      CHECK(set.total() == expected);
      for (const auto& b : set.biterms) CHECK(b.first < b.second);
    }
  }
}
