#include <sstream>

#include "convdist/dialog.hpp"
#include "convdist/error.hpp"
#include "doctest.h"

using namespace convdist;

namespace {

const char* kTwo =
    R"({"id":"a","utterances":[{"speaker":"Customer","text":"hi"}]})"
    "\n"
    R"({"id":"b","metadata":{"domain":"movies"},"utterances":[{"speaker":"Agent","text":"hello","acts":[{"act":"OFFER","slot":"time"},{"act":"OFFER","slot":"location"}]}]})"
    "\n";

ParseResult parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

}  // namespace

TEST_CASE("two records parse in order") {
  const auto r = parse(kTwo);
  REQUIRE(r.errors.empty());
  REQUIRE(r.corpus.size() == 2);
  CHECK(r.corpus.conversations[0].id == "a");
  CHECK(r.corpus.conversations[1].id == "b");
  CHECK(r.corpus.conversations[1].metadata.at("domain") == "movies");
  const auto& acts = r.corpus.conversations[1].utterances[0].acts;
  REQUIRE(acts.size() == 2);
  CHECK(acts[0].slot == "time");
  CHECK(acts[1].slot == "location");
  CHECK(r.corpus.find("b") == 1);
  CHECK_FALSE(r.corpus.find("z"));
  CHECK_THROWS_AS(r.corpus.at("z"), DataError);
}

TEST_CASE("serialize then parse is the identity") {
  const auto r = parse(kTwo);
  std::ostringstream out;
  write_corpus(out, r.corpus);
  const auto again = parse(out.str());
  REQUIRE(again.errors.empty());
  CHECK(again.corpus.conversations == r.corpus.conversations);
  std::ostringstream out2;
  write_corpus(out2, again.corpus);
  CHECK(out2.str() == out.str());
}

TEST_CASE("canonical serialization") {
  Conversation c;
  c.id = "x";
  c.utterances.push_back({"Agent", "ok", {{"GOODBYE", std::nullopt}}});
  CHECK(serialize_conversation(c) ==
        R"({"id":"x","utterances":[{"acts":[{"act":"GOODBYE"}],"speaker":"Agent","text":"ok"}]})");
}

TEST_CASE("malformed lines become positioned errors") {
  const std::string text = std::string(kTwo) + "\n" + "{not json\n" +
                           R"({"id":"c","utterances":[]})" + "\n" + R"({"id":"a","utterances":[{"speaker":"s","text":"t"}]})" +
                           "\n" + R"({"id":"d","utterances":[{"speaker":"s"}]})" + "\n";
  const auto r = parse(text);
  CHECK(r.corpus.size() == 2);
  REQUIRE(r.errors.size() == 4);
  CHECK(r.errors[0].line() == 4);
  CHECK(r.errors[1].line() == 5);
  CHECK(r.errors[2].line() == 6);
  CHECK(r.errors[3].line() == 7);
  CHECK(r.records == 6);
}

TEST_CASE("load_corpus reports the first error") {
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), DataError);
  CHECK_THROWS_AS(parse_conversation("[1,2]", 3), ParseError);
  try {
    parse_conversation(R"({"id":"x"})", 9);
  } catch (const ParseError& e) {
    CHECK(e.line() == 9);
  }
}

TEST_CASE("text normalization") {
  CHECK(normalize_text("  a \t b\n\nc  ") == "a b c");
  CHECK(normalize_text("cafe\xcc\x81") == "caf\xc3\xa9");
  CHECK(normalize_text("") == "");
  CHECK_THROWS_AS(normalize_text("bad \xff byte"), DataError);
}

TEST_CASE("validation finds every violation") {
  Corpus c;
  c.conversations.push_back({"", {{"A", "x", {}}}, {}});
  c.conversations.push_back({"dup", {{"A", "x", {}}}, {}});
  c.conversations.push_back({"dup", {}, {}});
  c.conversations.push_back({"u", {{"", "x", {}}, {"A", "   ", {}}, {"A", "y", {{" ", std::nullopt}}},
                                   {"A", "z", {{"ACT", std::string()}}}, {"A", "\xc3", {}}},
                             {}});
  const auto v = validate(c);
  REQUIRE(v.size() == 8);
  CHECK(v[0].message.find("empty") != std::string::npos);
  CHECK(v[1].conversation_id == "dup");
  std::size_t with_index = 0;
  for (const auto& x : v) with_index += x.utterance_index.has_value();
  CHECK(with_index == 5);

  Corpus ok;
  ok.conversations.push_back({"fine", {{"A", "x", {{"INFORM", "city"}}}}, {}});
  CHECK(validate(ok).empty());
}
