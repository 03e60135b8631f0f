#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "convdist/error.hpp"

namespace convdist {

struct ActAnnotation {
  std::string act;
  std::optional<std::string> slot;

  bool operator==(const ActAnnotation&) const = default;
};

struct Utterance {
  std::string speaker;
  std::string text;  // verbatim; see normalize_text() for the keyed form
  std::vector<ActAnnotation> acts;

  bool operator==(const Utterance&) const = default;
};

struct Conversation {
  std::string id;
  std::vector<Utterance> utterances;
  std::map<std::string, std::string> metadata;

  std::size_t size() const noexcept { return utterances.size(); }
  bool operator==(const Conversation&) const = default;
};

inline constexpr std::string_view kCorpusFormatVersion = "1";

struct Corpus {
  std::vector<Conversation> conversations;
  std::string format_version{kCorpusFormatVersion};

  std::size_t size() const noexcept { return conversations.size(); }
  /// Index of the conversation with the given id, or nullopt.
  std::optional<std::size_t> find(std::string_view id) const;
  const Conversation& at(std::string_view id) const;
};

/// Unicode NFC, trim, and collapse internal whitespace runs to one U+0020.
/// Case is preserved. Throws DataError on invalid UTF-8.
std::string normalize_text(std::string_view text);

struct ParseResult {
  Corpus corpus;
  std::vector<ParseError> errors;
  std::size_t records = 0;  // non-blank lines seen; == corpus.size() + errors.size()
};

/// Reads one conversation object per line. Blank lines are not records.
/// Malformed records, duplicate ids and empty utterance lists become positioned
/// errors; the remaining records are kept in input order.
ParseResult parse_corpus(std::istream& in);
ParseResult parse_corpus_file(const std::string& path);

/// Like parse_corpus_file but throws the first ParseError, if any.
Corpus load_corpus(const std::string& path);

/// One record per line, keys in sorted order, empty optional fields omitted.
void write_corpus(std::ostream& out, const Corpus& corpus);
std::string serialize_conversation(const Conversation& conversation);
Conversation parse_conversation(std::string_view line, std::size_t line_no = 0);

struct Violation {
  std::string conversation_id;
  std::optional<std::size_t> utterance_index;
  std::string message;
};

std::vector<Violation> validate(const Corpus& corpus);

}  // namespace convdist
