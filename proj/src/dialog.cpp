#include "convdist/dialog.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>

#include "json.hpp"

namespace convdist {

using nlohmann::json;

std::optional<std::size_t> Corpus::find(std::string_view id) const {
  for (std::size_t i = 0; i < conversations.size(); ++i) {
    if (conversations[i].id == id) return i;
  }
  return std::nullopt;
}

const Conversation& Corpus::at(std::string_view id) const {
  auto idx = find(id);
  if (!idx) throw DataError("unknown conversation id '" + std::string(id) + "'");
  return conversations[*idx];
}

std::string normalize_text(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  int32_t needed = 0;
  u_strFromUTF8(nullptr, 0, &needed, text.data(), static_cast<int32_t>(text.size()), &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
    throw DataError("invalid UTF-8 in text");
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString src;
  UChar* buf = src.getBuffer(needed + 1);
  u_strFromUTF8(buf, needed + 1, &needed, text.data(), static_cast<int32_t>(text.size()), &status);
  src.releaseBuffer(needed);
  if (U_FAILURE(status)) throw DataError("invalid UTF-8 in text");

  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  icu::UnicodeString normalized = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw DataError("NFC normalization failed");

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < normalized.length();) {
    UChar32 cp = normalized.char32At(i);
    i += U16_LENGTH(cp);
    if (u_isUWhiteSpace(cp)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) {
      collapsed.append(static_cast<UChar>(0x20));
      pending_space = false;
    }
    collapsed.append(cp);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

namespace {

std::string require_string(const json& obj, const char* field, const char* where) {
  auto it = obj.find(field);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing field '") + field + "' in " + where);
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + field + "' in " + where + " must be a string");
  return it->get<std::string>();
}

ActAnnotation act_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("act annotation must be an object");
  ActAnnotation act;
  act.act = require_string(j, "act", "act annotation");
  if (auto it = j.find("slot"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw std::invalid_argument("field 'slot' must be a string");
    act.slot = it->get<std::string>();
  }
  return act;
}

Utterance utterance_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("utterance must be an object");
  Utterance u;
  u.speaker = require_string(j, "speaker", "utterance");
  u.text = require_string(j, "text", "utterance");
  if (auto it = j.find("acts"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw std::invalid_argument("field 'acts' must be an array");
    for (const auto& a : *it) u.acts.push_back(act_from_json(a));
  }
  return u;
}

json to_json(const Conversation& c) {
  json j = json::object();
  j["id"] = c.id;
  if (!c.metadata.empty()) {
    json meta = json::object();
    for (const auto& [k, v] : c.metadata) meta[k] = v;
    j["metadata"] = std::move(meta);
  }
  json utts = json::array();
  for (const auto& u : c.utterances) {
    json ju = json::object();
    ju["speaker"] = u.speaker;
    ju["text"] = u.text;
    if (!u.acts.empty()) {
      json acts = json::array();
      for (const auto& a : u.acts) {
        json ja = json::object();
        ja["act"] = a.act;
        if (a.slot) ja["slot"] = *a.slot;
        acts.push_back(std::move(ja));
      }
      ju["acts"] = std::move(acts);
    }
    utts.push_back(std::move(ju));
  }
  j["utterances"] = std::move(utts);
  return j;
}

}  // namespace

Conversation parse_conversation(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_no, std::string("malformed record: ") + e.what());
  }
  try {
    if (!j.is_object()) throw std::invalid_argument("record must be an object");
    Conversation c;
    c.id = require_string(j, "id", "record");
    if (auto it = j.find("metadata"); it != j.end() && !it->is_null()) {
      if (!it->is_object()) throw std::invalid_argument("field 'metadata' must be an object");
      for (const auto& [k, v] : it->items()) {
        if (!v.is_string()) throw std::invalid_argument("metadata value for '" + k + "' must be a string");
        c.metadata.emplace(k, v.get<std::string>());
      }
    }
    auto it = j.find("utterances");
    if (it == j.end() || !it->is_array()) throw std::invalid_argument("missing array field 'utterances'");
    for (const auto& u : *it) c.utterances.push_back(utterance_from_json(u));
    if (c.utterances.empty()) throw std::invalid_argument("empty utterance list");
    return c;
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
}

ParseResult parse_corpus(std::istream& in) {
  ParseResult result;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++result.records;
    try {
      Conversation c = parse_conversation(line, line_no);
      if (!seen.insert(c.id).second) {
        result.errors.emplace_back(line_no, "duplicate id '" + c.id + "'");
        continue;
      }
      result.corpus.conversations.push_back(std::move(c));
    } catch (const ParseError& e) {
      result.errors.push_back(e);
    }
  }
  return result;
}

ParseResult parse_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  return parse_corpus(in);
}

Corpus load_corpus(const std::string& path) {
  ParseResult r = parse_corpus_file(path);
  if (!r.errors.empty()) {
    const ParseError& first = r.errors.front();
    throw ParseError(first.line(), path + ": " + first.reason());
  }
  return std::move(r.corpus);
}

std::string serialize_conversation(const Conversation& conversation) {
  return to_json(conversation).dump();
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& c : corpus.conversations) out << serialize_conversation(c) << '\n';
}

std::vector<Violation> validate(const Corpus& corpus) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const auto& c : corpus.conversations) {
    if (c.id.empty()) out.push_back({c.id, std::nullopt, "empty conversation id"});
    if (!seen.insert(c.id).second) out.push_back({c.id, std::nullopt, "duplicate conversation id"});
    if (c.utterances.empty()) out.push_back({c.id, std::nullopt, "empty utterance list"});
    for (std::size_t i = 0; i < c.utterances.size(); ++i) {
      const Utterance& u = c.utterances[i];
      if (u.speaker.empty()) out.push_back({c.id, i, "empty speaker"});
      std::string norm;
      try {
        norm = normalize_text(u.text);
      } catch (const DataError&) {
        out.push_back({c.id, i, "text is not valid UTF-8"});
        continue;
      }
      if (norm.empty()) out.push_back({c.id, i, "empty text"});
      for (const auto& a : u.acts) {
        std::string act = normalize_text(a.act);
        if (act.empty()) out.push_back({c.id, i, "empty act label"});
        else if (act.find(' ') != std::string::npos) out.push_back({c.id, i, "act label '" + a.act + "' contains whitespace"});
        if (a.slot && a.slot->empty()) out.push_back({c.id, i, "empty slot label"});
      }
    }
  }
  return out;
}

}  // namespace convdist
