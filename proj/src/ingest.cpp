#include "convdist/ingest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace convdist {

using nlohmann::json;

namespace {

json read_json(std::istream& in, const std::string& name) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(name + ": " + e.what());
  }
}

bool blank(const std::string& text) {
  try {
    return normalize_text(text).empty();
  } catch (const DataError&) {
    return true;
  }
}

void add_unique(IngestResult& out, std::set<std::string>& seen, Conversation c) {
  if (c.utterances.empty()) {
    out.warnings.push_back("dialog '" + c.id + "' has no usable utterances; skipped");
    return;
  }
  if (!seen.insert(c.id).second) {
    out.warnings.push_back("duplicate dialog id '" + c.id + "'; later copy skipped");
    return;
  }
  out.corpus.conversations.push_back(std::move(c));
}

}  // namespace

void ingest_sgd_file(std::istream& in, const std::string& source_name, IngestResult& out) {
  const json doc = read_json(in, source_name);
  if (!doc.is_array()) throw DataError(source_name + ": expected an array of dialogues");
  std::set<std::string> seen;
  for (const auto& c : out.corpus.conversations) seen.insert(c.id);
  try {
    for (const auto& d : doc) {
      Conversation c;
      c.id = d.at("dialogue_id").get<std::string>();
      c.metadata["source"] = "sgd";
      c.metadata["file"] = source_name;
      if (d.contains("services")) {
        std::string services;
        for (const auto& s : d["services"]) services += (services.empty() ? "" : ",") + s.get<std::string>();
        c.metadata["services"] = services;
      }
      std::size_t turn_no = 0;
      for (const auto& t : d.at("turns")) {
        Utterance u;
        u.speaker = t.at("speaker").get<std::string>();
        u.text = t.at("utterance").get<std::string>();
        if (t.contains("frames")) {
          for (const auto& f : t["frames"]) {
            if (!f.contains("actions")) continue;
            for (const auto& a : f["actions"]) {
              ActAnnotation act{a.at("act").get<std::string>(), std::nullopt};
              const std::string slot = a.value("slot", "");
              if (!slot.empty()) act.slot = slot;
              u.acts.push_back(std::move(act));
            }
          }
        }
        if (blank(u.text)) {
          out.warnings.push_back("dialog '" + c.id + "' turn " + std::to_string(turn_no) + ": empty text; skipped");
        } else {
          c.utterances.push_back(std::move(u));
        }
        ++turn_no;
      }
      add_unique(out, seen, std::move(c));
    }
  } catch (const json::exception& e) {
    throw DataError(source_name + ": unexpected SGD structure: " + e.what());
  }
}

IngestResult ingest_sgd(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("dialogues_", 0) == 0 && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no dialogues_*.json files in '" + dir + "'");
  IngestResult out;
  for (const auto& p : files) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot open '" + p.string() + "'");
    ingest_sgd_file(in, p.filename().string(), out);
  }
  return out;
}

IngestResult ingest_msdialog(std::istream& in) {
  const json doc = read_json(in, "msdialog");
  if (!doc.is_object()) throw DataError("msdialog: expected an object keyed by dialog id");
  IngestResult out;
  std::set<std::string> seen;
  try {
    for (const auto& [key, d] : doc.items()) {
      Conversation c;
      c.id = "msdialog-" + key;
      c.metadata["source"] = "msdialog";
      if (d.contains("category") && d["category"].is_string()) c.metadata["category"] = d["category"].get<std::string>();
      std::size_t turn_no = 0;
      for (const auto& t : d.at("utterances")) {
        Utterance u;
        u.speaker = t.at("actor_type").get<std::string>();
        u.text = t.at("utterance").get<std::string>();
        std::istringstream tags(t.value("tags", ""));
        for (std::string tag; tags >> tag;) u.acts.push_back({tag, std::nullopt});
        if (blank(u.text)) {
          out.warnings.push_back("dialog '" + c.id + "' utterance " + std::to_string(turn_no) + ": empty text; skipped");
        } else {
          c.utterances.push_back(std::move(u));
        }
        ++turn_no;
      }
      add_unique(out, seen, std::move(c));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("msdialog: unexpected structure: ") + e.what());
  }
  return out;
}

IngestResult ingest_msdialog(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open '" + file + "'");
  return ingest_msdialog(in);
}

}  // namespace convdist
