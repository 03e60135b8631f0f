#pragma once

#include <istream>
#include <string>
#include <vector>

#include "convdist/dialog.hpp"

namespace convdist {

struct IngestResult {
  Corpus corpus;
  std::vector<std::string> warnings;  // skipped utterances / dialogs
};

/// Schema-Guided Dialogue: every dialogues_*.json file in `dir`, in filename
/// order. Speakers keep their source labels (USER / SYSTEM); each action
/// becomes an ActAnnotation, with an empty slot treated as absent.
IngestResult ingest_sgd(const std::string& dir);
void ingest_sgd_file(std::istream& in, const std::string& source_name, IngestResult& out);

/// MSDialog-Intent style JSON: an object of dialog id -> {category?,
/// utterances: [{actor_type, utterance, tags}]}. Every space-separated intent
/// tag becomes a slot-less ActAnnotation, in source order.
IngestResult ingest_msdialog(const std::string& file);
IngestResult ingest_msdialog(std::istream& in);

}  // namespace convdist
