#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "convdist/dialog.hpp"
#include "convdist/embedding_store.hpp"

namespace convdist {

enum class SpeakerMode {
  Alternating,   // Customer/Agent turns; each speaker has its own act inventory and embedding region
  CrossSpeaker,  // shared inventory; any speaker may utter any paraphrase
  SingleSpeaker  // every utterance by "Customer"
};

struct SynthConfig {
  std::size_t conversations = 300;
  std::size_t skeletons = 8;
  std::size_t paraphrases = 6;  // paraphrase texts per semantic cluster (at most 8)
  double noise = 0.15;          // per-step probability of a drop / insert / replace edit
  std::size_t min_len = 6;
  std::size_t max_len = 12;
  std::size_t dim = 64;
  double intra_bound = 0.15;  // paraphrase pairs stay strictly below this cosine distance
  bool reorder_pairs = true;   // every second skeleton reorders the turns of the one before it
  SpeakerMode speakers = SpeakerMode::Alternating;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

struct SynthCorpus {
  Corpus corpus;
  EmbeddingStore store;
  std::vector<std::size_t> skeleton_of;  // skeleton index per conversation
};

/// Dialogs generated from act-annotated flow skeletons with paraphrase
/// variation, plus matching synthetic utterance embeddings: paraphrases of one
/// act/slot cluster sit in a tight cone around the cluster centroid. In
/// Alternating mode the two speakers occupy opposite half-spaces, so cross-
/// speaker pairs have cosine distance above 1. Deterministic in the seed.
SynthCorpus synth_corpus(const SynthConfig& cfg);

}  // namespace convdist
