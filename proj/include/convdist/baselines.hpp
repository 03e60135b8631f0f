#pragma once

#include <string_view>
#include <vector>

#include "convdist/dialog.hpp"
#include "convdist/embedding_store.hpp"

namespace convdist {

/// Mean of the conversation's utterance vectors.
std::vector<double> mean_embedding(const Conversation& c, const EmbeddingStore& store);

/// Cosine distance between mean utterance embeddings (avgSemDist).
double avg_sem_dist(const Conversation& c1, const Conversation& c2, const EmbeddingStore& store);

/// Document vectors keyed by conversation id, in the embedding-store file format.
using DocVectorStore = EmbeddingStore;

/// Cosine distance between two stored document vectors (d2vDist).
double d2v_dist(std::string_view id1, std::string_view id2, const DocVectorStore& docs);

}  // namespace convdist
