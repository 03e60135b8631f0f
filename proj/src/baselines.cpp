#include "convdist/baselines.hpp"

namespace convdist {

std::vector<double> mean_embedding(const Conversation& c, const EmbeddingStore& store) {
  if (c.utterances.empty()) throw DataError("mean embedding of an empty conversation");
  std::vector<double> mean(store.dim(), 0.0);
  for (const Utterance& u : c.utterances) {
    const std::span<const float> v = store.lookup(u, c.id);
    for (std::size_t k = 0; k < v.size(); ++k) mean[k] += v[k];
  }
  for (double& x : mean) x /= static_cast<double>(c.size());
  return mean;
}

double avg_sem_dist(const Conversation& c1, const Conversation& c2, const EmbeddingStore& store) {
  const auto m1 = mean_embedding(c1, store);
  const auto m2 = mean_embedding(c2, store);
  try {
    return cosine_distance(m1, m2);
  } catch (const DimensionMismatch&) {
    throw;
  } catch (const DataError&) {
    throw DataError("avgSemDist: mean vector of '" + c1.id + "' or '" + c2.id + "' is all-zero");
  }
}

double d2v_dist(std::string_view id1, std::string_view id2, const DocVectorStore& docs) {
  auto get = [&](std::string_view id) {
    if (!docs.contains(id)) throw MissingEmbedding("no document vector for conversation '" + std::string(id) + "'");
    return docs.at_key(id);
  };
  return cosine_distance(get(id1), get(id2));
}

}  // namespace convdist
