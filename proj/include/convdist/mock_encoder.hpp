#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "convdist/dialog.hpp"
#include "convdist/embedding_store.hpp"

namespace convdist {

/// Deterministic stand-in for a sentence encoder, used to build test fixtures
/// and to time an extraction-inclusive run without a model download.
///
/// Text is lowercased and split into alphanumeric words (apostrophes kept);
/// each unigram and bigram is projected to a pseudo-random Gaussian vector
/// seeded by its FNV-1a hash, the projections are averaged, and the result
/// passes through two fixed dense tanh layers.
class MockEncoder {
 public:
  explicit MockEncoder(std::size_t dim = 256, std::uint64_t seed = 0x5eedULL);

  std::size_t dim() const noexcept { return dim_; }
  std::vector<float> encode(std::string_view text) const;

  static constexpr std::string_view kName = "mock-hash-projection-v1";

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::vector<double> w1_, w2_;
};

/// One vector per distinct utterance key of the corpus.
EmbeddingStore encode_corpus(const Corpus& corpus, const MockEncoder& encoder);

}  // namespace convdist
