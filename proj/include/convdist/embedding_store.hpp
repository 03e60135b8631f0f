#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "convdist/dialog.hpp"
#include "convdist/error.hpp"

namespace convdist {

/// Lowercase hex SHA-256 of normalize_text(text). Throws DataError("empty text")
/// when nothing is left after normalization.
std::string utterance_key(std::string_view text);

/// 1 - cos(u, v), clamped to [0, 2].
template <class T, class U>
double cosine_distance(std::span<const T> u, std::span<const U> v) {
  if (u.size() != v.size()) {
    throw DimensionMismatch("cosine distance: dimensions " + std::to_string(u.size()) + " and " +
                            std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double x = u[k], y = v[k];
    dot += x * y;
    uu += x * x;
    vv += y * y;
  }
  if (uu == 0.0 || vv == 0.0) throw DataError("cosine distance of a zero vector");
  const double d = 1.0 - dot / std::sqrt(uu * vv);  // exact 0 for identical vectors
  return d < 0.0 ? 0.0 : (d > 2.0 ? 2.0 : d);
}

inline double cosine_distance(const std::vector<float>& u, const std::vector<float>& v) {
  return cosine_distance(std::span<const float>(u), std::span<const float>(v));
}
inline double cosine_distance(const std::vector<double>& u, const std::vector<double>& v) {
  return cosine_distance(std::span<const double>(u), std::span<const double>(v));
}

enum class StoreEncoding { Text, Binary };

inline constexpr std::string_view kStoreFormatVersion = "1";

/// Keyed embedding vectors of one fixed dimension. Immutable once loaded;
/// concurrent lookups are safe.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim, std::string encoder_name = {});

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return keys_.size(); }
  const std::string& encoder_name() const noexcept { return encoder_name_; }

  /// Adds a vector. Throws DimensionMismatch on wrong length, DataError on
  /// non-finite values or on a repeated key carrying a different vector.
  void insert(std::string key, std::vector<float> values);

  bool contains(std::string_view key) const { return index_.count(std::string(key)) != 0; }
  std::span<const float> at_key(std::string_view key) const;

  /// Vector for an utterance's text. `conversation_id`, when given, is named in
  /// the MissingEmbedding message.
  std::span<const float> lookup(const Utterance& utterance, std::string_view conversation_id = {}) const;

  /// Keys in insertion order.
  const std::vector<std::string>& keys() const noexcept { return keys_; }

  bool operator==(const EmbeddingStore& other) const;

 private:
  std::size_t dim_;
  std::string encoder_name_;
  std::vector<std::string> keys_;
  std::vector<std::vector<float>> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Reads one or more concatenated segments (header line + records). All
/// segments must share a dimension. Throws on any defect; nothing partial is
/// returned.
EmbeddingStore read_store(std::istream& in);
EmbeddingStore load_store(const std::string& path);

void write_store(std::ostream& out, const EmbeddingStore& store, StoreEncoding encoding);
void save_store(const std::string& path, const EmbeddingStore& store, StoreEncoding encoding);

struct Coverage {
  std::size_t unique_keys = 0;
  std::size_t covered = 0;
  std::vector<std::string> missing;  // "conversation_id#index: text"
  double ratio() const { return unique_keys == 0 ? 1.0 : static_cast<double>(covered) / unique_keys; }
};

/// How many distinct utterance keys of the corpus resolve in the store.
Coverage check_coverage(const Corpus& corpus, const EmbeddingStore& store);

}  // namespace convdist
