#include "convdist/mock_encoder.hpp"

#include <cmath>
#include <string>

namespace convdist {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Adds `dim` standard normal draws from the stream seeded by `state`.
void add_gaussian(std::uint64_t state, std::vector<double>& acc) {
  for (std::size_t k = 0; k < acc.size(); k += 2) {
    double u1 = static_cast<double>((splitmix(state) >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    acc[k] += r * std::cos(2.0 * M_PI * u2);
    if (k + 1 < acc.size()) acc[k + 1] += r * std::sin(2.0 * M_PI * u2);
  }
}

std::vector<double> random_matrix(std::size_t dim, std::uint64_t seed) {
  std::vector<double> w(dim * dim, 0.0);
  add_gaussian(seed, w);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& x : w) x *= scale;
  return w;
}

std::vector<double> dense_tanh(const std::vector<double>& w, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    const double* row = &w[r * n];
    for (std::size_t c = 0; c < n; ++c) s += row[c] * x[c];
    y[r] = std::tanh(s);
  }
  return y;
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : normalize_text(text)) {
    if (std::isalnum(c) || c == '\'' || c >= 0x80) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

MockEncoder::MockEncoder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed), w1_(random_matrix(dim, seed ^ 0xA1)), w2_(random_matrix(dim, seed ^ 0xB2)) {
  if (dim == 0) throw std::invalid_argument("encoder dimension must be positive");
}

std::vector<float> MockEncoder::encode(std::string_view text) const {
  const std::vector<std::string> toks = words(text);
  std::vector<double> h(dim_, 0.0);
  std::size_t features = 0;
  for (std::size_t k = 0; k < toks.size(); ++k) {
    add_gaussian(fnv1a(toks[k]) ^ seed_, h);
    ++features;
    if (k + 1 < toks.size()) {
      add_gaussian(fnv1a(toks[k] + " " + toks[k + 1]) ^ seed_, h);
      ++features;
    }
  }
  if (features == 0) add_gaussian(fnv1a(normalize_text(text)) ^ seed_, h), features = 1;
  for (double& x : h) x /= static_cast<double>(features);
  const std::vector<double> out = dense_tanh(w2_, dense_tanh(w1_, h));
  return std::vector<float>(out.begin(), out.end());
}

EmbeddingStore encode_corpus(const Corpus& corpus, const MockEncoder& encoder) {
  EmbeddingStore store(encoder.dim(), std::string(MockEncoder::kName));
  for (const auto& c : corpus.conversations) {
    for (const auto& u : c.utterances) {
      const std::string key = utterance_key(u.text);
      if (!store.contains(key)) store.insert(key, encoder.encode(u.text));
    }
  }
  return store;
}

}  // namespace convdist
