#include "convdist/embedding_store.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <istream>
#include <ostream>
#include <set>

#include <openssl/evp.h>

#include "json.hpp"

namespace convdist {

using nlohmann::json;

std::string utterance_key(std::string_view text) {
  const std::string norm = normalize_text(text);
  if (norm.empty()) throw DataError("empty text");
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(norm.data(), norm.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i) {
    out[2 * i] = kHex[digest[i] >> 4];
    out[2 * i + 1] = kHex[digest[i] & 0xF];
  }
  return out;
}

EmbeddingStore::EmbeddingStore(std::size_t dim, std::string encoder_name)
    : dim_(dim), encoder_name_(std::move(encoder_name)) {
  if (dim == 0) throw DataError("embedding dimension must be positive");
}

void EmbeddingStore::insert(std::string key, std::vector<float> values) {
  if (values.size() != dim_) {
    throw DimensionMismatch("vector for key '" + key + "' has dimension " + std::to_string(values.size()) +
                            ", store has " + std::to_string(dim_));
  }
  for (float v : values) {
    if (!std::isfinite(v)) throw DataError("vector for key '" + key + "' has a non-finite value");
  }
  if (auto it = index_.find(key); it != index_.end()) {
    if (vectors_[it->second] != values) throw DataError("conflicting vectors for duplicate key '" + key + "'");
    return;
  }
  index_.emplace(key, keys_.size());
  keys_.push_back(std::move(key));
  vectors_.push_back(std::move(values));
}

std::span<const float> EmbeddingStore::at_key(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) throw MissingEmbedding("no embedding for key '" + std::string(key) + "'");
  return vectors_[it->second];
}

std::span<const float> EmbeddingStore::lookup(const Utterance& utterance, std::string_view conversation_id) const {
  const std::string key = utterance_key(utterance.text);
  auto it = index_.find(key);
  if (it == index_.end()) {
    std::string prefix = utterance.text.substr(0, 40);
    if (prefix.size() < utterance.text.size()) prefix += "...";
    std::string msg = "no embedding for utterance \"" + prefix + "\"";
    if (!conversation_id.empty()) msg += " in conversation '" + std::string(conversation_id) + "'";
    throw MissingEmbedding(msg);
  }
  return vectors_[it->second];
}

bool EmbeddingStore::operator==(const EmbeddingStore& other) const {
  return dim_ == other.dim_ && encoder_name_ == other.encoder_name_ && keys_ == other.keys_ &&
         vectors_ == other.vectors_;
}

namespace {

struct Header {
  std::size_t dim;
  std::size_t count;
  std::string encoder_name;
  StoreEncoding encoding;
};

Header parse_header(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    throw DataError("corrupt embedding store: unreadable header");
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("count") || !j.contains("format_version")) {
    throw DataError("corrupt embedding store: header needs format_version, dim, count");
  }
  if (j["format_version"] != std::string(kStoreFormatVersion)) {
    throw DataError("unsupported embedding store version " + j["format_version"].dump());
  }
  Header h{};
  try {
    h.dim = j["dim"].get<std::size_t>();
    h.count = j["count"].get<std::size_t>();
    h.encoder_name = j.value("encoder_name", "");
  } catch (const json::exception&) {
    throw DataError("corrupt embedding store: bad header field types");
  }
  const std::string enc = j.value("encoding", "text");
  if (enc == "text") h.encoding = StoreEncoding::Text;
  else if (enc == "binary") h.encoding = StoreEncoding::Binary;
  else throw DataError("corrupt embedding store: unknown encoding '" + enc + "'");
  if (h.dim == 0) throw DataError("corrupt embedding store: dim must be positive");
  return h;
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError("corrupt embedding store: truncated record");
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {char(v & 0xFF), char((v >> 8) & 0xFF), char((v >> 16) & 0xFF), char((v >> 24) & 0xFF)};
  out.write(b, 4);
}

void read_text_records(std::istream& in, const Header& h, EmbeddingStore& store) {
  std::string line;
  std::size_t got = 0;
  while (got < h.count) {
    if (!std::getline(in, line)) throw DataError("corrupt embedding store: expected " + std::to_string(h.count) +
                                                 " records, found " + std::to_string(got));
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw DataError("corrupt embedding store: unreadable record " + std::to_string(got + 1));
    }
    if (!j.is_object() || !j.contains("key") || !j.contains("vector")) {
      if (j.is_object() && j.contains("dim")) {
        throw DataError("corrupt embedding store: header found where record " + std::to_string(got + 1) + " expected");
      }
      throw DataError("corrupt embedding store: record needs key and vector");
    }
    std::vector<float> values;
    try {
      for (const auto& v : j["vector"]) values.push_back(static_cast<float>(v.get<double>()));
      store.insert(j["key"].get<std::string>(), std::move(values));
    } catch (const json::exception&) {
      throw DataError("corrupt embedding store: bad record " + std::to_string(got + 1));
    }
    ++got;
  }
}

void read_binary_records(std::istream& in, const Header& h, EmbeddingStore& store) {
  std::vector<unsigned char> raw(4 * h.dim);
  for (std::size_t r = 0; r < h.count; ++r) {
    const std::uint32_t klen = read_u32(in);
    if (klen > (1u << 20)) throw DataError("corrupt embedding store: implausible key length");
    std::string key(klen, '\0');
    if (!in.read(key.data(), klen)) throw DataError("corrupt embedding store: truncated key");
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      throw DataError("corrupt embedding store: truncated vector");
    }
    std::vector<float> values(h.dim);
    for (std::size_t k = 0; k < h.dim; ++k) {
      const unsigned char* b = &raw[4 * k];
      const std::uint32_t bits =
          std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
      values[k] = std::bit_cast<float>(bits);
    }
    store.insert(std::move(key), std::move(values));
  }
}

}  // namespace

EmbeddingStore read_store(std::istream& in) {
  std::optional<EmbeddingStore> store;
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Header h = parse_header(line);
    if (!store) {
      store.emplace(h.dim, h.encoder_name);
    } else if (h.dim != store->dim()) {
      throw DimensionMismatch("embedding store segments disagree on dim: " + std::to_string(store->dim()) + " vs " +
                              std::to_string(h.dim));
    }
    any = true;
    if (h.encoding == StoreEncoding::Text) read_text_records(in, h, *store);
    else read_binary_records(in, h, *store);
  }
  if (!any) throw DataError("corrupt embedding store: no header");
  return std::move(*store);
}

EmbeddingStore load_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding store '" + path + "'");
  try {
    return read_store(in);
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(path + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_store(std::ostream& out, const EmbeddingStore& store, StoreEncoding encoding) {
  json header = {{"format_version", std::string(kStoreFormatVersion)},
                 {"dim", store.dim()},
                 {"count", store.size()},
                 {"encoder_name", store.encoder_name()},
                 {"encoding", encoding == StoreEncoding::Text ? "text" : "binary"}};
  out << header.dump() << '\n';
  char buf[32];
  for (const std::string& key : store.keys()) {
    const std::span<const float> v = store.at_key(key);
    if (encoding == StoreEncoding::Text) {
      out << "{\"key\":" << json(key).dump() << ",\"vector\":[";
      for (std::size_t k = 0; k < v.size(); ++k) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v[k]);
        if (k) out << ',';
        out.write(buf, end - buf);
      }
      out << "]}\n";
    } else {
      write_u32(out, static_cast<std::uint32_t>(key.size()));
      out.write(key.data(), static_cast<std::streamsize>(key.size()));
      for (float x : v) write_u32(out, std::bit_cast<std::uint32_t>(x));
    }
  }
}

void save_store(const std::string& path, const EmbeddingStore& store, StoreEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embedding store '" + path + "'");
  write_store(out, store, encoding);
  if (!out) throw DataError("write failed for '" + path + "'");
}

Coverage check_coverage(const Corpus& corpus, const EmbeddingStore& store) {
  Coverage cov;
  std::set<std::string> seen;
  for (const auto& c : corpus.conversations) {
    for (std::size_t i = 0; i < c.utterances.size(); ++i) {
      std::string key;
      try {
        key = utterance_key(c.utterances[i].text);
      } catch (const DataError&) {
        cov.missing.push_back(c.id + "#" + std::to_string(i) + ": <empty text>");
        continue;
      }
      if (!seen.insert(key).second) continue;
      ++cov.unique_keys;
      if (store.contains(key)) ++cov.covered;
      else cov.missing.push_back(c.id + "#" + std::to_string(i) + ": " + c.utterances[i].text);
    }
  }
  return cov;
}

}  // namespace convdist
