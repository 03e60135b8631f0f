#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "convdist/baselines.hpp"
#include "convdist/conved.hpp"
#include "convdist/dialog.hpp"
#include "convdist/embedding_store.hpp"
#include "convdist/structed.hpp"

namespace convdist {

/// A conversation distance bound to a fixed corpus and addressed by corpus
/// index. Per-conversation preparation (embedding lookup, flow extraction,
/// mean vectors) happens once at construction, so distance() is cheap and
/// safe to call concurrently.
///
/// Measures hold views into the stores they were built from; the stores must
/// outlive them.
class Measure {
 public:
  virtual ~Measure() = default;

  virtual std::string name() const = 0;
  virtual double distance(std::size_t i, std::size_t j) const = 0;

  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 protected:
  explicit Measure(const Corpus& corpus);

 private:
  std::vector<std::string> ids_;
};

using MeasurePtr = std::unique_ptr<Measure>;

MeasurePtr make_conved(const Corpus& corpus, const EmbeddingStore& store, const ConvEDConfig& cfg);
MeasurePtr make_structed(const Corpus& corpus);
MeasurePtr make_avgsem(const Corpus& corpus, const EmbeddingStore& store);
MeasurePtr make_d2v(const Corpus& corpus, const DocVectorStore& docs);

/// Wraps an arbitrary index-level distance; used for synthetic checks.
MeasurePtr make_custom(const Corpus& corpus, std::string name, std::function<double(std::size_t, std::size_t)> fn);

}  // namespace convdist
