#include "convdist/measure.hpp"

namespace convdist {

Measure::Measure(const Corpus& corpus) {
  ids_.reserve(corpus.size());
  for (const auto& c : corpus.conversations) ids_.push_back(c.id);
}

namespace {

class ConvEDMeasure final : public Measure {
 public:
  ConvEDMeasure(const Corpus& corpus, const EmbeddingStore& store, const ConvEDConfig& cfg)
      : Measure(corpus), cfg_(cfg) {
    cfg_.validate();
    embedded_.reserve(corpus.size());
    for (const auto& c : corpus.conversations) embedded_.push_back(embed(c, store, cfg_));
  }
  std::string name() const override { return "conved"; }
  double distance(std::size_t i, std::size_t j) const override {
    return conv_ed(embedded_[i], embedded_[j], cfg_).distance;
  }

 private:
  ConvEDConfig cfg_;
  std::vector<EmbeddedConversation> embedded_;
};

class StructEDMeasure final : public Measure {
 public:
  explicit StructEDMeasure(const Corpus& corpus) : Measure(corpus) {
    flows_.reserve(corpus.size());
    for (const auto& c : corpus.conversations) flows_.push_back(action_flow(c));
  }
  std::string name() const override { return "structed"; }
  double distance(std::size_t i, std::size_t j) const override { return struct_ed(flows_[i], flows_[j]); }

 private:
  std::vector<ActionFlow> flows_;
};

class AvgSemMeasure final : public Measure {
 public:
  AvgSemMeasure(const Corpus& corpus, const EmbeddingStore& store) : Measure(corpus) {
    means_.reserve(corpus.size());
    for (const auto& c : corpus.conversations) means_.push_back(mean_embedding(c, store));
  }
  std::string name() const override { return "avgsem"; }
  double distance(std::size_t i, std::size_t j) const override {
    try {
      return cosine_distance(means_[i], means_[j]);
    } catch (const DimensionMismatch&) {
      throw;
    } catch (const DataError&) {
      throw DataError("avgSemDist: all-zero mean vector for '" + id(i) + "' or '" + id(j) + "'");
    }
  }

 private:
  std::vector<std::vector<double>> means_;
};

class D2VMeasure final : public Measure {
 public:
  D2VMeasure(const Corpus& corpus, const DocVectorStore& docs) : Measure(corpus) {
    vectors_.reserve(corpus.size());
    for (const auto& c : corpus.conversations) {
      if (!docs.contains(c.id)) throw MissingEmbedding("no document vector for conversation '" + c.id + "'");
      vectors_.push_back(docs.at_key(c.id));
    }
  }
  std::string name() const override { return "d2v"; }
  double distance(std::size_t i, std::size_t j) const override { return cosine_distance(vectors_[i], vectors_[j]); }

 private:
  std::vector<std::span<const float>> vectors_;
};

class CustomMeasure final : public Measure {
 public:
  CustomMeasure(const Corpus& corpus, std::string name, std::function<double(std::size_t, std::size_t)> fn)
      : Measure(corpus), name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name() const override { return name_; }
  double distance(std::size_t i, std::size_t j) const override { return fn_(i, j); }

 private:
  std::string name_;
  std::function<double(std::size_t, std::size_t)> fn_;
};

}  // namespace

MeasurePtr make_conved(const Corpus& corpus, const EmbeddingStore& store, const ConvEDConfig& cfg) {
  return std::make_unique<ConvEDMeasure>(corpus, store, cfg);
}
MeasurePtr make_structed(const Corpus& corpus) { return std::make_unique<StructEDMeasure>(corpus); }
MeasurePtr make_avgsem(const Corpus& corpus, const EmbeddingStore& store) {
  return std::make_unique<AvgSemMeasure>(corpus, store);
}
MeasurePtr make_d2v(const Corpus& corpus, const DocVectorStore& docs) {
  return std::make_unique<D2VMeasure>(corpus, docs);
}
MeasurePtr make_custom(const Corpus& corpus, std::string name, std::function<double(std::size_t, std::size_t)> fn) {
  return std::make_unique<CustomMeasure>(corpus, std::move(name), std::move(fn));
}

}  // namespace convdist
