#include "convdist/bootstrap.hpp"

#include <algorithm>
#include <stdexcept>

#include "convdist/rng.hpp"
#include "convdist/stats.hpp"
#include "json.hpp"

namespace convdist {

BootstrapPlan plan_bootstrap(std::size_t corpus_size, std::size_t n_samples, std::size_t sample_size,
                             std::uint64_t seed) {
  if (sample_size < 3) throw std::invalid_argument("bootstrap sample size must be at least 3");
  if (n_samples == 0) throw std::invalid_argument("bootstrap needs at least one sample");
  if (corpus_size < sample_size) {
    throw std::invalid_argument("corpus has " + std::to_string(corpus_size) + " conversations, fewer than sample size " +
                                std::to_string(sample_size));
  }
  BootstrapPlan plan;
  plan.corpus_size = corpus_size;
  plan.sample_size = sample_size;
  plan.seed = seed;
  Rng rng(seed);
  plan.samples.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    auto draw = rng.sample(corpus_size, sample_size);
    std::sort(draw.begin(), draw.end());
    plan.samples.push_back(std::move(draw));
  }
  return plan;
}

PairTable::PairTable(const BootstrapPlan& plan) {
  for (const auto& s : plan.samples) {
    auto p = upper_triangle_pairs(s);
    pairs_.insert(pairs_.end(), p.begin(), p.end());
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

std::size_t PairTable::index_of(std::uint32_t a, std::uint32_t b) const {
  const PairIndex key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), key);
  if (it == pairs_.end() || *it != key) throw std::out_of_range("pair not in table");
  return static_cast<std::size_t>(it - pairs_.begin());
}

std::string BootstrapReport::to_json() const {
  nlohmann::ordered_json j;
  j["measure"] = measure;
  j["reference"] = reference;
  j["normalization"] = normalization;
  j["n_samples"] = n_samples;
  j["sample_size"] = sample_size;
  j["seed"] = seed;
  j["mean_r"] = mean_r;
  j["per_sample_r"] = per_sample_r;
  return j.dump();
}

BootstrapEvaluator::BootstrapEvaluator(const Measure& reference, BootstrapPlan plan, int jobs)
    : reference_name_(reference.name()), plan_(std::move(plan)), table_(plan_), jobs_(jobs) {
  if (reference.size() != plan_.corpus_size) throw std::invalid_argument("reference measure bound to a different corpus");
  reference_values_ = evaluate_pairs(reference, table_.pairs(), jobs_);
}

BootstrapReport BootstrapEvaluator::correlate(const Measure& m) const {
  if (m.size() != plan_.corpus_size) throw std::invalid_argument("measure bound to a different corpus");
  return correlate_values(m.name(), evaluate_pairs(m, table_.pairs(), jobs_));
}

BootstrapReport BootstrapEvaluator::correlate_values(const std::string& name, const std::vector<double>& values) const {
  BootstrapReport report;
  report.measure = name;
  report.reference = reference_name_;
  report.n_samples = plan_.samples.size();
  report.sample_size = plan_.sample_size;
  report.seed = plan_.seed;
  std::vector<double> x, y;
  for (std::size_t s = 0; s < plan_.samples.size(); ++s) {
    const auto& members = plan_.samples[s];
    x.clear();
    y.clear();
    for (std::size_t r = 0; r < members.size(); ++r) {
      for (std::size_t c = r + 1; c < members.size(); ++c) {
        const std::size_t k = table_.index_of(members[r], members[c]);
        x.push_back(values[k]);
        y.push_back(reference_values_[k]);
      }
    }
    try {
      report.per_sample_r.push_back(pearson(x, y));
    } catch (const UndefinedStatistic& e) {
      throw UndefinedStatistic("bootstrap sample " + std::to_string(s) + " (" + name + " vs " + reference_name_ +
                               "): " + e.what());
    }
  }
  report.mean_r = mean(report.per_sample_r);
  return report;
}

BootstrapReport bootstrap_correlation(const Measure& m, const Measure& reference, std::size_t n_samples,
                                      std::size_t sample_size, std::uint64_t seed, int jobs) {
  BootstrapEvaluator eval(reference, plan_bootstrap(reference.size(), n_samples, sample_size, seed), jobs);
  return eval.correlate(m);
}

AblationResult ablate_actor(const Corpus& corpus, const EmbeddingStore& store, ConvEDConfig cfg,
                            std::size_t n_samples, std::size_t sample_size, std::uint64_t seed, int jobs) {
  const MeasurePtr reference = make_structed(corpus);
  BootstrapEvaluator eval(*reference, plan_bootstrap(corpus.size(), n_samples, sample_size, seed), jobs);
  AblationResult out;
  cfg.enforce_actor = true;
  out.enforced = eval.correlate(*make_conved(corpus, store, cfg));
  out.enforced.normalization = std::string(to_string(cfg.normalize));
  cfg.enforce_actor = false;
  out.relaxed = eval.correlate(*make_conved(corpus, store, cfg));
  out.relaxed.normalization = std::string(to_string(cfg.normalize));
  out.relaxed.measure = "conved-relaxed";
  return out;
}

}  // namespace convdist
