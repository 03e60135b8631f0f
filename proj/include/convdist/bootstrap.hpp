#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "convdist/conved.hpp"
#include "convdist/measure.hpp"
#include "convdist/pairwise.hpp"

namespace convdist {

/// The random part of a bootstrap run, drawn up front on a single thread so
/// that the (possibly parallel) evaluation cannot perturb it. Each subset is
/// drawn without replacement; subsets are independent of one another.
struct BootstrapPlan {
  std::size_t corpus_size = 0;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint32_t>> samples;  // sorted corpus indices
};

BootstrapPlan plan_bootstrap(std::size_t corpus_size, std::size_t n_samples, std::size_t sample_size,
                             std::uint64_t seed);

/// Distinct pairs touched by a plan, evaluated once per measure.
class PairTable {
 public:
  explicit PairTable(const BootstrapPlan& plan);

  const std::vector<PairIndex>& pairs() const noexcept { return pairs_; }
  /// Position of the unordered pair {a, b} in pairs().
  std::size_t index_of(std::uint32_t a, std::uint32_t b) const;

 private:
  std::vector<PairIndex> pairs_;
};

struct BootstrapReport {
  std::string measure;
  std::string reference;
  std::string normalization = "n/a";
  std::vector<double> per_sample_r;
  double mean_r = 0.0;
  std::size_t n_samples = 0;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;

  /// Canonical single-line JSON; identical reports serialize to identical bytes.
  std::string to_json() const;
  bool operator==(const BootstrapReport&) const = default;
};

/// Evaluates the reference measure once over the plan and correlates any number
/// of measures against it, sample by sample.
class BootstrapEvaluator {
 public:
  BootstrapEvaluator(const Measure& reference, BootstrapPlan plan, int jobs = 1);

  BootstrapReport correlate(const Measure& m) const;
  const BootstrapPlan& plan() const noexcept { return plan_; }

 private:
  BootstrapReport correlate_values(const std::string& name, const std::vector<double>& values) const;

  std::string reference_name_;
  BootstrapPlan plan_;
  PairTable table_;
  int jobs_;
  std::vector<double> reference_values_;
};

/// Mean Pearson correlation between `m` and `reference` over n_samples random
/// subsets of sample_size conversations. Throws std::invalid_argument when the
/// corpus is smaller than sample_size and UndefinedStatistic when a sample has
/// constant distances.
BootstrapReport bootstrap_correlation(const Measure& m, const Measure& reference, std::size_t n_samples,
                                      std::size_t sample_size, std::uint64_t seed, int jobs = 1);

struct AblationResult {
  BootstrapReport enforced;
  BootstrapReport relaxed;
};

/// The convED bootstrap against structED twice, with and without the actor
/// constraint, over the same subsets.
AblationResult ablate_actor(const Corpus& corpus, const EmbeddingStore& store, ConvEDConfig cfg,
                            std::size_t n_samples, std::size_t sample_size, std::uint64_t seed, int jobs = 1);

}  // namespace convdist
