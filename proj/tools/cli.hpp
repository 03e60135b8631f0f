#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "convdist/conved.hpp"
#include "convdist/dialog.hpp"
#include "convdist/embedding_store.hpp"
#include "convdist/pairwise.hpp"

namespace convdist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one command line (args exclude the program name). Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchResult {
  std::size_t warm_pairs = 0;
  std::size_t cold_pairs = 0;
  double warm_ms_per_pair = 0.0;
  double cold_ms_per_pair = 0.0;
  double speedup() const { return warm_ms_per_pair > 0.0 ? cold_ms_per_pair / warm_ms_per_pair : 0.0; }
};

/// Per-pair convED wall time with the store already loaded, against an
/// end-to-end run that re-encodes both dialogs with the mock encoder for every
/// pair. At most `cold_limit` pairs are timed cold.
BenchResult bench_conved(const Corpus& corpus, const EmbeddingStore& store, const ConvEDConfig& cfg,
                         std::span<const PairIndex> pairs, std::size_t cold_limit = 50);

}  // namespace convdist::cli
