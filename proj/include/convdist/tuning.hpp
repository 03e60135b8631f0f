#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "convdist/conved.hpp"
#include "convdist/dialog.hpp"
#include "convdist/embedding_store.hpp"

namespace convdist {

/// lo, lo + step, ..., hi (inclusive), each value rounded to 1e-9 so that
/// 1.0..5.0 step 0.1 yields exactly 41 clean decimals.
std::vector<double> alpha_grid(double lo = 1.0, double hi = 5.0, double step = 0.1);

struct AlphaCell {
  double alpha = 0.0;
  std::optional<double> r;  // empty when the correlation is undefined at this alpha
  std::string note;
};

struct TuneResult {
  double best_alpha = 0.0;
  double best_r = 0.0;
  std::size_t pairs = 0;
  std::vector<AlphaCell> grid;
};

/// Picks the alpha whose convED distances over all held-out pairs correlate best
/// with structED; ties go to the smaller alpha. Cells with an undefined
/// correlation are recorded and skipped. The held-out set must not overlap the
/// evaluation corpora; that is the caller's responsibility.
TuneResult tune_alpha(const Corpus& heldout, const EmbeddingStore& store, std::span<const double> grid,
                      const ConvEDConfig& base, int jobs = 1);

}  // namespace convdist
