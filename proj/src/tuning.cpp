#include "convdist/tuning.hpp"

#include <cmath>
#include <stdexcept>

#include "convdist/measure.hpp"
#include "convdist/pairwise.hpp"
#include "convdist/stats.hpp"

namespace convdist {

std::vector<double> alpha_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo > 0.0) || hi < lo) throw std::invalid_argument("alpha grid needs 0 < lo <= hi and step > 0");
  std::vector<double> grid;
  const auto steps = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= steps; ++k) grid.push_back(std::round((lo + k * step) * 1e9) / 1e9);
  return grid;
}

TuneResult tune_alpha(const Corpus& heldout, const EmbeddingStore& store, std::span<const double> grid,
                      const ConvEDConfig& base, int jobs) {
  if (grid.empty()) throw std::invalid_argument("alpha grid is empty");
  if (heldout.size() < 3) throw std::invalid_argument("held-out set needs at least 3 conversations");
  const auto pairs = upper_triangle_pairs(heldout.size());
  const std::vector<double> reference = evaluate_pairs(*make_structed(heldout), pairs, jobs);

  TuneResult out;
  out.pairs = pairs.size();
  bool found = false;
  for (double alpha : grid) {
    ConvEDConfig cfg = base;
    cfg.alpha = alpha;
    AlphaCell cell{alpha, std::nullopt, {}};
    try {
      const std::vector<double> d = evaluate_pairs(*make_conved(heldout, store, cfg), pairs, jobs);
      cell.r = pearson(d, reference);
      if (!found || *cell.r > out.best_r || (*cell.r == out.best_r && alpha < out.best_alpha)) {
        out.best_alpha = alpha;
        out.best_r = *cell.r;
        found = true;
      }
    } catch (const UndefinedStatistic& e) {
      cell.note = e.what();
    } catch (const std::invalid_argument& e) {
      cell.note = e.what();
    }
    out.grid.push_back(std::move(cell));
  }
  if (!found) throw UndefinedStatistic("correlation is undefined at every alpha in the grid");
  return out;
}

}  // namespace convdist
