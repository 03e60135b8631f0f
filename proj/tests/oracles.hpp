#pragma once
// Independent reference implementations used to check the library.

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "convdist/edit_distance.hpp"

namespace oracle {

// Walks every edit script explicitly (no memoization) and returns the cheapest
// total. sub returning NaN marks a forbidden pairing.
struct Costs {
  std::function<double(std::size_t)> del;
  std::function<double(std::size_t)> ins;
  std::function<double(std::size_t, std::size_t)> sub;
};

struct Search {
  double best = std::numeric_limits<double>::infinity();
  double best_substitution_only = std::numeric_limits<double>::infinity();
};

inline void enumerate(std::size_t i, std::size_t j, std::size_t m, std::size_t n, double acc, bool gapped,
                      const Costs& c, Search& out) {
  if (i == m && j == n) {
    out.best = std::min(out.best, acc);
    if (!gapped) out.best_substitution_only = std::min(out.best_substitution_only, acc);
    return;
  }
  if (i < m && j < n) {
    const double s = c.sub(i, j);
    if (!std::isnan(s)) enumerate(i + 1, j + 1, m, n, acc + s, gapped, c, out);
  }
  if (i < m) enumerate(i + 1, j, m, n, acc + c.del(i), true, c, out);
  if (j < n) enumerate(i, j + 1, m, n, acc + c.ins(j), true, c, out);
}

inline Search brute_force(std::size_t m, std::size_t n, const Costs& c) {
  Search s;
  enumerate(0, 0, m, n, 0.0, false, c, s);
  return s;
}

// Textbook two-pass Pearson correlation.
inline double naive_pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
