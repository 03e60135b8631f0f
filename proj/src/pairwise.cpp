#include "convdist/pairwise.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#ifdef CONVDIST_HAVE_OPENMP
#include <omp.h>
#endif

namespace convdist {

namespace {

double evaluate_one(const Measure& m, const PairIndex& p) {
  double d;
  try {
    d = m.distance(p.i, p.j);
  } catch (const std::exception& e) {
    throw PairError(m.id(p.i), m.id(p.j), e.what());
  }
  if (!std::isfinite(d)) throw PairError(m.id(p.i), m.id(p.j), "non-finite distance");
  return d;
}

}  // namespace

std::vector<double> evaluate_pairs_serial(const Measure& m, std::span<const PairIndex> pairs) {
  std::vector<double> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) out[k] = evaluate_one(m, pairs[k]);
  return out;
}

bool parallel_kernel_available() noexcept {
#ifdef CONVDIST_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

std::vector<double> evaluate_pairs_parallel(const Measure& m, std::span<const PairIndex> pairs, int jobs) {
#ifdef CONVDIST_HAVE_OPENMP
  std::vector<double> out(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
  std::ptrdiff_t first_failure = n;
  std::exception_ptr failure;
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      out[k] = evaluate_one(m, pairs[k]);
    } catch (...) {
#pragma omp critical(convdist_pair_failure)
      {
        if (k < first_failure) {
          first_failure = k;
          failure = std::current_exception();
        }
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
#else
  (void)jobs;
  return evaluate_pairs_serial(m, pairs);
#endif
}

std::vector<double> evaluate_pairs(const Measure& m, std::span<const PairIndex> pairs, int jobs) {
  return jobs == 1 ? evaluate_pairs_serial(m, pairs) : evaluate_pairs_parallel(m, pairs, jobs);
}

std::vector<PairIndex> upper_triangle_pairs(std::span<const std::uint32_t> members) {
  std::vector<PairIndex> pairs;
  pairs.reserve(members.size() * (members.size() - (members.empty() ? 0 : 1)) / 2);
  for (std::size_t r = 0; r < members.size(); ++r) {
    for (std::size_t c = r + 1; c < members.size(); ++c) pairs.push_back({members[r], members[c]});
  }
  return pairs;
}

std::vector<PairIndex> upper_triangle_pairs(std::size_t n) {
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 0u);
  return upper_triangle_pairs(all);
}

PairwiseMatrix::PairwiseMatrix(std::vector<std::string> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.size() != ids_.size() * ids_.size()) throw std::invalid_argument("PairwiseMatrix: size mismatch");
}

std::vector<double> PairwiseMatrix::upper_triangle() const {
  std::vector<double> out;
  const std::size_t n = size();
  out.reserve(n * (n ? n - 1 : 0) / 2);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) out.push_back(at(r, c));
  }
  return out;
}

PairwiseMatrix pairwise_matrix(const Measure& m, std::span<const std::uint32_t> members, int jobs) {
  const std::vector<PairIndex> pairs = upper_triangle_pairs(members);
  const std::vector<double> values = evaluate_pairs(m, pairs, jobs);
  const std::size_t n = members.size();
  std::vector<double> full(n * n, 0.0);
  std::size_t k = 0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c, ++k) {
      full[r * n + c] = values[k];
      full[c * n + r] = values[k];
    }
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::uint32_t idx : members) ids.push_back(m.id(idx));
  return PairwiseMatrix(std::move(ids), std::move(full));
}

PairwiseMatrix pairwise_matrix(const Measure& m, int jobs) {
  std::vector<std::uint32_t> all(m.size());
  std::iota(all.begin(), all.end(), 0u);
  return pairwise_matrix(m, all, jobs);
}

}  // namespace convdist
