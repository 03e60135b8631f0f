#pragma once

// Pair-evaluation kernels. evaluate_pairs_serial is the reference
// implementation; evaluate_pairs_parallel distributes the same pair list over
// OpenMP threads and must return identical values (each pair is computed
// independently, so no reduction order is involved).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "convdist/error.hpp"
#include "convdist/measure.hpp"

namespace convdist {

struct PairIndex {
  std::uint32_t i;
  std::uint32_t j;

  auto operator<=>(const PairIndex&) const = default;
};

/// A measure failed on a specific pair.
class PairError : public DataError {
 public:
  PairError(const std::string& id1, const std::string& id2, const std::string& what)
      : DataError("pair (" + id1 + ", " + id2 + "): " + what), id1_(id1), id2_(id2) {}
  const std::string& id1() const noexcept { return id1_; }
  const std::string& id2() const noexcept { return id2_; }

 private:
  std::string id1_, id2_;
};

std::vector<double> evaluate_pairs_serial(const Measure& m, std::span<const PairIndex> pairs);

/// jobs <= 0 uses the OpenMP default thread count. Without OpenMP support this
/// falls back to the serial kernel. On failure the error of the lowest-indexed
/// failing pair is rethrown, matching the serial kernel.
std::vector<double> evaluate_pairs_parallel(const Measure& m, std::span<const PairIndex> pairs, int jobs);

/// Serial for jobs == 1, parallel otherwise.
std::vector<double> evaluate_pairs(const Measure& m, std::span<const PairIndex> pairs, int jobs);

bool parallel_kernel_available() noexcept;

/// All i < j pairs over `members` (corpus indices), in row-major upper-triangle order.
std::vector<PairIndex> upper_triangle_pairs(std::span<const std::uint32_t> members);
std::vector<PairIndex> upper_triangle_pairs(std::size_t n);

/// Symmetric distance matrix with zero diagonal.
class PairwiseMatrix {
 public:
  PairwiseMatrix(std::vector<std::string> ids, std::vector<double> values);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  double at(std::size_t r, std::size_t c) const { return values_.at(r * size() + c); }
  /// Off-diagonal upper triangle, row-major.
  std::vector<double> upper_triangle() const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

/// n(n-1)/2 evaluations over the given corpus members, mirrored.
PairwiseMatrix pairwise_matrix(const Measure& m, std::span<const std::uint32_t> members, int jobs = 1);
PairwiseMatrix pairwise_matrix(const Measure& m, int jobs = 1);

}  // namespace convdist
