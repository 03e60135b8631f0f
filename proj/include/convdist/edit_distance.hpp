#pragma once

// Weighted edit distance with pluggable costs and a deterministic backtrace.
//
// The recurrence is the classical one: the first row/column hold cumulative
// insertion/deletion weights, and every inner cell takes the minimum of a
// deletion, an insertion, or a substitution. A substitution may be Forbidden,
// in which case that branch is simply not considered for the cell.
//
// Ties in the backtrace resolve Substitute > Delete > Insert.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "convdist/error.hpp"

namespace convdist {

/// Either a finite non-negative substitution weight or the Forbidden sentinel.
class SubstitutionCost {
 public:
  static constexpr SubstitutionCost forbidden() noexcept { return SubstitutionCost(); }
  static constexpr SubstitutionCost of(double cost) noexcept { return SubstitutionCost(cost); }

  constexpr bool allowed() const noexcept { return allowed_; }
  constexpr bool is_forbidden() const noexcept { return !allowed_; }
  double value() const {
    if (!allowed_) throw std::logic_error("value() of a Forbidden substitution");
    return cost_;
  }

  friend constexpr bool operator==(SubstitutionCost, SubstitutionCost) = default;

 private:
  constexpr SubstitutionCost() = default;
  explicit constexpr SubstitutionCost(double cost) : cost_(cost), allowed_(true) {}

  double cost_ = 0.0;
  bool allowed_ = false;
};

enum class StepKind : std::uint8_t { Substitute, Delete, Insert };

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

struct EditStep {
  StepKind kind;
  std::size_t source = kNoIndex;  // index into a; kNoIndex for Insert
  std::size_t target = kNoIndex;  // index into b; kNoIndex for Delete
  double cost = 0.0;

  static EditStep substitute(std::size_t i, std::size_t j, double cost) { return {StepKind::Substitute, i, j, cost}; }
  static EditStep remove(std::size_t i, double cost) { return {StepKind::Delete, i, kNoIndex, cost}; }
  static EditStep insert(std::size_t j, double cost) { return {StepKind::Insert, kNoIndex, j, cost}; }

  bool operator==(const EditStep&) const = default;
};

struct AlignmentResult {
  double distance = 0.0;
  std::vector<EditStep> script;

  std::size_t count(StepKind kind) const {
    std::size_t n = 0;
    for (const auto& s : script) n += s.kind == kind;
    return n;
  }
  bool operator==(const AlignmentResult&) const = default;
};

/// Cost model addressed by element position. del(i) and ins(j) must be finite and
/// non-negative; sub(i, j) is a SubstitutionCost.
template <class C>
concept IndexedCostModel = requires(const C& c, std::size_t i, std::size_t j) {
  { c.del(i) } -> std::convertible_to<double>;
  { c.ins(j) } -> std::convertible_to<double>;
  { c.sub(i, j) } -> std::same_as<SubstitutionCost>;
};

namespace detail {

inline double checked(double w, const char* what, std::size_t i, std::size_t j = kNoIndex) {
  if (!std::isfinite(w) || w < 0.0) {
    std::string where = "(" + std::to_string(i) + (j == kNoIndex ? "" : ", " + std::to_string(j)) + ")";
    throw CostModelError(std::string(what) + " cost at " + where + " is " +
                         (std::isfinite(w) ? "negative" : "not finite") + ": " + std::to_string(w));
  }
  return w;
}

}  // namespace detail

/// Edit distance between sequences of length m and n, with full backtrace.
template <IndexedCostModel C>
AlignmentResult align(std::size_t m, std::size_t n, const C& costs) {
  const std::size_t cols = n + 1;
  struct Cell {
    double dist;
    double step;
    StepKind op;
  };
  std::vector<Cell> d((m + 1) * cols);
  auto at = [&](std::size_t i, std::size_t j) -> Cell& { return d[i * cols + j]; };

  std::vector<double> del(m), ins(n);
  for (std::size_t i = 0; i < m; ++i) del[i] = detail::checked(static_cast<double>(costs.del(i)), "deletion", i);
  for (std::size_t j = 0; j < n; ++j) ins[j] = detail::checked(static_cast<double>(costs.ins(j)), "insertion", j);

  at(0, 0) = {0.0, 0.0, StepKind::Substitute};
  for (std::size_t i = 1; i <= m; ++i) at(i, 0) = {at(i - 1, 0).dist + del[i - 1], del[i - 1], StepKind::Delete};
  for (std::size_t j = 1; j <= n; ++j) at(0, j) = {at(0, j - 1).dist + ins[j - 1], ins[j - 1], StepKind::Insert};

  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      // Candidates are tested in tie-break order; a later one wins only if strictly smaller.
      Cell best{std::numeric_limits<double>::infinity(), 0.0, StepKind::Substitute};
      const SubstitutionCost sub = costs.sub(i - 1, j - 1);
      if (sub.allowed()) {
        const double w = detail::checked(sub.value(), "substitution", i - 1, j - 1);
        best = {at(i - 1, j - 1).dist + w, w, StepKind::Substitute};
      }
      if (const double v = at(i - 1, j).dist + del[i - 1]; v < best.dist) best = {v, del[i - 1], StepKind::Delete};
      if (const double v = at(i, j - 1).dist + ins[j - 1]; v < best.dist) best = {v, ins[j - 1], StepKind::Insert};
      at(i, j) = best;
    }
  }

  AlignmentResult result;
  result.distance = at(m, n).dist;
  if (!std::isfinite(result.distance)) throw std::logic_error("edit distance: no valid script");
  std::size_t i = m, j = n;
  result.script.reserve(m + n);
  while (i > 0 || j > 0) {
    const Cell& c = at(i, j);
    switch (c.op) {
      case StepKind::Substitute:
        result.script.push_back(EditStep::substitute(i - 1, j - 1, c.step));
        --i, --j;
        break;
      case StepKind::Delete:
        result.script.push_back(EditStep::remove(i - 1, c.step));
        --i;
        break;
      case StepKind::Insert:
        result.script.push_back(EditStep::insert(j - 1, c.step));
        --j;
        break;
    }
  }
  std::reverse(result.script.begin(), result.script.end());
  return result;
}

/// Element-level cost model. sub returning Forbidden excludes that pairing.
template <class T>
struct CostModel {
  std::function<double(const T&)> ins;
  std::function<double(const T&)> del;
  std::function<SubstitutionCost(const T&, const T&)> sub;
};

/// ins = del = indel, sub = 0 on equality and `mismatch` otherwise.
template <class T>
CostModel<T> uniform_costs(double indel, double mismatch) {
  return {[indel](const T&) { return indel; }, [indel](const T&) { return indel; },
          [mismatch](const T& x, const T& y) { return SubstitutionCost::of(x == y ? 0.0 : mismatch); }};
}

template <class T>
AlignmentResult edit_distance(std::span<const T> a, std::span<const T> b, const CostModel<T>& costs) {
  struct Adapter {
    std::span<const T> a, b;
    const CostModel<T>& c;
    double del(std::size_t i) const { return c.del(a[i]); }
    double ins(std::size_t j) const { return c.ins(b[j]); }
    SubstitutionCost sub(std::size_t i, std::size_t j) const { return c.sub(a[i], b[j]); }
  };
  return align(a.size(), b.size(), Adapter{a, b, costs});
}

inline AlignmentResult edit_distance(std::string_view a, std::string_view b, const CostModel<char>& costs) {
  return edit_distance(std::span<const char>(a.data(), a.size()), std::span<const char>(b.data(), b.size()), costs);
}

/// Applies `script` to `a`, drawing inserted and substituted elements from `b`.
/// Every source index must be consumed exactly once in order and every target
/// index produced exactly once in order; any other shape throws std::out_of_range.
/// The result equals b exactly when the script is a well-formed alignment of a to b.
template <class T>
std::vector<T> replay(std::span<const EditStep> script, std::span<const T> a, std::span<const T> b) {
  std::vector<T> out;
  std::size_t next_src = 0, next_tgt = 0;
  auto expect = [](std::size_t got, std::size_t want, std::size_t bound, const char* what) {
    if (got != want || got >= bound) {
      throw std::out_of_range(std::string("replay: ") + what + " index " + std::to_string(got) + " (expected " +
                              std::to_string(want) + ", bound " + std::to_string(bound) + ")");
    }
  };
  for (const EditStep& s : script) {
    switch (s.kind) {
      case StepKind::Delete:
        expect(s.source, next_src, a.size(), "source");
        ++next_src;
        break;
      case StepKind::Insert:
        expect(s.target, next_tgt, b.size(), "target");
        out.push_back(b[next_tgt++]);
        break;
      case StepKind::Substitute:
        expect(s.source, next_src, a.size(), "source");
        expect(s.target, next_tgt, b.size(), "target");
        ++next_src;
        out.push_back(b[next_tgt++]);
        break;
    }
  }
  if (next_src != a.size()) throw std::out_of_range("replay: source not fully consumed");
  return out;
}

/// Sum of step costs in script order (the same addition order as the DP path).
inline double script_cost(std::span<const EditStep> script) {
  double total = 0.0;
  for (const auto& s : script) total += s.cost;
  return total;
}

/// Three-row gap diagram: source labels, connector bars, target labels.
/// Gaps are rendered with "•"; columns are padded to the widest label.
std::string render_gap_diagram(std::span<const EditStep> script, std::span<const std::string> a,
                               std::span<const std::string> b);

}  // namespace convdist
