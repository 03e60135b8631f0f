#include <random>
#include <string>
#include <vector>

#include "convdist/edit_distance.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace convdist;

namespace {

struct Table {
  std::vector<int> del, ins;
  std::vector<std::vector<int>> sub;  // -1 = forbidden
};

// Per-position integer costs, indexed by the symbols at each position.
struct RandomModel {
  const std::vector<int>& a;
  const std::vector<int>& b;
  const Table& t;
  double del(std::size_t i) const { return t.del[a[i]]; }
  double ins(std::size_t j) const { return t.ins[b[j]]; }
  SubstitutionCost sub(std::size_t i, std::size_t j) const {
    const int w = t.sub[a[i]][b[j]];
    return w < 0 ? SubstitutionCost::forbidden() : SubstitutionCost::of(w);
  }
};

}  // namespace

TEST_CASE("shine to train costs 6") {
  const auto r = edit_distance("shine", "train", uniform_costs<char>(1.0, 2.0));
  CHECK(r.distance == 6.0);
  const std::string a = "shine", b = "train";
  const auto out = replay<char>(r.script, std::span<const char>(a.data(), a.size()), std::span<const char>(b.data(), b.size()));
  CHECK(std::string(out.begin(), out.end()) == "train");
  CHECK(script_cost(r.script) == 6.0);
  // insert t, s->r, h->a, i=i, n=n, delete e
  const std::vector<EditStep> expected{EditStep::insert(0, 1.0),        EditStep::substitute(0, 1, 2.0),
                                       EditStep::substitute(1, 2, 2.0), EditStep::substitute(2, 3, 0.0),
                                       EditStep::substitute(3, 4, 0.0), EditStep::remove(4, 1.0)};
  CHECK(r.script == expected);
}

TEST_CASE("empty sequences") {
  const auto costs = uniform_costs<char>(1.0, 2.0);
  CHECK(edit_distance("", "", costs).distance == 0.0);
  CHECK(edit_distance("", "", costs).script.empty());
  CHECK(edit_distance("abc", "", costs).distance == 3.0);
  CHECK(edit_distance("abc", "", costs).count(StepKind::Delete) == 3);
  CHECK(edit_distance("", "ab", costs).count(StepKind::Insert) == 2);
}

TEST_CASE("matches brute force on random small instances") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> len(0, 6), cost(0, 5), coin(0, 9);
  for (int trial = 0; trial < 400; ++trial) {
    const int alphabet = 1 + trial % 4;
    std::uniform_int_distribution<int> sym(0, alphabet - 1);
    std::vector<int> a(len(rng)), b(len(rng));
    for (int& x : a) x = sym(rng);
    for (int& x : b) x = sym(rng);
    Table t;
    const bool forbid = trial % 3 == 0;
    for (int s = 0; s < alphabet; ++s) {
      t.del.push_back(cost(rng));
      t.ins.push_back(cost(rng));
      t.sub.emplace_back();
      for (int u = 0; u < alphabet; ++u) t.sub.back().push_back(forbid && coin(rng) < 3 ? -1 : cost(rng));
    }
    const RandomModel model{a, b, t};
    const auto r = align(a.size(), b.size(), model);
    const auto bf = oracle::brute_force(a.size(), b.size(),
                                        {[&](std::size_t i) { return double(t.del[a[i]]); },
                                         [&](std::size_t j) { return double(t.ins[b[j]]); },
                                         [&](std::size_t i, std::size_t j) {
                                           const int w = t.sub[a[i]][b[j]];
                                           return w < 0 ? std::nan("") : double(w);
                                         }});
    REQUIRE(r.distance == bf.best);
    CHECK(script_cost(r.script) == r.distance);
    CHECK(replay<int>(r.script, a, b) == b);
    for (const auto& s : r.script) {
      if (s.kind == StepKind::Substitute) CHECK(t.sub[a[s.source]][b[s.target]] >= 0);
    }
  }
}

TEST_CASE("steps are in non-decreasing index order") {
  const auto r = edit_distance("kitten", "sitting", uniform_costs<char>(1.0, 1.0));
  CHECK(r.distance == 3.0);
  std::size_t i = 0, j = 0;
  for (const auto& s : r.script) {
    if (s.kind != StepKind::Insert) CHECK(s.source == i++);
    if (s.kind != StepKind::Delete) CHECK(s.target == j++);
  }
  CHECK(i == 6);
  CHECK(j == 7);
}

TEST_CASE("distance is symmetric under symmetric costs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 8), sym(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::string a(len(rng), 'a'), b(len(rng), 'a');
    for (char& c : a) c = static_cast<char>('a' + sym(rng));
    for (char& c : b) c = static_cast<char>('a' + sym(rng));
    const auto costs = uniform_costs<char>(1.0, 1.5);
    CHECK(edit_distance(a, b, costs).distance == edit_distance(b, a, costs).distance);
  }
}

TEST_CASE("tie-break prefers substitution, then deletion") {
  // Substitution (2) ties with delete+insert (1+1).
  const auto r = edit_distance("a", "b", uniform_costs<char>(1.0, 2.0));
  REQUIRE(r.script.size() == 1);
  CHECK(r.script[0].kind == StepKind::Substitute);

  // With substitution forbidden both gap orders cost 2. The last cell prefers
  // Delete, so the deletion is the final step.
  CostModel<char> no_sub{[](const char&) { return 1.0; }, [](const char&) { return 1.0; },
                         [](const char&, const char&) { return SubstitutionCost::forbidden(); }};
  const auto g = edit_distance("a", "b", no_sub);
  REQUIRE(g.script.size() == 2);
  CHECK(g.script[0].kind == StepKind::Insert);
  CHECK(g.script[1].kind == StepKind::Delete);
}

TEST_CASE("deterministic across repeated runs") {
  const auto costs = uniform_costs<char>(1.0, 2.0);
  const auto first = edit_distance("abcabcabc", "cbacbacba", costs);
  for (int k = 0; k < 10; ++k) CHECK(edit_distance("abcabcabc", "cbacbacba", costs) == first);
}

TEST_CASE("forbidden substitutions never appear") {
  CostModel<char> costs{[](const char&) { return 1.0; }, [](const char&) { return 1.0; },
                        [](const char& x, const char& y) {
                          return x == y ? SubstitutionCost::of(0.0) : SubstitutionCost::forbidden();
                        }};
  const auto r = edit_distance("abcd", "abxd", costs);
  CHECK(r.distance == 2.0);
  for (const auto& s : r.script) {
    if (s.kind == StepKind::Substitute) CHECK(std::string("abcd")[s.source] == std::string("abxd")[s.target]);
  }
}

TEST_CASE("invalid costs are rejected") {
  CostModel<char> negative{[](const char&) { return -1.0; }, [](const char&) { return 1.0; },
                           [](const char&, const char&) { return SubstitutionCost::of(0.0); }};
  CHECK_THROWS_AS(edit_distance("a", "b", negative), CostModelError);
  CostModel<char> nan_sub{[](const char&) { return 1.0; }, [](const char&) { return 1.0; },
                          [](const char&, const char&) { return SubstitutionCost::of(std::nan("")); }};
  CHECK_THROWS_AS(edit_distance("a", "b", nan_sub), CostModelError);
  CostModel<char> inf_ins{[](const char&) { return 1.0; },
                          [](const char&) { return std::numeric_limits<double>::infinity(); },
                          [](const char&, const char&) { return SubstitutionCost::of(0.0); }};
  CHECK_THROWS_AS(edit_distance("a", "b", inf_ins), CostModelError);
  CHECK_THROWS_AS(SubstitutionCost::forbidden().value(), std::logic_error);
}

TEST_CASE("replay rejects malformed scripts") {
  const std::vector<int> a{1, 2}, b{3};
  const std::vector<EditStep> skips{EditStep::remove(1, 1.0), EditStep::substitute(0, 0, 1.0)};
  CHECK_THROWS_AS(replay<int>(skips, a, b), std::out_of_range);
  const std::vector<EditStep> short_script{EditStep::substitute(0, 0, 1.0)};
  CHECK_THROWS_AS(replay<int>(short_script, a, b), std::out_of_range);
  const std::vector<EditStep> past_end{EditStep::substitute(0, 0, 1.0), EditStep::insert(1, 1.0), EditStep::remove(1, 1.0)};
  CHECK_THROWS_AS(replay<int>(past_end, a, b), std::out_of_range);
}

TEST_CASE("gap diagram") {
  const auto r = edit_distance("shine", "train", uniform_costs<char>(1.0, 2.0));
  std::vector<std::string> a, b;
  for (char c : std::string("shine")) a.emplace_back(1, c);
  for (char c : std::string("train")) b.emplace_back(1, c);
  const std::string diagram = render_gap_diagram(r.script, a, b);
  CHECK(diagram ==
        "• s h i n e\n"
        "| | | | | |\n"
        "t r a i n •\n");

  const auto same = edit_distance("abc", "abc", uniform_costs<char>(1.0, 2.0));
  std::vector<std::string> abc{"a", "b", "c"};
  CHECK(render_gap_diagram(same.script, abc, abc).find("•") == std::string::npos);

  const std::vector<EditStep> bad{EditStep::substitute(5, 0, 0.0)};
  CHECK_THROWS_AS(render_gap_diagram(bad, abc, abc), std::out_of_range);
}
