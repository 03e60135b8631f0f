#include <cmath>
#include <set>

#include "convdist/measure.hpp"
#include "convdist/pairwise.hpp"
#include "convdist/synth.hpp"
#include "doctest.h"

using namespace convdist;

TEST_CASE("upper triangle enumeration") {
  const auto p = upper_triangle_pairs(4);
  REQUIRE(p.size() == 6);
  CHECK(p.front() == PairIndex{0, 1});
  CHECK(p.back() == PairIndex{2, 3});
  const std::vector<std::uint32_t> members{2, 5, 9};
  const auto q = upper_triangle_pairs(members);
  CHECK(q == std::vector<PairIndex>{{2, 5}, {2, 9}, {5, 9}});
  CHECK(upper_triangle_pairs(1).empty());
}

TEST_CASE("parallel evaluation equals serial evaluation") {
  SynthConfig cfg;
  cfg.conversations = 60;
  const auto s = synth_corpus(cfg);
  ConvEDConfig cc;
  cc.alpha = 2.2;
  const auto conved = make_conved(s.corpus, s.store, cc);
  const auto structed = make_structed(s.corpus);
  const auto pairs = upper_triangle_pairs(s.corpus.size());
  for (const Measure* m : {conved.get(), structed.get()}) {
    const auto serial = evaluate_pairs_serial(*m, pairs);
    for (int jobs : {0, 1, 2, 4}) CHECK(evaluate_pairs_parallel(*m, pairs, jobs) == serial);
    CHECK(evaluate_pairs(*m, pairs, 3) == serial);
  }
}

TEST_CASE("pairwise matrix is symmetric with a zero diagonal") {
  SynthConfig cfg;
  cfg.conversations = 12;
  const auto s = synth_corpus(cfg);
  const auto m = pairwise_matrix(*make_structed(s.corpus), 2);
  REQUIRE(m.size() == 12);
  for (std::size_t r = 0; r < m.size(); ++r) {
    CHECK(m.at(r, r) == 0.0);
    for (std::size_t c = 0; c < m.size(); ++c) CHECK(m.at(r, c) == m.at(c, r));
  }
  CHECK(m.upper_triangle().size() == 66);
  CHECK(m.ids().front() == "synth-0001");
}

TEST_CASE("failures name the pair, lowest index first") {
  Corpus c;
  for (int k = 0; k < 6; ++k) c.conversations.push_back({"c" + std::to_string(k), {{"A", "x", {}}}, {}});
  const auto bad = make_custom(c, "bad", [](std::size_t i, std::size_t j) {
    if (i + j >= 5) throw DataError("boom");
    return i == 1 && j == 3 ? std::nan("") : 1.0;
  });
  const auto pairs = upper_triangle_pairs(6);
  for (int jobs : {1, 4}) {
    try {
      evaluate_pairs(*bad, pairs, jobs);
      FAIL("expected PairError");
    } catch (const PairError& e) {
      // Pair order: (0,1) (0,2) (0,3) (0,4) (0,5) (1,2) (1,3) ...; (0,5) is the first throw.
      CHECK(e.id1() == "c0");
      CHECK(e.id2() == "c5");
    }
  }
  const std::vector<PairIndex> nan_only{{1, 3}};
  CHECK_THROWS_AS(evaluate_pairs(*bad, nan_only, 1), PairError);
}
