#include <random>
#include <vector>

#include "convdist/error.hpp"
#include "convdist/stats.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace convdist;

TEST_CASE("pearson on small inputs") {
  const std::vector<double> x{1, 2, 3}, y{1, 3, 2};
  CHECK(pearson(x, y) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pearson(x, x) == 1.0);
  const std::vector<double> neg{3, 2, 1};
  CHECK(pearson(x, neg) == -1.0);
  // scipy.stats.pearsonr
  const std::vector<double> a{1, 2, 3, 4, 5, 6}, b{2.1, 3.9, 6.2, 7.8, 10.1, 12.3};
  CHECK(pearson(a, b) == doctest::Approx(0.9989469797596411).epsilon(1e-14));
}

TEST_CASE("pearson agrees with the naive two-pass formula") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 300;
    std::vector<double> x(n), y(n);
    // Large offsets expose one-pass cancellation.
    const double offset = trial % 2 ? 1e6 : 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = offset + g(rng);
      y[k] = 0.3 * x[k] + g(rng);
    }
    CHECK(std::abs(pearson(x, y) - oracle::naive_pearson(x, y)) < 1e-12);
  }
}

TEST_CASE("pearson preconditions") {
  const std::vector<double> one{1}, two{1, 2}, three{1, 2, 3}, flat{4, 4, 4};
  CHECK_THROWS_AS(pearson(one, one), std::invalid_argument);
  CHECK_THROWS_AS(pearson(two, three), std::invalid_argument);
  CHECK_THROWS_AS(pearson(flat, three), UndefinedStatistic);
}

TEST_CASE("welch test matches scipy") {
  struct Case {
    std::vector<double> a, b;
    double t, df, p;
  };
  // scipy.stats.ttest_ind(a, b, equal_var=False)
  const std::vector<Case> cases{
      {{1, 2, 3, 4, 5}, {2, 4, 6, 8, 10.5}, -1.8831158916154396, 5.721820767028301, 0.11105400259981621},
      {{0.51, 0.55, 0.49, 0.6, 0.52, 0.58}, {0.30, 0.31, 0.28, 0.35}, 10.16468669536712, 7.939920984514782,
       7.934151720207785e-06},
      {{1.0, 1.1, 0.9, 1.05}, {1.02, 0.98, 1.01, 0.99, 1.0, 1.03, 0.97}, 0.2875590155621814, 3.2212867933541913,
       0.7912027100625567},
  };
  for (const auto& c : cases) {
    const auto r = welch_t_test(c.a, c.b);
    CHECK(r.t == doctest::Approx(c.t).epsilon(1e-12));
    CHECK(r.df == doctest::Approx(c.df).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(c.p).epsilon(1e-9));
  }
}

TEST_CASE("welch degenerate inputs") {
  const std::vector<double> same{0.5, 0.5, 0.5}, other{0.7, 0.7};
  CHECK(welch_t_test(same, same).p == 1.0);
  CHECK_THROWS_AS(welch_t_test(same, other), UndefinedStatistic);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(welch_t_test(one, same), std::invalid_argument);
}
