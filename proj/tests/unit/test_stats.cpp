#include "drivol/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "drivol/errors.hpp"
#include "../support/oracle_stats.hpp"
#include "../support/random_gen.hpp"

using namespace drivol;

namespace {
const std::vector<double> kEightPoint{2, 4, 4, 4, 5, 5, 7, 9};
}

TEST_CASE("pop_std matches hand evaluation and oracle") {
  CHECK(stats::pop_std(kEightPoint) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(stats::pop_std(kEightPoint) ==
        doctest::Approx(oracle::pop_std(kEightPoint)).epsilon(1e-12));

  const std::vector<double> constant{3.5, 3.5, 3.5};
  CHECK(stats::pop_std(constant) == 0.0);
  const std::vector<double> single{42.0};
  CHECK(stats::pop_std(single) == 0.0);
  CHECK_THROWS_AS(stats::pop_std({}), EmptySeriesError);
}

TEST_CASE("mean_abs_dev matches hand evaluation and oracle") {
  CHECK(stats::mean_abs_dev(kEightPoint) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(stats::mean_abs_dev(kEightPoint) ==
        doctest::Approx(oracle::mean_abs_dev(kEightPoint)).epsilon(1e-12));

  const std::vector<double> constant{7, 7, 7, 7};
  CHECK(stats::mean_abs_dev(constant) == 0.0);
  const std::vector<double> pair{0, 2};
  CHECK(stats::mean_abs_dev(pair) == doctest::Approx(1.0));
  CHECK_THROWS_AS(stats::mean_abs_dev({}), EmptySeriesError);
}

TEST_CASE("quantile interpolates between order statistics") {
  const std::vector<double> five{1, 2, 3, 4, 5};
  CHECK(stats::quantile(five, 0.25) == doctest::Approx(2.0));
  CHECK(stats::quantile(five, 0.0) == doctest::Approx(1.0));
  CHECK(stats::quantile(five, 1.0) == doctest::Approx(5.0));

  const std::vector<double> four{1, 2, 3, 4};
  CHECK(stats::quantile(four, 0.5) == doctest::Approx(2.5));

  // unsorted input is handled
  const std::vector<double> shuffled{4, 1, 3, 2};
  CHECK(stats::quantile(shuffled, 0.5) == doctest::Approx(2.5));

  CHECK_THROWS_AS(stats::quantile({}, 0.5), EmptySeriesError);
  CHECK_THROWS_AS(stats::quantile(five, -0.1), InvalidFractionError);
  CHECK_THROWS_AS(stats::quantile(five, 1.1), InvalidFractionError);
}

TEST_CASE("quantile is monotone in p and bounded by the data") {
  testgen::Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = rng.uniform_series(1 + rng.index(40), -50.0, 50.0);
    const double lo = *std::min_element(x.begin(), x.end());
    const double hi = *std::max_element(x.begin(), x.end());
    double prev = lo;
    for (double p = 0.0; p <= 1.0; p += 0.05) {
      const double q = stats::quantile(x, p);
      CHECK(q >= prev - 1e-12);
      CHECK(q >= lo - 1e-12);
      CHECK(q <= hi + 1e-12);
      CHECK(q == doctest::Approx(oracle::quantile(x, p)).epsilon(1e-12));
      prev = q;
    }
  }
}

TEST_CASE("coeff_var matches hand evaluation; zero mean is an error") {
  CHECK(stats::coeff_var(kEightPoint) == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(stats::coeff_var(kEightPoint) ==
        doctest::Approx(oracle::coeff_var(kEightPoint)).epsilon(1e-12));

  const std::vector<double> constant{4, 4, 4};
  CHECK(stats::coeff_var(constant) == 0.0);
  const std::vector<double> zeros{0, 0, 0};
  CHECK_THROWS_AS(stats::coeff_var(zeros), ZeroMeanError);
}

TEST_CASE("quantile_coeff_var matches hand evaluations") {
  const std::vector<double> five{1, 2, 3, 4, 5};
  // Q1 = 2, Q3 = 4
  CHECK(stats::quantile_coeff_var(five) ==
        doctest::Approx(100.0 * 2.0 / 6.0).epsilon(1e-12));

  const std::vector<double> negatives{-3, -2, -1};
  // Q1 = -2.5, Q3 = -1.5
  CHECK(stats::quantile_coeff_var(negatives) == doctest::Approx(-25.0).epsilon(1e-12));

  const std::vector<double> constant{5, 5, 5, 5};
  CHECK(stats::quantile_coeff_var(constant) == 0.0);

  const std::vector<double> cancelling{-1, 1};  // Q1 = -0.5, Q3 = 0.5
  CHECK_THROWS_AS(stats::quantile_coeff_var(cancelling), ZeroQuartileSumError);
}

TEST_CASE("sample_std uses divisor N-1") {
  const std::vector<double> four{1, 2, 3, 4};
  CHECK(stats::sample_std(four) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-12));
  CHECK(stats::sample_std(four) ==
        doctest::Approx(oracle::sample_std(four)).epsilon(1e-12));
  const std::vector<double> single{1.0};
  CHECK_THROWS_AS(stats::sample_std(single), EmptySeriesError);
}

TEST_CASE("pearson endpoints and undefined cases") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  std::vector<double> neg(a.size());
  std::transform(a.begin(), a.end(), neg.begin(), [](double v) { return -v; });

  auto same = stats::pearson(a, a);
  REQUIRE(same.has_value());
  CHECK(*same == doctest::Approx(1.0).epsilon(1e-12));

  auto anti = stats::pearson(a, neg);
  REQUIRE(anti.has_value());
  CHECK(*anti == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> flat{2, 2, 2, 2, 2};
  CHECK_FALSE(stats::pearson(a, flat).has_value());
  CHECK_FALSE(stats::pearson(std::vector<double>{1.0}, std::vector<double>{2.0})
                  .has_value());
}

TEST_CASE("dispersion properties on random series") {
  testgen::Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = rng.uniform_series(2 + rng.index(60), 0.5, 20.0);

    // MAD never exceeds the population standard deviation.
    CHECK(stats::mean_abs_dev(x) <= stats::pop_std(x) + 1e-12);

    // CV and QCV are invariant under positive scaling; std scales linearly.
    const double alpha = rng.uniform(0.05, 50.0);
    std::vector<double> scaled(x.size());
    std::transform(x.begin(), x.end(), scaled.begin(),
                   [alpha](double v) { return alpha * v; });
    CHECK(std::fabs(stats::coeff_var(scaled) - stats::coeff_var(x)) < 1e-9);
    CHECK(std::fabs(stats::quantile_coeff_var(scaled) - stats::quantile_coeff_var(x)) <
          1e-9);
    CHECK(stats::pop_std(scaled) ==
          doctest::Approx(alpha * stats::pop_std(x)).epsilon(1e-12));

    // Agreement with the independent oracle.
    CHECK(stats::pop_std(x) == doctest::Approx(oracle::pop_std(x)).epsilon(1e-12));
    CHECK(stats::mean_abs_dev(x) ==
          doctest::Approx(oracle::mean_abs_dev(x)).epsilon(1e-12));
    CHECK(stats::quantile_coeff_var(x) ==
          doctest::Approx(oracle::quantile_coeff_var(x)).epsilon(1e-12));
  }
}
