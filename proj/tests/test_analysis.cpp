#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "metapop/analysis.hpp"
#include "metapop/markov.hpp"
#include "metapop/rng.hpp"

using namespace metapop;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("interval hitting probability") {
  SUBCASE("absorbing endpoints are exact") {
    CHECK(ruin_probability({0, 5, 0, 0.3}) == 0.0);
    CHECK(ruin_probability({0, 5, 5, 0.3}) == 1.0);
  }
  SUBCASE("the worked 4/7 instance") {
    CHECK(ruin_probability({0, 3, 1, 2.0 / 3.0}) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  }
  SUBCASE("symmetric walk midpoint") {
    CHECK(ruin_probability({0, 4, 2, 0.5}) == doctest::Approx(0.5));
  }
  SUBCASE("the formula is continuous at p = 1/2") {
    for (long long j = 1; j < 6; ++j) {
      const double limit = static_cast<double>(j) / 6.0;
      CHECK(std::abs(ruin_probability({0, 6, j, 0.5 + 1e-6}) - limit) < 1e-4);
      CHECK(std::abs(ruin_probability({0, 6, j, 0.5 - 1e-6}) - limit) < 1e-4);
    }
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(ruin_probability({3, 3, 3, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(ruin_probability({0, 3, 4, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(ruin_probability({0, 3, 1, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ruin_probability({0, 3, 1, 1.0}), std::invalid_argument);
  }
  SUBCASE("matches a direct walk simulation") {
    RngStream rng(5150);
    for (int inst = 0; inst < 5; ++inst) {
      const long long r1 = static_cast<long long>(rng.below(5)) - 2;
      const long long n = 2 + static_cast<long long>(rng.below(7));
      const long long j = r1 + 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(n - 1)));
      const double p = 0.2 + 0.6 * rng.uniform();
      const double exact = ruin_probability({r1, r1 + n, j, p});
      const int walks = 20000;
      int hits = 0;
      for (int w = 0; w < walks; ++w) {
        long long x = j;
        while (x != r1 && x != r1 + n) x += rng.uniform() < p ? 1 : -1;
        if (x == r1 + n) ++hits;
      }
      const double se = std::sqrt(std::max(1e-12, exact * (1.0 - exact) / walks));
      CHECK(std::abs(static_cast<double>(hits) / walks - exact) <= 4.0 * se);
    }
  }
}

TEST_CASE("survival estimation") {
  SUBCASE("unit capacity never survives") {
    const auto m = ModelSpec::model1(0.5, 5.0, 1);
    const LatticeWindow w(2, {5, 5}, Boundary::Periodic);
    const auto est = estimate_survival(m, w, InitSpec::singleton({2, 2}, 1), 60.0,
                                       200, {21, 0}, 4);
    CHECK(est.survivals == 0);
    CHECK(est.estimate == 0.0);
    CHECK(est.wilson.low == 0.0);
    CHECK(!est.extinction_times.empty());
    CHECK(est.extinction_quantile(0.5) <= est.extinction_quantile(0.99));
    CHECK(!est.horizon_flag);
  }
  SUBCASE("thread count does not change the estimate") {
    const auto m = ModelSpec::model1(0.9, 1.0, 3);
    const LatticeWindow w(1, {6}, Boundary::Periodic);
    const auto a = estimate_survival(m, w, InitSpec::singleton({3}, 1), 10.0, 100,
                                     {22, 0}, 1);
    const auto b = estimate_survival(m, w, InitSpec::singleton({3}, 1), 10.0, 100,
                                     {22, 0}, 4);
    CHECK(a.survivals == b.survivals);
    CHECK(a.extinction_times == b.extinction_times);
  }
  SUBCASE("a too-short horizon raises the flag") {
    const auto m = ModelSpec::model1(1.0, 1.0, 3);
    const LatticeWindow w(1, {6}, Boundary::Periodic);
    // critical-ish single lineage: extinction times spread over any horizon
    const auto est = estimate_survival(m, w, InitSpec::singleton({3}, 1), 1.0, 400,
                                       {23, 0}, 4);
    CHECK(est.late_extinction_fraction > 0.01);
    CHECK(est.horizon_flag);
  }
}

TEST_CASE("bisection on the death-rate axis") {
  const auto base = ModelSpec::model1(0.5, 1.0, 4);
  const LatticeWindow w(1, {8}, Boundary::Periodic);
  const InitSpec init = InitSpec::singleton({4}, 1);

  SUBCASE("degenerate and same-side brackets are rejected") {
    CHECK_THROWS_AS(bisect_critical(base, ParamAxis::Phi, 0.7, 0.7, w, init, 30.0,
                                    {24, 0}),
                    std::invalid_argument);
    BisectOptions opts;
    opts.initial_replicas = 60;
    opts.threads = 4;
    // both endpoints deep in the extinction region
    CHECK_THROWS_AS(bisect_critical(base, ParamAxis::Phi, 2.0, 3.0, w, init, 30.0,
                                    {24, 0}, opts),
                    std::invalid_argument);
  }

  SUBCASE("the bracket shrinks and the decision log is monotone") {
    BisectOptions opts;
    opts.initial_replicas = 80;
    opts.tolerance = 0.2;
    opts.threads = 4;
    const auto res = bisect_critical(base, ParamAxis::Phi, 0.05, 2.5, w, init, 40.0,
                                     {25, 0}, opts);
    if (!res.budget_exhausted)
      CHECK(res.bracket_high - res.bracket_low <= opts.tolerance + 1e-12);
    CHECK(res.bracket_low >= 0.05);
    CHECK(res.bracket_high <= 2.5);
    // no decided survival above a decided extinction on the phi axis
    double highest_survive = -1e300, lowest_extinct = 1e300;
    for (const auto& d : res.log) {
      if (d.survives) highest_survive = std::max(highest_survive, d.value);
      else lowest_extinct = std::min(lowest_extinct, d.value);
    }
    CHECK(highest_survive < lowest_extinct);
  }
}

TEST_CASE("estimated critical death rate lies strictly inside (0, 1)") {
  const auto base = ModelSpec::model1(0.5, 1.0, 5);
  const LatticeWindow w(2, {8, 8}, Boundary::Periodic);
  BisectOptions opts;
  opts.initial_replicas = 60;
  opts.tolerance = 0.2;
  opts.threads = 8;
  const auto res = bisect_critical(base, ParamAxis::Phi, 0.05, 1.3, w,
                                   InitSpec::singleton({4, 4}, 1), 60.0, {29, 0},
                                   opts);
  CHECK(res.critical > 0.0);
  CHECK(res.critical < 1.0);
}

TEST_CASE("mean occupancy") {
  SUBCASE("time zero reproduces the initial mean exactly") {
    const auto m = ModelSpec::model1(1.5, 1.0, 5);
    const LatticeWindow w(2, {4, 4}, Boundary::Periodic);
    const auto series = mean_occupancy(m, w, InitSpec::full_at(5), 2.0, {0.0, 1.0},
                                       40, {26, 0}, 4);
    CHECK(series.mean[0] == doctest::Approx(5.0));
    CHECK(series.se[0] == doctest::Approx(0.0));
    CHECK(series.mean[1] < 5.0);
  }
  SUBCASE("supercritical death rate decays under the drift envelope") {
    const auto m = ModelSpec::model1(1.5, 1.0, 5);
    const LatticeWindow w(2, {6, 6}, Boundary::Periodic);
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(0.75 * i);
    const auto series =
        mean_occupancy(m, w, InitSpec::full_at(5), 6.0, grid, 150, {27, 0}, 4);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double bound = 5.0 * std::exp(-0.5 * grid[g]);
      CHECK(series.mean[g] <= bound + 3.0 * series.se[g] + 1e-9);
    }
  }
}

TEST_CASE("immortal-core single-site chain stays bounded in the mean") {
  const int N = 4;
  const double phi_over = 2.0;
  const int start = 4;
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(2.0 * i);
  const auto series =
      immortal_dominator_mean(N, phi_over, start, 20.0, grid, 400, {28, 0}, 4);
  CHECK(series.mean[0] == doctest::Approx(static_cast<double>(start)));
  const double ceiling = start + N / (phi_over - 1.0);
  for (std::size_t g = 0; g < grid.size(); ++g)
    CHECK(series.mean[g] <= ceiling + 3.0 * series.se[g] + 1e-9);
}

TEST_CASE("transient solver basics") {
  // two-state flip chain: p(t) has the closed form with rate a+b
  const double a = 0.7, b = 0.4;
  Eigen::MatrixXd Q(2, 2);
  Q << -a, a, b, -b;
  Eigen::VectorXd p0(2);
  p0 << 1.0, 0.0;
  for (double t : {0.0, 0.3, 1.0, 5.0}) {
    const auto pt = ctmc_transient(Q, p0, t);
    const double expect0 = b / (a + b) + a / (a + b) * std::exp(-(a + b) * t);
    CHECK(pt(0) == doctest::Approx(expect0).epsilon(1e-9));
    CHECK(pt(0) + pt(1) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(ctmc_transient(Q, p0, -1.0), std::invalid_argument);
}

TEST_SUITE_END();
