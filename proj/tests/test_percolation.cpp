#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "metapop/analysis.hpp"
#include "metapop/percolation.hpp"
#include "metapop/rng.hpp"

using namespace metapop;

TEST_SUITE_BEGIN("percolation");

TEST_CASE("wet survival block") {
  SUBCASE("zero horizon cannot reach the side squares") {
    const auto m = ModelSpec::model1(1.0, 1.0, 3);
    const auto est = estimate_wet_probability(m, 2, 0.0, 50, {41, 0});
    CHECK(est.hits == 0);
  }
  SUBCASE("with deaths suppressed the wet frequency climbs in T") {
    const auto m = ModelSpec::model1(1.0, 1.0, 3);
    WetBlockOptions opts;
    opts.suppress_deaths_inside = true;
    opts.threads = 4;
    const auto sweep =
        estimate_wet_probability_sweep(m, 1, {2.0, 6.0, 14.0, 30.0}, 120, {42, 0}, opts);
    for (std::size_t i = 1; i < sweep.size(); ++i)
      CHECK(sweep[i].hits >= sweep[i - 1].hits);  // exact: shared trajectories
    CHECK(sweep.back().frequency >= 0.9);
  }
  SUBCASE("small positive death rate obeys the no-death comparison") {
    // P(wet) >= P(wet | no deaths) * P(no death in the box by T)
    const auto m0 = ModelSpec::model1(1.0, 1.0, 3);  // phi unused when suppressed
    const int L = 1;
    const double T = 5.0;
    WetBlockOptions opts;
    opts.suppress_deaths_inside = true;
    opts.threads = 4;
    const auto base = estimate_wet_probability(m0, L, T, 300, {43, 0}, opts);
    const double phi = 5e-4;
    const auto m = ModelSpec::model1(phi, 1.0, 3);
    WetBlockOptions opts2;
    opts2.threads = 4;
    const auto with_deaths = estimate_wet_probability(m, L, T, 300, {44, 0}, opts2);
    const double boxes = std::pow(8.0 * L, 2.0);
    const double factor = std::exp(-phi * 3.0 * boxes * T);
    const double se = base.wilson.half_width() + with_deaths.wilson.half_width();
    CHECK(with_deaths.frequency >= base.frequency * factor - 3.0 * se);
  }
  SUBCASE("validation") {
    const auto m2 = ModelSpec::model2(0.5, 2.0, 1.0, 3, 1);
    CHECK_THROWS_AS(estimate_wet_probability(m2, 2, 1.0, 10, {45, 0}),
                    std::invalid_argument);
    const auto m1 = ModelSpec::model1(1.0, 1.0, 3);
    CHECK_THROWS_AS(estimate_wet_probability(m1, 0, 1.0, 10, {45, 0}),
                    std::invalid_argument);
  }
}

TEST_CASE("dry extinction block") {
  SUBCASE("a full box is never dry at time zero") {
    const auto m = ModelSpec::model2(0.5, 5.0, 1.0, 4, 2);
    const auto est = estimate_dry_probability(m, 2, 0.0, 40, {46, 0}, 4);
    CHECK(est.hits == 0);
  }
  SUBCASE("a crushing low-density death rate empties the box") {
    const auto m = ModelSpec::model2(0.5, 60.0, 1.0, 4, 3);
    const auto est = estimate_dry_probability(m, 2, 8.0, 60, {47, 0}, 4);
    CHECK(est.frequency > 0.5);
  }
  SUBCASE("only the Allee model is accepted") {
    CHECK_THROWS_AS(estimate_dry_probability(ModelSpec::model1(0.5, 1.0, 4), 2, 5.0,
                                             10, {48, 0}),
                    std::invalid_argument);
  }
}

TEST_CASE("dominating-chain hit probability") {
  const auto m = ModelSpec::model2(0.5, 10.0, 1.0, 4, 1);
  SUBCASE("Monte Carlo agrees with the transient solve") {
    const auto hit = estimate_dominator_hit(m, 5.0, 1, 20000, {49, 0}, 4);
    const double se = std::sqrt(
        std::max(1e-12, hit.exact * (1.0 - hit.exact) / hit.replicas));
    CHECK(std::abs(hit.mc_estimate - hit.exact) <= 3.5 * se);
  }
  SUBCASE("zero time from a full site cannot be low") {
    const auto hit = estimate_dominator_hit(m, 0.0, 1, 200, {50, 0});
    CHECK(hit.exact == doctest::Approx(0.0));
    CHECK(hit.mc_estimate == 0.0);
  }
  SUBCASE("stronger low-density death helps across a sweep") {
    double last = -1.0;
    for (double phi_allee : {2.0, 5.0, 10.0, 50.0}) {
      const auto spec = ModelSpec::model2(0.5, phi_allee, 1.0, 4, 1);
      const auto hit = estimate_dominator_hit(spec, 5.0, 1, 200, {51, 0});
      CHECK(hit.exact >= last);
      last = hit.exact;
    }
  }
}

TEST_CASE("oriented percolation") {
  SUBCASE("degenerate probabilities") {
    const auto full = simulate_oriented_percolation(30, 40, 1.0, 0, 99);
    CHECK(full.percolates);
    CHECK(full.max_height == 40);
    const auto empty = simulate_oriented_percolation(30, 40, 0.0, 0, 99);
    CHECK(!empty.percolates);
    CHECK(empty.max_height == 0);
  }
  SUBCASE("reached sets are nested in p on a shared stream") {
    const std::uint64_t seed = 1234;
    const auto a = oriented_percolation_reached(60, 60, 0.3, 0, seed);
    const auto b = oriented_percolation_reached(60, 60, 0.6, 0, seed);
    const auto c = oriented_percolation_reached(60, 60, 0.9, 0, seed);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i] <= b[i]);
      CHECK(b[i] <= c[i]);
    }
  }
  SUBCASE("block dependence still percolates at high p") {
    const auto res = simulate_oriented_percolation(100, 100, 0.95, 2, 7);
    CHECK(res.max_height > 0);
  }
  SUBCASE("well-supercritical openness percolates almost always") {
    int hits = 0;
    for (int trial = 0; trial < 200; ++trial)
      if (simulate_oriented_percolation(200, 200, 0.8, 0,
                                        splitmix64(900 + static_cast<std::uint64_t>(trial)))
              .percolates)
        ++hits;
    CHECK(hits >= 180);  // frequency >= 0.9
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(simulate_oriented_percolation(0, 10, 0.5, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_oriented_percolation(10, 10, 1.5, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_oriented_percolation(10, 10, 0.5, -1, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("edge colonization event") {
  SUBCASE("standing assumptions are enforced") {
    // N - M <= N_A
    CHECK_THROWS_AS(
        estimate_edge_event(ModelSpec::model3(0.3, 2.0, 1.0, 5, 2, 3), 10, {52, 0}),
        std::invalid_argument);
    // M <= N_A
    CHECK_THROWS_AS(
        estimate_edge_event(ModelSpec::model3(0.3, 2.0, 1.0, 12, 2, 2), 10, {52, 0}),
        std::invalid_argument);
    // wrong variant
    CHECK_THROWS_AS(estimate_edge_event(ModelSpec::model1(0.3, 1.0, 5), 10, {52, 0}),
                    std::invalid_argument);
  }
  SUBCASE("bigger capacity helps colonization") {
    double last = -1.0;
    for (int N : {8, 16, 32}) {
      const auto m = ModelSpec::model3(0.3, 2.0, 1.0, N, 2, 3);
      const auto est = estimate_edge_event(m, 400, {53, 0}, 300.0, 4);
      CHECK(est.successes + est.failures + est.undecided == est.replicas);
      CHECK(est.frequency >= last - 0.08);  // monotone trend with sampling slack
      last = est.frequency;
    }
    CHECK(last > 0.4);
  }
}

TEST_CASE("return-trip tail of the source walk") {
  for (const auto& [N, M, NA, phi, visits] :
       {std::tuple{12, 3, 2, 0.4, 5}, std::tuple{30, 5, 3, 0.6, 8}}) {
    const auto tail = estimate_visit_count_tail(N, M, NA, phi, visits, 4000, {54, 0});
    // closed form is a power of the per-trip hitting probability
    CHECK(tail.exact ==
          doctest::Approx(std::pow(
              ruin_probability({NA, N - M + 1, N - M, 1.0 / (1.0 + phi)}), visits)));
    const double se =
        std::sqrt(std::max(1e-12, tail.exact * (1.0 - tail.exact) / 4000));
    CHECK(std::abs(tail.mc_estimate - tail.exact) <= 4.0 * se);
    // the simple lower bound runs below the estimate
    CHECK(tail.mc_estimate >= tail.analytic_lower - 3.0 * tail.wilson.half_width());
  }
  CHECK_THROWS_AS(estimate_visit_count_tail(5, 3, 2, 0.4, 5, 10, {54, 0}),
                  std::invalid_argument);
}

TEST_SUITE_END();
