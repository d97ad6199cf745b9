#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "metapop/models.hpp"

using namespace metapop;

TEST_SUITE_BEGIN("models");

TEST_CASE("birth rates") {
  const auto m1 = ModelSpec::model1(1.0, 1.0, 5);
  CHECK(birth_rate(m1, 3) == 3.0);
  CHECK(birth_rate(m1, 5) == 0.0);
  const auto m4 = ModelSpec::model4(0.5, 2.0, 1.0, 5);
  CHECK(birth_rate(m4, 7) == 7.0);
  CHECK(birth_rate(m4, m4.sim_cap) == 0.0);  // clamp
  CHECK_THROWS_AS(birth_rate(m1, 6), std::invalid_argument);
  CHECK_THROWS_AS(birth_rate(m1, -1), std::invalid_argument);
}

TEST_CASE("death rates split at the low-density threshold") {
  const auto m2 = ModelSpec::model2(0.5, 3.0, 1.0, 6, 2);
  CHECK(death_rate(m2, 2) == doctest::Approx(6.0));
  CHECK(death_rate(m2, 4) == doctest::Approx(2.0));
  CHECK(death_rate(m2, 0) == 0.0);
  const auto m1 = ModelSpec::model1(0.7, 1.0, 4);
  CHECK(death_rate(m1, 0) == 0.0);
  CHECK(death_rate(m1, 3) == doctest::Approx(2.1));
  const auto m4 = ModelSpec::model4(0.5, 2.0, 1.0, 4);
  CHECK(death_rate(m4, 4) == doctest::Approx(2.0));
  CHECK(death_rate(m4, 5) == doctest::Approx(10.0));
}

TEST_CASE("flock migration window") {
  const auto m3 = ModelSpec::model3(0.5, 2.0, 2.0, 10, 2, 4);
  CHECK(migration_rate(m3, 2, 9, 7, 3) == doctest::Approx(0.5));
  CHECK(migration_rate(m3, 2, 9, 8, 3) == 0.0);
  CHECK(migration_rate(m3, 2, 5, 0, 1) == 0.0);  // source below N - M
  CHECK_THROWS_AS(migration_rate(m3, 2, 9, 7, 0), std::invalid_argument);
  const auto m1 = ModelSpec::model1(1.0, 1.0, 5);
  CHECK(migration_rate(m1, 2, 4, 0, 1) == 0.0);  // source not full
  CHECK(migration_rate(m1, 1, 5, 4, 1) == doctest::Approx(0.5));
  const auto m4 = ModelSpec::model4(0.5, 2.0, 1.0, 3);
  CHECK(migration_rate(m4, 2, 7, 2, 1) == doctest::Approx(0.25));
  CHECK(migration_rate(m4, 2, 7, 3, 1) == 0.0);
}

TEST_CASE("all rates are non-negative and events stay in range") {
  const auto models = {ModelSpec::model1(0.7, 1.3, 4),
                       ModelSpec::model2(0.5, 2.5, 1.0, 4, 2),
                       ModelSpec::model3(0.5, 2.5, 1.0, 4, 1, 3)};
  for (const auto& m : models) {
    for (int a = 0; a <= m.capacity; ++a) {
      CHECK(birth_rate(m, a) >= 0.0);
      CHECK(death_rate(m, a) >= 0.0);
      if (birth_rate(m, a) > 0.0) CHECK(a + 1 <= m.capacity);
      if (death_rate(m, a) > 0.0) CHECK(a - 1 >= 0);
      for (int b = 0; b <= m.capacity; ++b)
        for (int k = 1; k <= m.flock_limit(); ++k) {
          const double r = migration_rate(m, 2, a, b, k);
          CHECK(r >= 0.0);
          if (r > 0.0) {
            CHECK(a - k >= 0);
            CHECK(b + k <= m.capacity);
          }
        }
    }
  }
}

TEST_CASE("model reductions") {
  // flock bound one reproduces the plain Allee model
  const auto m3 = ModelSpec::model3(0.4, 2.0, 1.5, 5, 2, 1);
  const auto m2 = ModelSpec::model2(0.4, 2.0, 1.5, 5, 2);
  for (int a = 0; a <= 5; ++a) {
    CHECK(birth_rate(m3, a) == birth_rate(m2, a));
    CHECK(death_rate(m3, a) == death_rate(m2, a));
    for (int b = 0; b <= 5; ++b)
      CHECK(migration_rate(m3, 2, a, b, 1) == migration_rate(m2, 2, a, b, 1));
  }
  // threshold zero or equal multipliers reproduce the basic model
  const auto m2_zero = ModelSpec::model2(0.4, 2.0, 1.5, 5, 0);
  const auto m1 = ModelSpec::model1(0.4, 1.5, 5);
  for (int a = 0; a <= 5; ++a)
    CHECK(death_rate(m2_zero, a) == doctest::Approx(death_rate(m1, a)));
  const auto m2_flat = ModelSpec::model2(1.2, 1.2, 1.5, 5, 3);
  const auto m1_flat = ModelSpec::model1(1.2, 1.5, 5);
  for (int a = 0; a <= 5; ++a)
    CHECK(death_rate(m2_flat, a) == doctest::Approx(death_rate(m1_flat, a)));
}

TEST_CASE("migration rate is monotone in the endpoint occupancies") {
  const auto m3 = ModelSpec::model3(0.5, 2.0, 1.0, 8, 2, 3);
  for (int k = 1; k <= 3; ++k)
    for (int b = 0; b <= 8; ++b)
      for (int a = 0; a < 8; ++a)
        CHECK(migration_rate(m3, 2, a, b, k) <= migration_rate(m3, 2, a + 1, b, k));
  for (int k = 1; k <= 3; ++k)
    for (int a = 0; a <= 8; ++a)
      for (int b = 0; b < 8; ++b)
        CHECK(migration_rate(m3, 2, a, b, k) >= migration_rate(m3, 2, a, b + 1, k));
}

TEST_CASE("enabled events") {
  SUBCASE("the empty configuration is silent") {
    const auto m = ModelSpec::model1(1.0, 1.0, 2);
    const LatticeWindow w(1, {4}, Boundary::Periodic);
    const auto cfg = make_configuration(w, InitSpec::empty());
    CHECK(enabled_events(m, w, cfg, 0).empty());
  }
  SUBCASE("a full site next to empty neighbors") {
    const auto m = ModelSpec::model1(1.0, 4.0, 2);
    const LatticeWindow w(1, {4}, Boundary::Periodic);
    const auto cfg = make_configuration(w, InitSpec::singleton({1}, 2), 2);
    const auto events = enabled_events(m, w, cfg, 1);
    REQUIRE(events.size() == 3);  // death + two migrations, no birth
    double death = 0.0, migration = 0.0;
    int migrations = 0;
    for (const auto& [ev, rate] : events) {
      CHECK(ev.type != EventType::Birth);
      if (ev.type == EventType::Death) death = rate;
      if (ev.type == EventType::Migration) {
        migration = rate;
        ++migrations;
      }
    }
    CHECK(death == doctest::Approx(2.0));
    CHECK(migrations == 2);
    CHECK(migration == doctest::Approx(2.0));  // lambda / 2d = 4/2
  }
  SUBCASE("capped site excludes birth, keeps death and migration") {
    auto m = ModelSpec::model4(0.5, 2.0, 1.0, 2, 8);
    const LatticeWindow w(1, {4}, Boundary::Periodic);
    const auto cfg = make_configuration(w, InitSpec::singleton({1}, 8), 8);
    const auto events = enabled_events(m, w, cfg, 1);
    double total = 0.0;
    bool saw_birth = false;
    double death = 0.0, migrations = 0.0;
    for (const auto& [ev, rate] : events) {
      total += rate;
      if (ev.type == EventType::Birth) saw_birth = true;
      if (ev.type == EventType::Death) death = rate;
      if (ev.type == EventType::Migration) migrations += rate;
    }
    CHECK(!saw_birth);
    CHECK(death == doctest::Approx(16.0));  // phi_tilde * n
    CHECK(migrations == doctest::Approx(1.0));
    CHECK(total == doctest::Approx(death + migrations));
  }
  SUBCASE("emigration into an absorbing exterior is enabled") {
    const auto m = ModelSpec::model1(1.0, 1.0, 2);
    const LatticeWindow w(1, {3}, Boundary::ZeroOutside);
    const auto cfg = make_configuration(w, InitSpec::singleton({0}, 2), 2);
    const auto events = enabled_events(m, w, cfg, 0);
    bool boundary_loss = false;
    for (const auto& [ev, rate] : events)
      if (ev.type == EventType::Migration && ev.target == LatticeWindow::kExterior) {
        boundary_loss = true;
        CHECK(rate == doctest::Approx(0.5));
      }
    CHECK(boundary_loss);
  }
  SUBCASE("frozen exterior feeds immigration") {
    const auto m = ModelSpec::model1(1.0, 1.0, 3);
    const LatticeWindow w(1, {3}, Boundary::FrozenFullOutside);
    const auto cfg = make_configuration(w, InitSpec::empty(), 3);
    const auto inflow = boundary_immigration_events(m, w, cfg, 0);
    REQUIRE(inflow.size() == 1);
    CHECK(inflow[0].first.site == LatticeWindow::kExterior);
    CHECK(inflow[0].first.target == 0);
    CHECK(inflow[0].second == doctest::Approx(0.5));
    CHECK(boundary_immigration_events(m, w, cfg, 1).empty());
  }
}

TEST_CASE("dominating single-site chain") {
  const auto m = ModelSpec::model2(0.5, 4.0, 1.0, 3, 1);
  const auto d = dominator(m);
  REQUIRE(d.states() == 4);
  CHECK(d.birth[0] == doctest::Approx(1.0));
  CHECK(d.birth[3] == 0.0);
  CHECK(d.death[1] == doctest::Approx(4.0));
  CHECK(d.death[2] == doctest::Approx(1.0));
  CHECK(d.death[0] == 0.0);
  CHECK_THROWS_AS(dominator(ModelSpec::model1(1.0, 1.0, 3)), std::invalid_argument);
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS(ModelSpec::model2(0.5, 2.0, 1.0, 4, 5), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::model3(0.5, 2.0, 1.0, 4, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::model3(0.5, 2.0, 1.0, 4, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::model2(0.5, 0.8, 1.0, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::model2(2.0, 1.5, 1.0, 4, 2), std::invalid_argument);
  // the mixed regime is reachable with the explicit flag
  ModelSpec relaxed;
  relaxed.variant = ModelVariant::ModelII;
  relaxed.phi = 2.0;
  relaxed.phi_allee = 0.5;
  relaxed.lambda = 1.0;
  relaxed.capacity = 4;
  relaxed.allee_threshold = 2;
  relaxed.relaxed_allee = true;
  CHECK_NOTHROW(relaxed.validated());
  ModelSpec m4;
  m4.variant = ModelVariant::ModelIV;
  m4.phi = 0.5;
  m4.phi_over = 2.0;
  m4.lambda = 1.0;
  m4.capacity = 4;
  m4.sim_cap = 4;
  CHECK_THROWS_AS(m4.validated(), std::invalid_argument);
  m4.sim_cap = 0;
  CHECK(m4.validated().sim_cap == 256);  // default 64 N
}

TEST_SUITE_END();
