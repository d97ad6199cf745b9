#include <doctest.h>

#include <stdexcept>

#include <set>

#include "metapop/lattice.hpp"

using namespace metapop;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("periodic wraparound in one dimension") {
  const LatticeWindow w(1, {5}, Boundary::Periodic);
  const auto nb = neighbors(w, {0});
  REQUIRE(nb.size() == 2);
  std::set<int> coords;
  for (const auto& n : nb) {
    CHECK(!n.exterior);
    coords.insert(n.site[0]);
  }
  CHECK(coords == std::set<int>{4, 1});
}

TEST_CASE("interior site in two dimensions") {
  const LatticeWindow w(2, {4, 4}, Boundary::Periodic);
  const auto nb = neighbors(w, {1, 1});
  REQUIRE(nb.size() == 4);
  std::set<Site> got;
  for (const auto& n : nb) got.insert(n.site);
  CHECK(got == std::set<Site>{{0, 1}, {2, 1}, {1, 0}, {1, 2}});
}

TEST_CASE("zero-outside corner exposes two frozen pseudo-sites") {
  const LatticeWindow w(2, {4, 4}, Boundary::ZeroOutside);
  const auto nb = neighbors(w, {0, 0});
  REQUIRE(nb.size() == 4);
  int exterior = 0, interior = 0;
  for (const auto& n : nb) {
    if (n.exterior) {
      ++exterior;
      CHECK(n.frozen_count == 0);
    } else {
      ++interior;
    }
  }
  CHECK(exterior == 2);
  CHECK(interior == 2);
}

TEST_CASE("frozen-full pseudo-sites carry the capacity") {
  const LatticeWindow w(2, {3, 3}, Boundary::FrozenFullOutside);
  const auto nb = neighbors(w, {0, 1}, 7);
  int exterior = 0;
  for (const auto& n : nb)
    if (n.exterior) {
      ++exterior;
      CHECK(n.frozen_count == 7);
    }
  CHECK(exterior == 1);
}

TEST_CASE("neighbor relation is symmetric under periodic boundaries") {
  for (const auto& sides : {std::vector<int>{2, 5}, std::vector<int>{3, 4}}) {
    const LatticeWindow w(2, sides, Boundary::Periodic);
    for (std::int32_t i = 0; i < w.site_count(); ++i) {
      for (int slot = 0; slot < w.degree(); ++slot) {
        const std::int32_t j = w.neighbor(i, slot);
        REQUIRE(j != LatticeWindow::kExterior);
        bool back = false;
        for (int s2 = 0; s2 < w.degree(); ++s2)
          if (w.neighbor(j, s2) == i) back = true;
        CHECK(back);
      }
    }
  }
}

TEST_CASE("every site has 2d neighbor slots") {
  const LatticeWindow w(3, {2, 3, 2}, Boundary::Periodic);
  CHECK(w.degree() == 6);
  for (std::int32_t i = 0; i < w.site_count(); ++i)
    CHECK(neighbors(w, w.coords_of(i)).size() == 6);
}

TEST_CASE("window validation") {
  CHECK_THROWS_AS(LatticeWindow(0, {}, Boundary::Periodic), std::invalid_argument);
  CHECK_THROWS_AS(LatticeWindow(4, {2, 2, 2, 2}, Boundary::Periodic),
                  std::invalid_argument);
  CHECK_THROWS_AS(LatticeWindow(2, {1, 5}, Boundary::Periodic), std::invalid_argument);
  CHECK_THROWS_AS(LatticeWindow(2, {5}, Boundary::Periodic), std::invalid_argument);
}

TEST_CASE("invalid site is rejected") {
  const LatticeWindow w(2, {4, 4}, Boundary::Periodic);
  CHECK_THROWS_AS(w.index_of({4, 0}), std::invalid_argument);
  CHECK_THROWS_AS(w.index_of({0}), std::invalid_argument);
  CHECK_THROWS_AS(neighbors(w, {-1, 0}), std::invalid_argument);
}

TEST_CASE("site indexing is lexicographic row-major") {
  const LatticeWindow w(2, {3, 4}, Boundary::Periodic);
  std::int32_t expect = 0;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 4; ++y) {
      CHECK(w.index_of({x, y}) == expect);
      CHECK(w.coords_of(expect) == Site{x, y});
      ++expect;
    }
}

TEST_CASE("make_configuration: empty and full") {
  const LatticeWindow w(2, {3, 3}, Boundary::Periodic);
  const auto empty = make_configuration(w, InitSpec::empty());
  CHECK(empty.total() == 0);
  const auto full = make_configuration(w, InitSpec::full_at(5));
  CHECK(full.total() == 45);
  for (auto c : full.counts) CHECK(c == 5);
}

TEST_CASE("make_configuration: singleton capacity violation") {
  const LatticeWindow w(2, {3, 3}, Boundary::Periodic);
  CHECK_THROWS_AS(make_configuration(w, InitSpec::singleton({0, 0}, 3), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_configuration(w, InitSpec::singleton({0, 0}, 0)),
                  std::invalid_argument);
  const auto ok = make_configuration(w, InitSpec::singleton({1, 2}, 2), 2);
  CHECK(ok.total() == 2);
  CHECK(ok.counts[static_cast<std::size_t>(w.index_of({1, 2}))] == 2);
}

TEST_CASE("make_configuration: explicit map against capacity") {
  const LatticeWindow w(1, {4}, Boundary::Periodic);
  CHECK_THROWS_AS(
      make_configuration(w, InitSpec::explicit_cells({{{0}, 1}, {{2}, 9}}), 5),
      std::invalid_argument);
  const auto ok = make_configuration(w, InitSpec::explicit_cells({{{0}, 1}, {{2}, 5}}), 5);
  CHECK(ok.total() == 6);
}

TEST_SUITE_END();
