#include <catch2/catch_amalgamated.hpp>

#include <ech/ech.hpp>

#include "oracle.hpp"

using ech::GradedComplex;
using ech::Rational;

TEST_CASE("truncation keeps exactly the strict sublevel set", "[filtration]") {
  auto mod = ech::ellipsoid(Rational(1), Rational(141421, 100000), Rational(3));
  GradedComplex t = ech::truncate(mod.complex, Rational(3, 2));
  REQUIRE(t.size() == 3);  // actions 0, 1, 141421/100000
  for (const auto& g : t.generators) CHECK(g.action < Rational(3, 2));
  CHECK(ech::validate(t).ok());
  REQUIRE(t.u.has_value());

  GradedComplex everything = ech::truncate(mod.complex, Rational(100));
  CHECK(everything.size() == mod.complex.size());

  GradedComplex only_empty = ech::truncate(mod.complex, Rational(1, 2));
  REQUIRE(only_empty.size() == 1);
  CHECK(only_empty.generators[0].id == "empty");
}

TEST_CASE("a generator exactly at the level is a degeneracy", "[filtration]") {
  auto mod = ech::ellipsoid(Rational(1), Rational(141421, 100000), Rational(3));
  CHECK_THROWS_AS(ech::truncate(mod.complex, Rational(1)), ech::DegeneracyError);
  CHECK_THROWS_AS(ech::truncate(mod.complex, Rational(141421, 100000)), ech::DegeneracyError);
}

TEST_CASE("truncation of random models is closed under the differential", "[filtration]") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    GradedComplex c = ech::random_model(seed, 16, 0.4, true);
    auto ts = ech::auto_thresholds(c);
    for (const auto& L : ts) {
      GradedComplex t = ech::truncate(c, L);
      INFO("seed " << seed << " L " << L.str());
      CHECK(ech::validate(t).ok());
    }
  }
}

TEST_CASE("inclusions are chain maps and match generators by id", "[filtration]") {
  GradedComplex c = ech::random_model(7, 15, 0.4, false);
  auto ts = ech::auto_thresholds(c);
  REQUIRE(ts.size() >= 2);
  GradedComplex small = ech::truncate(c, ts[ts.size() / 2]);
  ech::ChainMap f = ech::inclusion(small, c);
  CHECK(f.degree == 0);
  CHECK(ech::validate(f).ok());
  CHECK(f.matrix.n_entries() == small.size());

  GradedComplex unrelated = ech::random_model(8, 15, 0.4, false);
  CHECK_THROWS_AS(ech::inclusion(small, unrelated), ech::Error);
}

TEST_CASE("towers hold strictly increasing thresholds and nested levels", "[filtration]") {
  auto mod = ech::ellipsoid(Rational(1), Rational(141421, 100000), Rational(4));
  auto tower = ech::make_tower(mod.complex, {Rational(3, 2), Rational(5, 2), Rational(4)});
  REQUIRE(tower.levels.size() == 3);
  CHECK(tower.levels[0].size() < tower.levels[1].size());
  CHECK(tower.levels[1].size() < tower.levels[2].size());
  CHECK(tower.inclusions.size() == 2);
  CHECK(tower.top_to_base.target.size() == mod.complex.size());

  CHECK_THROWS_AS(ech::make_tower(mod.complex, {}), std::invalid_argument);
  CHECK_THROWS_AS(ech::make_tower(mod.complex, {Rational(2), Rational(2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ech::make_tower(mod.complex, {Rational(3), Rational(2)}),
                  std::invalid_argument);
}

TEST_CASE("auto thresholds separate every action value and cover the top", "[filtration]") {
  GradedComplex c = ech::random_model(9, 12, 0.3, false);
  auto ts = ech::auto_thresholds(c);
  // Each threshold avoids every generator action (midpoints + top bump).
  for (const auto& L : ts)
    for (const auto& g : c.generators) CHECK(g.action != L);
  // The last threshold clears everything.
  CHECK(ech::truncate(c, ts.back()).size() == c.size());
  // Towers built on them work unmodified.
  CHECK_NOTHROW(ech::make_tower(c, ts));
}

TEST_CASE("stabilization finds the first level where a grading settles", "[filtration][oracle]") {
  // On the staircase model the homology at grading 2k appears exactly when
  // the (k+1)-th smallest lattice value drops below the threshold.
  auto mod = ech::ellipsoid(Rational(1), Rational(141421, 100000), Rational(3));
  auto tower = ech::make_tower(mod.complex, ech::auto_thresholds(mod.complex));
  auto values = oracle::lattice_spectrum(Rational(1), Rational(141421, 100000), 6);

  for (std::int64_t k = 0; k < 6; ++k) {
    auto p = ech::stabilization_profile(tower, 2 * k);
    REQUIRE(p.stable_from.has_value());
    std::size_t expect = 0;
    while (!(values[static_cast<std::size_t>(k)] < tower.thresholds[expect])) ++expect;
    INFO("grading " << 2 * k);
    CHECK(*p.stable_from == expect);
    CHECK(p.base_dim == 1);
    CHECK(p.level_dims.back() == 1);
  }

  // A grading with no homology anywhere stabilizes immediately.
  auto odd = ech::stabilization_profile(tower, 1);
  REQUIRE(odd.stable_from.has_value());
  CHECK(*odd.stable_from == 0);
  CHECK(odd.base_dim == 0);
}

TEST_CASE("a class born above the top threshold reports unstabilized", "[filtration]") {
  auto mod = ech::ellipsoid(Rational(1), Rational(141421, 100000), Rational(3));
  // Tower stopping below the last generator (action 282842/100000).
  auto tower = ech::make_tower(mod.complex, {Rational(1, 2), Rational(5, 2)});
  auto p = ech::stabilization_profile(tower, 10);
  CHECK(p.base_dim == 1);
  CHECK(p.level_dims == std::vector<ech::index_t>{0, 0});
  CHECK_FALSE(p.stable_from.has_value());
}
