#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include <ech/complex.hpp>

using ech::GradedComplex;
using ech::Rational;
using ech::SparseF2;

namespace {

// Three-step staircase x2 -> x1 -> x0 with d = single chain; valid.
GradedComplex staircase() {
  GradedComplex c;
  c.generators = {{"x0", 0, Rational(0), {}},
                  {"x1", 1, Rational(1), {}},
                  {"x2", 2, Rational(2), {}}};
  c.d = SparseF2::zero(3, 3);
  c.d.toggle(0, 1);  // x1 -> x0
  return c;
}

bool has_kind(const ech::ValidationReport& rep, const std::string& kind) {
  return std::any_of(rep.items.begin(), rep.items.end(),
                     [&](const ech::Violation& v) { return v.kind == kind; });
}

}  // namespace

TEST_CASE("valid complex yields an empty report", "[complex]") {
  GradedComplex c = staircase();
  ech::ValidationReport rep = ech::validate(c);
  CHECK(rep.ok());
  CHECK(rep.structural_ok());
  CHECK_NOTHROW(ech::require_valid(c));
}

TEST_CASE("duplicate ids are structural violations", "[complex]") {
  GradedComplex c = staircase();
  c.generators[2].id = "x0";
  auto rep = ech::validate(c);
  CHECK_FALSE(rep.structural_ok());
  CHECK(has_kind(rep, "duplicate-id"));
  CHECK_THROWS_AS(ech::require_structural(c), ech::ValidationError);
  CHECK_THROWS_AS(ech::id_index(c), std::invalid_argument);
}

TEST_CASE("differential must drop grading by exactly one", "[complex]") {
  GradedComplex c = staircase();
  c.d.toggle(0, 2);  // x2 -> x0 skips a grading
  auto rep = ech::validate(c);
  CHECK(has_kind(rep, "grading"));
  CHECK_FALSE(rep.structural_ok());
}

TEST_CASE("filtration violations are a separate tier", "[complex]") {
  GradedComplex c = staircase();
  c.generators[0].action = Rational(5);  // x1 -> x0 now raises action
  auto rep = ech::validate(c);
  CHECK(has_kind(rep, "action-order"));
  CHECK(rep.structural_ok());
  CHECK_FALSE(rep.ok());
  CHECK_NOTHROW(ech::require_structural(c));
  CHECK_THROWS_AS(ech::require_valid(c), ech::ValidationError);

  GradedComplex neg = staircase();
  neg.generators[0].action = Rational(-1);
  auto rep2 = ech::validate(neg);
  CHECK(has_kind(rep2, "action-negative"));
  CHECK(rep2.structural_ok());
}

TEST_CASE("d squared entries are reported pairwise", "[complex]") {
  GradedComplex c = staircase();
  c.d.toggle(1, 2);  // now d(x2) = x1 and d(x1) = x0, so d^2(x2) = x0
  auto rep = ech::validate(c);
  CHECK(has_kind(rep, "dsquare"));
  CHECK_FALSE(rep.structural_ok());
}

TEST_CASE("u map must be a degree -2 chain map", "[complex]") {
  GradedComplex c = staircase();
  SparseF2 u = SparseF2::zero(3, 3);
  u.cols[2] = {0};  // x2 -> x0, degree -2, action 2 -> 0: fine
  c.u = u;
  CHECK(ech::validate(c).ok());

  // du + ud != 0: u hits x1's boundary chain inconsistently.
  GradedComplex bad = staircase();
  bad.generators.push_back({"x3", 3, Rational(3), {}});
  bad.d = SparseF2::zero(4, 4);
  bad.d.toggle(0, 1);
  SparseF2 ub = SparseF2::zero(4, 4);
  ub.cols[3] = {1};  // u(x3) = x1, but d(x3) = 0 while d(u x3) = x0
  bad.u = ub;
  auto rep = ech::validate(bad);
  CHECK(has_kind(rep, "umap-chain"));
  CHECK_FALSE(rep.structural_ok());
}

TEST_CASE("label mismatches across an entry leak classes", "[complex]") {
  GradedComplex c = staircase();
  ech::ClassLabel l;
  l.free = {1};
  for (auto& g : c.generators) g.label = l;
  c.generators[0].label.free = {2};  // x1 -> x0 crosses classes
  auto rep = ech::validate(c);
  CHECK(has_kind(rep, "class-leak"));
  CHECK_FALSE(rep.structural_ok());
}

TEST_CASE("matrix shape mismatches short-circuit", "[complex]") {
  GradedComplex c = staircase();
  c.d = SparseF2::zero(2, 2);
  auto rep = ech::validate(c);
  CHECK(has_kind(rep, "shape"));
  CHECK_FALSE(rep.structural_ok());
}

TEST_CASE("chain map validation checks degree, slack and the chain identity", "[complex]") {
  GradedComplex a = staircase();
  GradedComplex b = staircase();

  ech::ChainMap f;
  f.source = a;
  f.target = b;
  f.degree = 0;
  f.action_slack = Rational(0);
  f.matrix = SparseF2::identity(3);
  CHECK(ech::validate(f).ok());

  // Raise an action in the target: entry now exceeds slack 0 but the map is
  // still structurally a chain map.
  f.target.generators[1].action = Rational(10);
  auto rep = ech::validate(f);
  CHECK(has_kind(rep, "action-slack"));
  CHECK(rep.structural_ok());
  f.action_slack = Rational(10);
  CHECK(ech::validate(f).ok());

  // Break the chain identity: map x1 to x2's slot.
  ech::ChainMap g;
  g.source = a;
  g.target = b;
  g.degree = 0;
  g.matrix = SparseF2::zero(3, 3);
  g.matrix.toggle(0, 0);
  g.matrix.toggle(2, 1);  // x1 -> x2 is also a grading violation
  auto rep2 = ech::validate(g);
  CHECK(has_kind(rep2, "grading"));
  CHECK(has_kind(rep2, "not-chain-map"));
  CHECK_THROWS_AS(ech::require_structural(g), ech::ValidationError);
}

TEST_CASE("validation summary lists offenders up to a cap", "[complex]") {
  GradedComplex c;
  for (int i = 0; i < 12; ++i)
    c.generators.push_back({"g", 0, Rational(0), {}});  // 11 duplicate-id hits
  c.d = SparseF2::zero(12, 12);
  auto rep = ech::validate(c);
  CHECK(rep.items.size() == 11);
  std::string s = rep.summary();
  CHECK(s.find("duplicate-id") != std::string::npos);
  CHECK(s.find("...") != std::string::npos);  // truncation marker
}
