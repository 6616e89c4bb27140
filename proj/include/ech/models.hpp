#pragma once

// Concrete chain models: irrational ellipsoid boundaries (the S^3 family),
// S^1 x S^2 with synthetic actions, and seeded random valid complexes for
// property tests. All randomness is mt19937_64 plus modular reduction so
// that a seed means the same complex on every platform.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "orbits.hpp"
#include "rational.hpp"
#include "sparse_f2.hpp"

namespace ech {

struct LatticeRow {
  std::int64_t m = 0, n = 0;   // multiplicities of the two orbits
  Rational action;             // m*a + n*b
  std::int64_t grading = 0;    // 2 * action rank
};

// Boundary of the ellipsoid E(a, b) with a/b standing in for an irrational
// ratio, truncated at action L. Generators are the lattice points
// m*a + n*b < L in action order; grading is twice the rank, the
// differential vanishes, and U steps one rank down. The two underlying
// orbits have rotation numbers a/b and b/a.
struct EllipsoidModel {
  Rational a, b, L;
  std::vector<Orbit> catalog;      // the two elliptic orbits
  std::vector<LatticeRow> lattice; // one row per generator, action order
  GradedComplex complex;
};

inline EllipsoidModel ellipsoid(const Rational& a, const Rational& b, const Rational& L) {
  if (!(Rational(0) < a) || !(Rational(0) < b))
    throw std::invalid_argument("ellipsoid axes must be positive");
  EllipsoidModel mod;
  mod.a = a;
  mod.b = b;
  mod.L = L;

  Orbit ga{"a", OrbitKind::elliptic, a / b, 0, a, ClassLabel{}};
  Orbit gb{"b", OrbitKind::elliptic, b / a, 0, b, ClassLabel{}};
  validate_orbit(ga);  // integer rotation = rational axis ratio, rejected
  validate_orbit(gb);
  mod.catalog = {ga, gb};

  std::vector<LatticeRow> rows;
  for (std::int64_t m = 0;; ++m) {
    Rational base = Rational(m) * a;
    if (!(base < L)) break;
    for (std::int64_t n = 0;; ++n) {
      Rational act = base + Rational(n) * b;
      // Strict bound: a value landing exactly on L is simply not below it.
      if (!(act < L)) break;
      rows.push_back({m, n, act, 0});
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const LatticeRow& x, const LatticeRow& y) { return x.action < y.action; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i - 1].action == rows[i].action)
      throw DegeneracyError("lattice values tie at " + rows[i].action.str() +
                            "; use a finer rational approximation of the axis ratio");
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r].grading = 2 * static_cast<std::int64_t>(r);
  mod.lattice = rows;

  GradedComplex& c = mod.complex;
  for (const auto& row : rows) {
    std::vector<std::pair<Orbit, std::int64_t>> pairs;
    if (row.m > 0) pairs.emplace_back(ga, row.m);
    if (row.n > 0) pairs.emplace_back(gb, row.n);
    OrbitSet s = make_orbit_set(std::move(pairs));
    c.generators.push_back({name(s), row.grading, row.action, ClassLabel{}});
  }
  const index_t n = c.size();
  c.d = SparseF2::zero(n, n);
  SparseF2 u = SparseF2::zero(n, n);
  for (index_t r = 1; r < n; ++r) u.cols[static_cast<std::size_t>(r)] = {r - 1};
  c.u = std::move(u);
  return mod;
}

// S^1 x S^2: one generator per grading 0..2N-1, zero differential, U the
// double downward shift killing gradings 0 and 1. The actions are synthetic
// (grading g gets (g+1) * eps0); any filtration-sensitive statement about
// this model is convention-dependent and flagged as such by callers.
struct S1xS2Model {
  std::int64_t depth = 0;
  Rational eps0;
  bool synthetic_actions = true;
  GradedComplex complex;
};

inline S1xS2Model s1_x_s2(std::int64_t N, const Rational& eps0 = Rational(1, 1000)) {
  if (N < 1) throw std::invalid_argument("depth must be at least 1");
  if (!(Rational(0) < eps0)) throw std::invalid_argument("action unit must be positive");
  S1xS2Model mod;
  mod.depth = N;
  mod.eps0 = eps0;
  GradedComplex& c = mod.complex;
  for (std::int64_t g = 0; g < 2 * N; ++g)
    c.generators.push_back({"z" + std::to_string(g), g, Rational(g + 1) * eps0, ClassLabel{}});
  const index_t n = c.size();
  c.d = SparseF2::zero(n, n);
  SparseF2 u = SparseF2::zero(n, n);
  for (index_t g = 2; g < n; ++g) u.cols[static_cast<std::size_t>(g)] = {g - 2};
  c.u = std::move(u);
  return mod;
}

namespace detail {

// deterministic coin: threshold compare against a modulus draw
inline bool coin(std::mt19937_64& rng, double p) {
  std::uint64_t draw = rng() % 10000;
  return draw < static_cast<std::uint64_t>(p * 10000.0);
}

}  // namespace detail

// Seeded valid complex. Construction guarantees every invariant instead of
// sampling and rejecting: start from a canonical form (cancelling pairs
// across adjacent gradings plus a shift umap on the leftovers, all entries
// pointing down in action), then conjugate by a random grading-preserving,
// action-lowering unitriangular change of basis. Conjugation preserves
// d^2 = 0 and du = ud identically.
inline GradedComplex random_model(std::uint64_t seed, index_t n_generators, double density,
                                  bool with_u = true) {
  if (n_generators <= 0) throw std::invalid_argument("need at least one generator");
  if (density < 0.0 || density > 1.0) throw std::invalid_argument("density must be in [0,1]");
  std::mt19937_64 rng(seed);
  const index_t n = n_generators;
  const std::int64_t span = 6;

  GradedComplex c;
  for (index_t i = 0; i < n; ++i) {
    Generator g;
    g.id = "g" + std::to_string(i);
    g.grading = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
    // ascending with gaps, denominator fixed: generator i sits near i+1
    g.action = Rational(static_cast<std::int64_t>((static_cast<std::uint64_t>(i) + 1) * 1000 +
                                                  rng() % 997),
                        1000);
    c.generators.push_back(std::move(g));
  }

  // canonical differential: pair each generator with at most one earlier
  // partner one grading down; targets and sources stay disjoint
  SparseF2 d0 = SparseF2::zero(n, n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (index_t i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)] || !detail::coin(rng, density)) continue;
    std::vector<index_t> partners;
    for (index_t j = 0; j < i; ++j)
      if (!used[static_cast<std::size_t>(j)] &&
          c.generators[static_cast<std::size_t>(j)].grading ==
              c.generators[static_cast<std::size_t>(i)].grading - 1)
        partners.push_back(j);
    if (partners.empty()) continue;
    index_t j = partners[rng() % partners.size()];
    d0.cols[static_cast<std::size_t>(i)] = {j};
    used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
  }

  // canonical umap on the leftovers: chain condition holds because d0 never
  // touches them in either direction
  SparseF2 u0 = SparseF2::zero(n, n);
  if (with_u) {
    for (index_t i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)] || !detail::coin(rng, 0.75)) continue;
      std::vector<index_t> partners;
      for (index_t j = 0; j < i; ++j)
        if (!used[static_cast<std::size_t>(j)] &&
            c.generators[static_cast<std::size_t>(j)].grading ==
                c.generators[static_cast<std::size_t>(i)].grading - 2)
          partners.push_back(j);
      if (partners.empty()) continue;
      u0.cols[static_cast<std::size_t>(i)] = {partners[rng() % partners.size()]};
    }
  }

  // random unitriangular change of basis, grading-preserving and strictly
  // action-lowering below the diagonal
  SparseF2 p = SparseF2::identity(n);
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < i; ++j)
      if (c.generators[static_cast<std::size_t>(j)].grading ==
              c.generators[static_cast<std::size_t>(i)].grading &&
          detail::coin(rng, density * 0.5))
        p.toggle(j, i);
  // inverse via the nilpotent series: (I + N)^-1 = I + N + N^2 + ...
  SparseF2 nil = add(p, SparseF2::identity(n));
  SparseF2 pinv = SparseF2::identity(n);
  SparseF2 pw = nil;
  while (pw.n_entries() > 0) {
    pinv = add(pinv, pw);
    pw = multiply(pw, nil);
  }

  c.d = multiply(multiply(p, d0), pinv);
  if (with_u) c.u = multiply(multiply(p, u0), pinv);
  return c;
}

// Seeded degree -1, strictly action-lowering matrix on an existing complex;
// no chain condition. This is the shape of admissible homotopy data for the
// connected-sum block assembly.
inline SparseF2 random_k_map(std::uint64_t seed, const GradedComplex& c, double density) {
  std::mt19937_64 rng(seed);
  const index_t n = c.size();
  SparseF2 k = SparseF2::zero(n, n);
  for (index_t j = 0; j < n; ++j) {
    const auto& src = c.generators[static_cast<std::size_t>(j)];
    for (index_t i = 0; i < n; ++i) {
      const auto& tgt = c.generators[static_cast<std::size_t>(i)];
      if (tgt.grading == src.grading - 1 && tgt.action < src.action &&
          detail::coin(rng, density))
        k.cols[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  return k;
}

}  // namespace ech
