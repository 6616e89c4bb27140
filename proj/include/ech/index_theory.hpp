#pragma once

// Conley-Zehnder, Fredholm, and ECH index arithmetic, together with the
// trivialization change rules and the adjunction / linking-bound checkers.
// These operate on user-supplied topological bookkeeping (Euler
// characteristic, relative Chern and intersection numbers, writhe, ends):
// the formulas are exact and everything here is integer or rational.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "orbits.hpp"
#include "rational.hpp"

namespace ech {

inline std::int64_t cz_elliptic(const Rational& theta) {
  if (theta == Rational(theta.floor()))
    throw DegeneracyError("elliptic rotation " + theta.str() + " is an integer");
  return 2 * theta.floor() + 1;
}

inline std::int64_t cz_hyperbolic(std::int64_t winding) { return winding; }

// CZ of the q-th iterate: elliptic rotation scales to q*theta, hyperbolic
// winding to q*k.
inline std::int64_t cz_iterate(const Orbit& o, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("iterate must be positive");
  if (o.kind == OrbitKind::elliptic) return cz_elliptic(o.rotation * Rational(q));
  return cz_hyperbolic(o.winding * q);
}

// The total CZ term of the ECH index: sum over iterates 1..m_i for alpha
// minus the same for beta.
inline std::int64_t cz_total(const OrbitSet& alpha, const OrbitSet& beta) {
  auto side = [](const OrbitSet& s) {
    std::int64_t sum = 0;
    for (const auto& [o, m] : s.pairs)
      for (std::int64_t k = 1; k <= m; ++k) sum += cz_iterate(o, k);
    return sum;
  };
  return side(alpha) - side(beta);
}

struct CurveData {
  std::int64_t euler = 0;  // chi of the punctured curve
  std::vector<std::pair<Orbit, std::int64_t>> positive_ends;  // (orbit, end multiplicity)
  std::vector<std::pair<Orbit, std::int64_t>> negative_ends;
  std::int64_t c_tau = 0;
  std::int64_t Q_tau = 0;
  std::int64_t w_tau = 0;   // writhe
  std::int64_t delta = 0;   // count of singular points, >= 0
};

inline void validate_curve(const CurveData& c) {
  if (c.delta < 0) throw std::invalid_argument("delta must be non-negative");
  for (const auto& [o, q] : c.positive_ends) {
    validate_orbit(o);
    if (q < 1) throw std::invalid_argument("end multiplicity must be positive");
  }
  for (const auto& [o, q] : c.negative_ends) {
    validate_orbit(o);
    if (q < 1) throw std::invalid_argument("end multiplicity must be positive");
  }
}

// ind = -chi + 2 c_tau + sum CZ(gamma^q) over positive ends
//                      - sum CZ(gamma^q) over negative ends,
// each end contributing the CZ of its own iterate.
inline std::int64_t fredholm_index(const CurveData& c) {
  validate_curve(c);
  std::int64_t ind = -c.euler + 2 * c.c_tau;
  for (const auto& [o, q] : c.positive_ends) ind += cz_iterate(o, q);
  for (const auto& [o, q] : c.negative_ends) ind -= cz_iterate(o, q);
  return ind;
}

inline std::int64_t ech_index(std::int64_t c_tau, std::int64_t Q_tau, std::int64_t cz_I) {
  return c_tau + Q_tau + cz_I;
}

// Collect the total multiplicity of each orbit across the ends of one sign.
inline OrbitSet ends_orbit_set(const std::vector<std::pair<Orbit, std::int64_t>>& ends) {
  std::map<std::string, std::pair<Orbit, std::int64_t>> agg;
  for (const auto& [o, q] : ends) {
    auto [it, fresh] = agg.emplace(o.id, std::make_pair(o, q));
    if (!fresh) it->second.second += q;
  }
  std::vector<std::pair<Orbit, std::int64_t>> pairs;
  for (auto& [id, oq] : agg) pairs.push_back(std::move(oq));
  return make_orbit_set(std::move(pairs));
}

struct IndexCheck {
  std::int64_t ind = 0;
  std::int64_t I = 0;
  bool ok = false;                 // ind <= I
  bool embedded_equality = false;  // ind == I, informational
};

inline IndexCheck check_index_inequality(const CurveData& c) {
  IndexCheck r;
  r.ind = fredholm_index(c);
  r.I = ech_index(c.c_tau, c.Q_tau,
                  cz_total(ends_orbit_set(c.positive_ends), ends_orbit_set(c.negative_ends)));
  r.ok = r.ind <= r.I;
  r.embedded_equality = r.ind == r.I;
  return r;
}

// Relative adjunction bookkeeping: c_tau = chi + Q_tau + w_tau - 2 delta
// for an embedded curve, so the residual below is 0 exactly when the
// supplied data is consistent.
inline std::int64_t check_adjunction(const CurveData& c) {
  validate_curve(c);
  return c.c_tau - c.euler - c.Q_tau - c.w_tau + 2 * c.delta;
}

// Trivialization change rules. A shift is new minus old per orbit end;
// positive ends add, negative ends subtract.
inline std::int64_t retrivialize_c(std::int64_t c_tau,
                                   const std::vector<std::pair<std::int64_t, std::int64_t>>& pos,
                                   const std::vector<std::pair<std::int64_t, std::int64_t>>& neg) {
  // pairs are (multiplicity, shift)
  for (const auto& [m, s] : pos) c_tau += m * s;
  for (const auto& [m, s] : neg) c_tau -= m * s;
  return c_tau;
}

struct QShift {
  std::int64_t m = 0, m_other = 0, shift = 0;
};

inline std::int64_t retrivialize_Q(std::int64_t Q_tau, const std::vector<QShift>& pos,
                                   const std::vector<QShift>& neg) {
  for (const auto& q : pos) Q_tau += q.m * q.m_other * q.shift;
  for (const auto& q : neg) Q_tau -= q.m * q.m_other * q.shift;
  return Q_tau;
}

// Change of relative homology class: Q picks up the intersection number
// (Z1 - Z2) . [alpha'].
inline std::int64_t reclass_Q(std::int64_t Q_tau, std::int64_t intersection) {
  return Q_tau + intersection;
}

// Shifting the trivialization at an orbit moves elliptic rotation by the
// shift and hyperbolic winding by twice the shift (the eigendirection is a
// line, so one full frame twist winds it twice). Keeps CZ parity intact.
inline Orbit retrivialize_orbit(Orbit o, std::int64_t shift) {
  if (o.kind == OrbitKind::elliptic)
    o.rotation = o.rotation + Rational(shift);
  else
    o.winding += 2 * shift;
  return o;
}

struct LinkingViolation {
  std::size_t i = 0, j = 0;
  std::int64_t linking = 0, bound = 0;
};

struct LinkingReport {
  std::vector<LinkingViolation> violations;
  bool ok() const { return violations.empty(); }
};

// l(zeta_i, zeta_j) <= max(rho_i q_j, rho_j q_i) for all i != j.
inline LinkingReport linking_bound_check(const std::vector<std::int64_t>& rho,
                                         const std::vector<std::int64_t>& q,
                                         const std::vector<std::vector<std::int64_t>>& l) {
  const std::size_t n = rho.size();
  if (q.size() != n || l.size() != n)
    throw std::invalid_argument("linking data sizes disagree");
  for (const auto& row : l)
    if (row.size() != n) throw std::invalid_argument("linking matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (l[i][j] != l[j][i]) throw std::invalid_argument("linking matrix is not symmetric");
  LinkingReport rep;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::int64_t bound = std::max(rho[i] * q[j], rho[j] * q[i]);
      if (l[i][j] > bound) rep.violations.push_back({i, j, l[i][j], bound});
    }
  return rep;
}

// The special hyperbolic orbit created by the handle: winding 0 in the
// canonical trivialization, so CZ vanishes on every iterate.
inline Orbit preset_orbit_h(const Rational& eps = Rational(1, 1000000)) {
  return Orbit{"h", OrbitKind::positive_hyperbolic, Rational(0), 0, eps, ClassLabel{}};
}

// The two index-1 planes through the handle: disk ends on h, one unit of
// relative Chern number.
inline CurveData preset_ps() {
  CurveData c;
  c.euler = 1;
  c.positive_ends = {{preset_orbit_h(), 1}};
  c.c_tau = 1;
  c.Q_tau = 0;
  c.w_tau = 0;
  c.delta = 0;
  return c;
}

inline CurveData preset_pn() { return preset_ps(); }

inline CurveData preset_trivial_cylinder(const Orbit& o) {
  CurveData c;
  c.euler = 0;
  c.positive_ends = {{o, 1}};
  c.negative_ends = {{o, 1}};
  return c;
}

// Disjoint union: indices add, ends concatenate.
inline CurveData disjoint_union(const CurveData& a, const CurveData& b) {
  CurveData c = a;
  c.euler += b.euler;
  c.c_tau += b.c_tau;
  c.Q_tau += b.Q_tau;
  c.w_tau += b.w_tau;
  c.delta += b.delta;
  c.positive_ends.insert(c.positive_ends.end(), b.positive_ends.begin(), b.positive_ends.end());
  c.negative_ends.insert(c.negative_ends.end(), b.negative_ends.begin(), b.negative_ends.end());
  return c;
}

}  // namespace ech
