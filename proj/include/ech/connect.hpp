#pragma once

// The connected-sum engine. Given two filtered complexes with umaps, build
// the block complex on C_o ⊕ C_h: the o-part is the tensor complex, the
// h-part is the same set of generators tagged with the special hyperbolic
// orbit h (grading +1, action +eps), and the differential is
//
//   [ d_oo    0   ]        d_oo = d1 x id + id x d2
//   [ d_ho   d_hh ]        d_hh = h d_oo h^{-1}   (same matrix in h indices)
//                          d_ho = h (u1 x id + id x u2 + dK + Kd)
//
// for any choice of homotopy data K (degree -1, action-lowering). The
// comparison map F = [[id, 0], [hK, h]] identifies the mapping cone of
// u1 x id + id x u2 with this complex, which is what makes the derived
// tensor compute the connected sum.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "filtration.hpp"
#include "homology.hpp"
#include "products.hpp"
#include "rational.hpp"
#include "sparse_f2.hpp"

namespace ech {

struct ConeData {
  GradedComplex c1, c2;
  std::optional<Rational> eps;     // action of h; default: smallest positive action / 10^6
  std::optional<SparseF2> k_map;   // homotopy data on the tensor complex; default 0
};

struct BlockDifferential {
  SparseF2 d_oo, d_oh, d_ho, d_hh;  // each n_o x n_o, h-part in o indices
};

struct ConeAssembly {
  GradedComplex c1, c2;
  GradedComplex tensor_complex;  // C_o, carrying u = u1 x id
  index_t n_o = 0;
  Rational eps;
  SparseF2 k_map;
  BlockDifferential blocks;
  GradedComplex cone;            // generators: tensor ids, then "h*" tagged
};

namespace detail {

inline Rational smallest_positive_action(const GradedComplex& c) {
  std::optional<Rational> best;
  for (const auto& g : c.generators)
    if (Rational(0) < g.action && (!best || g.action < *best)) best = g.action;
  // a complex concentrated at action 0 has no gaps for eps to respect
  return best ? *best : Rational(1);
}

}  // namespace detail

inline ConeAssembly assemble_cone(const ConeData& data) {
  if (!data.c1.u || !data.c2.u) throw Error("both summands need a umap");
  ConeAssembly a;
  a.c1 = data.c1;
  a.c2 = data.c2;
  a.tensor_complex = tensor(data.c1, data.c2);
  require_valid(a.tensor_complex);
  const index_t n = a.tensor_complex.size();
  a.n_o = n;

  a.eps = data.eps ? *data.eps
                   : detail::smallest_positive_action(a.tensor_complex) / Rational(1000000);
  if (!(Rational(0) < a.eps)) throw Error("h needs positive action");
  Rational floor_gap = detail::smallest_positive_action(a.tensor_complex);
  if (!(a.eps < floor_gap))
    throw Error("h action " + a.eps.str() + " is not below the smallest positive action " +
                floor_gap.str());

  a.k_map = data.k_map ? *data.k_map : SparseF2::zero(n, n);
  if (a.k_map.rows != n || a.k_map.n_cols() != n)
    throw Error("homotopy map has the wrong shape");
  for (auto [i, j] : a.k_map.entries()) {
    const auto& src = a.tensor_complex.generators[static_cast<std::size_t>(j)];
    const auto& tgt = a.tensor_complex.generators[static_cast<std::size_t>(i)];
    if (tgt.grading != src.grading - 1)
      throw Error("homotopy map entry " + src.id + " -> " + tgt.id + " is not degree -1");
    if (!(tgt.action < src.action))
      throw Error("homotopy map entry " + src.id + " -> " + tgt.id + " does not lower action");
  }

  const SparseF2& d = a.tensor_complex.d;
  SparseF2 phi = add(kron(*data.c1.u, SparseF2::identity(data.c2.size())),
                     kron(SparseF2::identity(data.c1.size()), *data.c2.u));
  a.blocks.d_oo = d;
  a.blocks.d_oh = SparseF2::zero(n, n);
  a.blocks.d_hh = d;
  a.blocks.d_ho = add(phi, add(multiply(d, a.k_map), multiply(a.k_map, d)));

  GradedComplex& cone = a.cone;
  cone.generators.reserve(static_cast<std::size_t>(2 * n));
  for (const auto& g : a.tensor_complex.generators) cone.generators.push_back(g);
  for (const auto& g : a.tensor_complex.generators) {
    Generator h = g;
    h.id = "h*" + g.id;
    h.grading += 1;
    h.action = h.action + a.eps;
    cone.generators.push_back(std::move(h));
  }
  id_index(cone);
  cone.d = SparseF2::zero(2 * n, 2 * n);
  for (index_t j = 0; j < n; ++j) {
    auto& col = cone.d.cols[static_cast<std::size_t>(j)];
    col = a.blocks.d_oo.cols[static_cast<std::size_t>(j)];
    for (index_t i : a.blocks.d_ho.cols[static_cast<std::size_t>(j)]) col.push_back(n + i);
    for (index_t i : a.blocks.d_hh.cols[static_cast<std::size_t>(j)])
      cone.d.cols[static_cast<std::size_t>(n + j)].push_back(n + i);
  }
  // U descends to the cone as [[u, 0], [uK + Ku, u]]; the off-diagonal block
  // is exactly what makes it commute with the block differential for any K.
  const SparseF2& u = *a.tensor_complex.u;
  SparseF2 x = add(multiply(u, a.k_map), multiply(a.k_map, u));
  SparseF2 cu = SparseF2::zero(2 * n, 2 * n);
  for (index_t j = 0; j < n; ++j) {
    auto& col = cu.cols[static_cast<std::size_t>(j)];
    col = u.cols[static_cast<std::size_t>(j)];
    for (index_t i : x.cols[static_cast<std::size_t>(j)]) col.push_back(n + i);
    for (index_t i : u.cols[static_cast<std::size_t>(j)])
      cu.cols[static_cast<std::size_t>(n + j)].push_back(n + i);
  }
  cone.u = std::move(cu);

  ValidationReport rep = validate(cone);
  if (!rep.structural_ok()) throw ValidationError(std::move(rep));
  if (!rep.ok())
    throw Error("h action " + a.eps.str() +
                " is too large for the action gaps of this pair: " + rep.summary());
  return a;
}

inline GradedComplex build_cone_complex(const ConeData& data) { return assemble_cone(data).cone; }

// Filtered cone by the two-threshold rule: o-generators of action < L,
// h-tagged generators whose o-part has action < L - eps. This is the
// independent definition; it coincides with truncating the built cone at L,
// and tests hold the two against each other.
inline GradedComplex filtered_cone(const ConeData& data, const Rational& L) {
  ConeAssembly a = assemble_cone(data);
  const index_t n = a.n_o;
  std::vector<index_t> keep;
  std::vector<index_t> newpos(static_cast<std::size_t>(2 * n), -1);
  for (index_t k = 0; k < 2 * n; ++k) {
    const Rational& o_action =
        a.tensor_complex.generators[static_cast<std::size_t>(k % n)].action;
    Rational bound = k < n ? L : L - a.eps;
    if (o_action == bound)
      throw DegeneracyError("generator '" + a.cone.generators[static_cast<std::size_t>(k)].id +
                            "' sits exactly at the filtration level");
    if (o_action < bound) {
      newpos[static_cast<std::size_t>(k)] = static_cast<index_t>(keep.size());
      keep.push_back(k);
    }
  }
  GradedComplex out;
  for (index_t k : keep) out.generators.push_back(a.cone.generators[static_cast<std::size_t>(k)]);
  auto restrict_matrix = [&](const SparseF2& m) {
    SparseF2 r = SparseF2::zero(static_cast<index_t>(keep.size()),
                                static_cast<index_t>(keep.size()));
    for (std::size_t jn = 0; jn < keep.size(); ++jn)
      for (index_t i : m.cols[static_cast<std::size_t>(keep[jn])]) {
        index_t in = newpos[static_cast<std::size_t>(i)];
        if (in < 0)
          throw Error("two-threshold rule dropped the target of a kept generator");
        r.cols[jn].push_back(in);
      }
    return r;
  };
  out.d = restrict_matrix(a.cone.d);
  out.u = restrict_matrix(*a.cone.u);
  require_valid(out);
  return out;
}

// The comparison chain map F = [[id, 0], [hK, h]] from the mapping cone of
// u1 x id + id x u2 to the built cone. Its action slack is exactly eps: the
// h tag is the only way F raises action.
inline ChainMap chain_equivalence(const ConeAssembly& a) {
  const index_t n = a.n_o;
  ChainMap f;
  f.degree = 0;
  f.action_slack = a.eps;
  ChainMap phi;
  phi.degree = -2;
  phi.action_slack = Rational(0);
  phi.matrix = add(kron(*a.c1.u, SparseF2::identity(a.c2.size())),
                   kron(SparseF2::identity(a.c1.size()), *a.c2.u));
  phi.source = a.tensor_complex;
  phi.target = a.tensor_complex;
  f.source = mapping_cone(phi);
  f.target = a.cone;
  f.matrix = SparseF2::zero(2 * n, 2 * n);
  for (index_t j = 0; j < n; ++j) {
    auto& col = f.matrix.cols[static_cast<std::size_t>(j)];
    col.push_back(j);  // identity on the o block
    for (index_t i : a.k_map.cols[static_cast<std::size_t>(j)]) col.push_back(n + i);
    f.matrix.cols[static_cast<std::size_t>(n + j)] = {n + j};  // h-append bijection
  }
  return f;
}

struct EquivalenceReport {
  bool oo_matches = false;    // cone top block equals d1 x id + id x d2
  bool oh_vanishes = false;   // the upward block is zero
  bool hh_conjugated = false; // h d_oo = d_hh h
  bool ho_solves = false;     // d_ho = h(u1 x id + id x u2 + dK + Kd)
  bool square_zero = false;
  bool f_chain_map = false;   // F d_cone = d_# F entrywise
  bool homology_iso = false;  // equal graded dims and invertible induced maps
  std::vector<std::string> failures;

  bool all_ok() const { return failures.empty(); }
};

inline EquivalenceReport check_chain_equivalence(const ConeAssembly& a) {
  EquivalenceReport rep;
  auto note = [&](bool ok, const char* name) {
    if (!ok) rep.failures.push_back(name);
    return ok;
  };

  SparseF2 phi = add(kron(*a.c1.u, SparseF2::identity(a.c2.size())),
                     kron(SparseF2::identity(a.c1.size()), *a.c2.u));
  const SparseF2& d = a.tensor_complex.d;
  rep.oo_matches = note(a.blocks.d_oo == d, "oo block is the tensor differential");
  rep.oh_vanishes = note(a.blocks.d_oh.n_entries() == 0, "oh block vanishes");
  rep.hh_conjugated = note(a.blocks.d_hh == d, "hh block is the h-conjugate");
  SparseF2 expected_ho = add(phi, add(multiply(d, a.k_map), multiply(a.k_map, d)));
  rep.ho_solves = note(a.blocks.d_ho == expected_ho, "ho block solves the homotopy equation");
  rep.square_zero = note(multiply(a.cone.d, a.cone.d).n_entries() == 0, "square zero");

  ChainMap f = chain_equivalence(a);
  SparseF2 comm = add(multiply(f.matrix, f.source.d), multiply(f.target.d, f.matrix));
  rep.f_chain_map = note(comm.n_entries() == 0, "F is a chain map");

  HomologyResult hs = homology(f.source);
  HomologyResult ht = homology(f.target);
  bool iso = hs.dims() == ht.dims();
  if (iso) {
    auto induced = induced_map(f, hs, ht);
    for (const auto& [g, m] : induced)
      if (!invertible(m)) {
        iso = false;
        break;
      }
  }
  rep.homology_iso = note(iso, "F induces a graded isomorphism");
  return rep;
}

// Derived tensor of the two factors; by the chain equivalence this has the
// graded dimensions of the built cone for every eps and K.
inline HomologyResult connected_sum_homology(const GradedComplex& c1, const GradedComplex& c2) {
  return derived_tensor(c1, c2);
}

struct ClassReport {
  index_t checked = 0;                // generators found in the target class
  std::vector<std::string> leaks;
  bool ok() const { return leaks.empty(); }
};

// Every cone generator must carry the sum of its factor labels, h-tagged
// generators the label of their o-partner (h itself is null-homologous).
// `checked` counts the generators found in class gamma1 + gamma2.
inline ClassReport class_decomposition_check(const ConeAssembly& a, const ClassLabel& gamma1,
                                             const ClassLabel& gamma2) {
  ClassReport rep;
  ClassLabel target = add(gamma1, gamma2);
  const index_t n = a.n_o;
  const index_t n2 = a.c2.size();
  for (index_t k = 0; k < a.cone.size(); ++k) {
    const auto& g = a.cone.generators[static_cast<std::size_t>(k)];
    index_t o = k % n;
    const auto& f1 = a.c1.generators[static_cast<std::size_t>(o / n2)];
    const auto& f2 = a.c2.generators[static_cast<std::size_t>(o % n2)];
    ClassLabel expected = add(f1.label, f2.label);
    if (g.label != expected)
      rep.leaks.push_back("generator '" + g.id + "' carries " + to_string(g.label) +
                          ", factors sum to " + to_string(expected));
    if (k >= n && g.label != a.cone.generators[static_cast<std::size_t>(o)].label)
      rep.leaks.push_back("generator '" + g.id + "' differs from its o-partner");
    if (g.label == target) ++rep.checked;
  }
  return rep;
}

}  // namespace ech
