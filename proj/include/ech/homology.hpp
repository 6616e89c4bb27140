#pragma once

// Homology of a graded F2 complex by column reduction, organized so that the
// action filtration falls out for free: columns are processed in ascending
// (action, id) order and each homology class remembers the position where it
// was born. Spectral invariants read those birth actions directly.
//
// The reduction computes R = D V with V invertible and unitriangular in the
// processing order and all pivots (lowest nonzero row in a column, "lowest"
// meaning latest position) distinct. Key fact, needing only d^2 = 0: if p is
// the pivot row of some column then column p itself reduces to zero, because
// D R_j = 0 exhibits column p of D as a sum of strictly earlier columns.
// Hence zero columns split into pivot rows (boundaries) and the rest, and
// the V-columns of the rest represent a homology basis. No triangularity of
// D in the order is required, so complexes that fail the action filtration
// (but are structurally sound) get correct homology too.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "sparse_f2.hpp"

namespace ech {

struct Reduction {
  std::vector<index_t> order;  // order[k] = generator index processed k-th
  std::vector<index_t> pos;    // pos[generator] = position in order
  // Columns of R and V, entries in position space, sorted ascending.
  std::vector<std::vector<index_t>> R;
  std::vector<std::vector<index_t>> V;
  std::vector<index_t> owner;  // owner[p] = column position with pivot p, or -1
};

struct HClass {
  index_t birth_pos = -1;   // position in the reduction order
  index_t birth_gen = -1;   // generator index in the complex
  Rational birth_action;    // action of the birth generator
  std::vector<index_t> cycle;  // representative, generator indices, sorted
};

struct HomologyResult {
  GradedComplex complex;
  Reduction red;
  // grading -> classes, sorted by birth position (so by ascending action)
  std::map<std::int64_t, std::vector<HClass>> basis;
  // For each grading g present in basis: matrix of the induced degree -2 map
  // from basis(g) to basis(g-2). Present iff the complex carries a umap.
  std::map<std::int64_t, SparseF2> induced_u;
  // position -> index of its class within basis[grading], or -1
  std::vector<index_t> essential_index;

  std::map<std::int64_t, index_t> dims() const {
    std::map<std::int64_t, index_t> out;
    for (const auto& [g, cls] : basis) out[g] = static_cast<index_t>(cls.size());
    return out;
  }
  index_t total_dim() const {
    index_t n = 0;
    for (const auto& [g, cls] : basis) n += static_cast<index_t>(cls.size());
    return n;
  }
};

namespace detail {

inline std::vector<index_t> to_position_space(const std::vector<index_t>& gen_support,
                                              const std::vector<index_t>& pos) {
  std::vector<index_t> out;
  out.reserve(gen_support.size());
  for (index_t g : gen_support) out.push_back(pos[static_cast<std::size_t>(g)]);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<index_t> to_generator_space(const std::vector<index_t>& pos_support,
                                               const std::vector<index_t>& order) {
  std::vector<index_t> out;
  out.reserve(pos_support.size());
  for (index_t p : pos_support) out.push_back(order[static_cast<std::size_t>(p)]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Expresses a cycle (generator-index support) in the homology basis.
// Returns the grading and the sorted coefficient support within basis[grading].
// Throws if the chain is not a cycle or not homogeneous.
struct Expressed {
  std::int64_t grading = 0;  // meaningful only when coeffs nonempty
  std::vector<index_t> coeffs;
};

inline Expressed express(const HomologyResult& h, const std::vector<index_t>& cycle) {
  Expressed out;
  if (cycle.empty()) return out;
  const auto& gens = h.complex.generators;
  out.grading = gens[static_cast<std::size_t>(cycle.front())].grading;
  for (index_t g : cycle)
    if (gens[static_cast<std::size_t>(g)].grading != out.grading)
      throw Error("express: chain is not homogeneous");
  if (!apply(h.complex.d, cycle).empty())
    throw Error("express: chain is not a cycle");

  std::vector<index_t> w = detail::to_position_space(cycle, h.red.pos);
  while (!w.empty()) {
    index_t p = w.back();
    index_t o = h.red.owner[static_cast<std::size_t>(p)];
    if (o >= 0) {
      w = xor_merge(w, h.red.R[static_cast<std::size_t>(o)]);  // strip a boundary
    } else {
      index_t idx = h.essential_index[static_cast<std::size_t>(p)];
      if (idx < 0) throw Error("express: leading position is neither pivot nor class");
      out.coeffs.push_back(idx);
      w = xor_merge(w, detail::to_position_space(
                           h.basis.at(out.grading)[static_cast<std::size_t>(idx)].cycle,
                           h.red.pos));
    }
  }
  std::sort(out.coeffs.begin(), out.coeffs.end());
  return out;
}

inline HomologyResult homology(const GradedComplex& c) {
  require_structural(c);
  HomologyResult h;
  h.complex = c;
  const index_t n = c.size();

  Reduction& red = h.red;
  red.order.resize(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) red.order[static_cast<std::size_t>(i)] = i;
  std::sort(red.order.begin(), red.order.end(), [&](index_t a, index_t b) {
    const auto& ga = c.generators[static_cast<std::size_t>(a)];
    const auto& gb = c.generators[static_cast<std::size_t>(b)];
    if (ga.action != gb.action) return ga.action < gb.action;
    return ga.id < gb.id;
  });
  red.pos.resize(static_cast<std::size_t>(n));
  for (index_t k = 0; k < n; ++k) red.pos[static_cast<std::size_t>(red.order[static_cast<std::size_t>(k)])] = k;

  red.R.resize(static_cast<std::size_t>(n));
  red.V.resize(static_cast<std::size_t>(n));
  red.owner.assign(static_cast<std::size_t>(n), -1);

  for (index_t k = 0; k < n; ++k) {
    index_t gen = red.order[static_cast<std::size_t>(k)];
    std::vector<index_t> col =
        detail::to_position_space(c.d.cols[static_cast<std::size_t>(gen)], red.pos);
    std::vector<index_t> v{k};
    while (!col.empty()) {
      index_t p = col.back();
      index_t o = red.owner[static_cast<std::size_t>(p)];
      if (o < 0) {
        red.owner[static_cast<std::size_t>(p)] = k;
        break;
      }
      col = xor_merge(col, red.R[static_cast<std::size_t>(o)]);
      v = xor_merge(v, red.V[static_cast<std::size_t>(o)]);
    }
    red.R[static_cast<std::size_t>(k)] = std::move(col);
    red.V[static_cast<std::size_t>(k)] = std::move(v);
  }

  h.essential_index.assign(static_cast<std::size_t>(n), -1);
  for (index_t k = 0; k < n; ++k) {
    if (!red.R[static_cast<std::size_t>(k)].empty()) continue;
    if (red.owner[static_cast<std::size_t>(k)] >= 0) continue;  // pivot row: boundary class
    index_t gen = red.order[static_cast<std::size_t>(k)];
    const auto& g = c.generators[static_cast<std::size_t>(gen)];
    HClass cls;
    cls.birth_pos = k;
    cls.birth_gen = gen;
    cls.birth_action = g.action;
    cls.cycle = detail::to_generator_space(red.V[static_cast<std::size_t>(k)], red.order);
    auto& vec = h.basis[g.grading];
    h.essential_index[static_cast<std::size_t>(k)] = static_cast<index_t>(vec.size());
    vec.push_back(std::move(cls));
  }

  if (c.u) {
    for (const auto& [g, cls] : h.basis) {
      index_t rows = 0;
      if (auto it = h.basis.find(g - 2); it != h.basis.end())
        rows = static_cast<index_t>(it->second.size());
      SparseF2 m = SparseF2::zero(rows, static_cast<index_t>(cls.size()));
      for (std::size_t j = 0; j < cls.size(); ++j) {
        std::vector<index_t> img = apply(*c.u, cls[j].cycle);
        Expressed e = express(h, img);
        if (!e.coeffs.empty() && e.grading != g - 2)
          throw Error("umap image landed in an unexpected grading");
        m.cols[j] = std::move(e.coeffs);
      }
      h.induced_u[g] = std::move(m);
    }
  }
  return h;
}

// Induced map on homology of a chain map: for each source grading g with
// classes, the matrix from basis_src(g) to basis_tgt(g + degree).
inline std::map<std::int64_t, SparseF2> induced_map(const ChainMap& f,
                                                    const HomologyResult& hs,
                                                    const HomologyResult& ht) {
  require_structural(f);
  std::map<std::int64_t, SparseF2> out;
  for (const auto& [g, cls] : hs.basis) {
    index_t rows = 0;
    if (auto it = ht.basis.find(g + f.degree); it != ht.basis.end())
      rows = static_cast<index_t>(it->second.size());
    SparseF2 m = SparseF2::zero(rows, static_cast<index_t>(cls.size()));
    for (std::size_t j = 0; j < cls.size(); ++j) {
      std::vector<index_t> img = apply(f.matrix, cls[j].cycle);
      Expressed e = express(ht, img);
      if (!e.coeffs.empty() && e.grading != g + f.degree)
        throw Error("induced map image landed in an unexpected grading");
      m.cols[j] = std::move(e.coeffs);
    }
    out[g] = std::move(m);
  }
  return out;
}

}  // namespace ech
