#pragma once

// Tensor products and mapping cones of graded F2 complexes, and the derived
// tensor: the homology of the cone of u1 x id + id x u2 on the tensor
// complex. Over F2 there are no Koszul signs, so the product differential is
// literally d1 x id + id x d2.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "homology.hpp"
#include "sparse_f2.hpp"

namespace ech {

// Kronecker product in the row-major pairing (i1, i2) -> i1 * rows2 + i2.
inline SparseF2 kron(const SparseF2& a, const SparseF2& b) {
  SparseF2 out = SparseF2::zero(a.rows * b.rows, a.n_cols() * b.n_cols());
  for (index_t j1 = 0; j1 < a.n_cols(); ++j1) {
    for (index_t j2 = 0; j2 < b.n_cols(); ++j2) {
      auto& col = out.cols[static_cast<std::size_t>(j1 * b.n_cols() + j2)];
      for (index_t i1 : a.cols[static_cast<std::size_t>(j1)])
        for (index_t i2 : b.cols[static_cast<std::size_t>(j2)])
          col.push_back(i1 * b.rows + i2);
      // i1 ascending and i2 ascending already yields sorted output
    }
  }
  return out;
}

// Tensor product complex. Generator (x, y) gets id "x|y", grading the sum,
// action the sum, class label the sum (both factors must declare the same
// label group). When the left factor carries a umap the product carries
// u1 x id; the symmetric choice differs by a chain homotopy and everything
// downstream is checked against that.
inline GradedComplex tensor(const GradedComplex& c1, const GradedComplex& c2) {
  require_structural(c1);
  require_structural(c2);
  if (!c1.generators.empty() && !c2.generators.empty() &&
      !same_shape(c1.generators.front().label, c2.generators.front().label))
    throw Error("tensor factors declare different class label groups");
  GradedComplex out;
  const index_t n1 = c1.size(), n2 = c2.size();
  out.generators.reserve(static_cast<std::size_t>(n1 * n2));
  for (index_t i = 0; i < n1; ++i) {
    const auto& g1 = c1.generators[static_cast<std::size_t>(i)];
    for (index_t j = 0; j < n2; ++j) {
      const auto& g2 = c2.generators[static_cast<std::size_t>(j)];
      Generator g;
      g.id = g1.id + "|" + g2.id;
      g.grading = g1.grading + g2.grading;
      g.action = g1.action + g2.action;
      g.label = add(g1.label, g2.label);
      out.generators.push_back(std::move(g));
    }
  }
  id_index(out);  // throws if the id scheme collides with factor ids
  out.d = add(kron(c1.d, SparseF2::identity(n2)), kron(SparseF2::identity(n1), c2.d));
  if (c1.u) out.u = kron(*c1.u, SparseF2::identity(n2));
  return out;
}

// Mapping cone of a chain map f of degree deg: source copy unshifted, target
// copy shifted in grading by -(deg + 1), so the f block has degree -1 on the
// cone. For deg = -2 the target copy moves up by one. Target copy ids get a
// "~" prefix. Actions are kept as-is on both copies, which means the cone of
// an action-preserving map fails the filtration tier; its homology is still
// well defined and that is all the comparison arguments need.
inline GradedComplex mapping_cone(const ChainMap& f) {
  require_structural(f);
  const std::int64_t shift = -(f.degree + 1);
  const index_t ns = f.source.size(), nt = f.target.size();
  GradedComplex out;
  out.generators.reserve(static_cast<std::size_t>(ns + nt));
  for (const auto& g : f.source.generators) out.generators.push_back(g);
  for (const auto& g : f.target.generators) {
    Generator h = g;
    h.id = "~" + g.id;
    h.grading += shift;
    out.generators.push_back(std::move(h));
  }
  id_index(out);
  out.d = SparseF2::zero(ns + nt, ns + nt);
  for (index_t j = 0; j < ns; ++j) {
    auto& col = out.d.cols[static_cast<std::size_t>(j)];
    col = f.source.d.cols[static_cast<std::size_t>(j)];
    for (index_t i : f.matrix.cols[static_cast<std::size_t>(j)]) col.push_back(ns + i);
  }
  for (index_t j = 0; j < nt; ++j)
    for (index_t i : f.target.d.cols[static_cast<std::size_t>(j)])
      out.d.cols[static_cast<std::size_t>(ns + j)].push_back(ns + i);
  // The diagonal umap descends to the cone exactly when f commutes with the
  // factors' umaps; otherwise the cone simply carries none.
  if (f.source.u && f.target.u &&
      multiply(*f.target.u, f.matrix) == multiply(f.matrix, *f.source.u)) {
    SparseF2 u = SparseF2::zero(ns + nt, ns + nt);
    for (index_t j = 0; j < ns; ++j)
      u.cols[static_cast<std::size_t>(j)] = f.source.u->cols[static_cast<std::size_t>(j)];
    for (index_t j = 0; j < nt; ++j)
      for (index_t i : f.target.u->cols[static_cast<std::size_t>(j)])
        u.cols[static_cast<std::size_t>(ns + j)].push_back(ns + i);
    out.u = std::move(u);
  }
  return out;
}

// The degree -2 comparison map u1 x id + id x u2 on the tensor complex.
inline ChainMap tensor_u_sum(const GradedComplex& c1, const GradedComplex& c2) {
  if (!c1.u || !c2.u) throw Error("both factors need a umap");
  GradedComplex t = tensor(c1, c2);
  ChainMap f;
  f.degree = -2;
  f.action_slack = Rational(0);
  f.matrix = add(kron(*c1.u, SparseF2::identity(c2.size())),
                 kron(SparseF2::identity(c1.size()), *c2.u));
  f.source = t;
  f.target = std::move(t);
  return f;
}

// Derived tensor of two filtered complexes with umaps: homology of the cone
// of u1 x id + id x u2. This is the algebraic side of the connected sum
// comparison.
inline HomologyResult derived_tensor(const GradedComplex& c1, const GradedComplex& c2) {
  return homology(mapping_cone(tensor_u_sum(c1, c2)));
}

}  // namespace ech
