#pragma once

// Graded chain complexes over F2 carrying an exact action filtration, and
// chain maps between them. The differential convention throughout: entry
// (i, j) of d means generator j hits generator i, so columns are sources and
// matrix composition reads right to left.
//
// Validation is two-tier. Structural violations (shapes, duplicate ids,
// d^2 != 0, grading inhomogeneity, class-label leaks) make the algebra
// wrong for every consumer. Filtration violations (an entry that fails to
// strictly drop the action, a negative action) only invalidate ops that use
// the filtration; plain homology is still well defined, and the mapping
// cone of an action-preserving map is the standard example that stays
// structurally clean while failing the filtration tier.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "class_label.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "sparse_f2.hpp"

namespace ech {

struct Generator {
  std::string id;
  std::int64_t grading = 0;
  Rational action;
  ClassLabel label;
};

struct GradedComplex {
  std::vector<Generator> generators;
  SparseF2 d;                 // degree -1
  std::optional<SparseF2> u;  // degree -2 chain map, when the model carries one

  index_t size() const { return static_cast<index_t>(generators.size()); }
};

// id -> index; throws on duplicates (validate() reports them politely).
inline std::unordered_map<std::string, index_t> id_index(const GradedComplex& c) {
  std::unordered_map<std::string, index_t> m;
  m.reserve(c.generators.size());
  for (index_t i = 0; i < c.size(); ++i) {
    auto [it, fresh] = m.emplace(c.generators[static_cast<std::size_t>(i)].id, i);
    if (!fresh)
      throw std::invalid_argument("duplicate generator id '" + it->first + "'");
  }
  return m;
}

namespace detail {

inline void check_degree_map(const GradedComplex& c, const SparseF2& m, std::int64_t degree,
                             const std::string& what, bool strict_action,
                             ValidationReport& rep) {
  if (m.rows != c.size() || m.n_cols() != c.size()) {
    rep.items.push_back({"shape", what + " is " + std::to_string(m.rows) + "x" +
                                      std::to_string(m.n_cols()) + ", complex has " +
                                      std::to_string(c.size()) + " generators",
                         true});
    return;
  }
  for (auto [i, j] : m.entries()) {
    const auto& src = c.generators[static_cast<std::size_t>(j)];
    const auto& tgt = c.generators[static_cast<std::size_t>(i)];
    if (tgt.grading != src.grading + degree)
      rep.items.push_back({"grading", what + " entry " + src.id + " -> " + tgt.id +
                                          " shifts grading by " +
                                          std::to_string(tgt.grading - src.grading) +
                                          ", expected " + std::to_string(degree),
                           true});
    if (strict_action && !(tgt.action < src.action))
      rep.items.push_back({"action-order", what + " entry " + src.id + " -> " + tgt.id +
                                               " does not strictly lower the action (" +
                                               src.action.str() + " -> " + tgt.action.str() + ")",
                           false});
    if (!same_shape(src.label, tgt.label) || src.label != tgt.label)
      rep.items.push_back({"class-leak", what + " entry " + src.id + " -> " + tgt.id +
                                             " connects different classes " +
                                             to_string(src.label) + " vs " + to_string(tgt.label),
                           true});
  }
}

}  // namespace detail

// Full invariant report for a complex; empty report iff everything holds.
inline ValidationReport validate(const GradedComplex& c) {
  ValidationReport rep;
  {
    std::unordered_map<std::string, index_t> seen;
    for (index_t i = 0; i < c.size(); ++i) {
      const auto& g = c.generators[static_cast<std::size_t>(i)];
      auto [it, fresh] = seen.emplace(g.id, i);
      if (!fresh)
        rep.items.push_back({"duplicate-id", "generator id '" + g.id + "' appears twice", true});
      if (g.action < Rational(0))
        rep.items.push_back({"action-negative",
                             "generator '" + g.id + "' has action " + g.action.str(), false});
      if (!c.generators.empty() &&
          !same_shape(g.label, c.generators.front().label))
        rep.items.push_back({"label-shape", "generator '" + g.id +
                                                "' has a class label of different shape",
                             true});
    }
  }
  detail::check_degree_map(c, c.d, -1, "differential", /*strict_action=*/true, rep);
  if (c.d.rows == c.size() && c.d.n_cols() == c.size()) {
    SparseF2 dd = multiply(c.d, c.d);
    for (auto [i, j] : dd.entries())
      rep.items.push_back({"dsquare", "d^2 has entry " +
                                          c.generators[static_cast<std::size_t>(j)].id + " -> " +
                                          c.generators[static_cast<std::size_t>(i)].id,
                           true});
  }
  if (c.u) {
    detail::check_degree_map(c, *c.u, -2, "umap", /*strict_action=*/true, rep);
    if (c.u->rows == c.size() && c.u->n_cols() == c.size()) {
      SparseF2 comm = add(multiply(c.d, *c.u), multiply(*c.u, c.d));
      for (auto [i, j] : comm.entries())
        rep.items.push_back({"umap-chain", "du + ud has entry " +
                                               c.generators[static_cast<std::size_t>(j)].id +
                                               " -> " +
                                               c.generators[static_cast<std::size_t>(i)].id,
                             true});
    }
  }
  return rep;
}

// Throws unless the algebraic tier holds (filtration violations pass).
inline void require_structural(const GradedComplex& c) {
  ValidationReport rep = validate(c);
  if (!rep.structural_ok()) throw ValidationError(std::move(rep));
}

// Throws unless every invariant holds, filtration included.
inline void require_valid(const GradedComplex& c) {
  ValidationReport rep = validate(c);
  if (!rep.ok()) throw ValidationError(std::move(rep));
}

// A chain map source -> target of fixed degree. action_slack bounds how much
// an entry may raise the action; genuine geometric maps have slack 0, the
// cone comparison map has slack epsilon (it appends the tiny orbit).
struct ChainMap {
  GradedComplex source;
  GradedComplex target;
  std::int64_t degree = 0;
  Rational action_slack;  // >= 0
  SparseF2 matrix;        // target.size() x source.size()
};

inline ValidationReport validate(const ChainMap& f) {
  ValidationReport rep;
  if (f.matrix.rows != f.target.size() || f.matrix.n_cols() != f.source.size()) {
    rep.items.push_back({"shape", "chain map matrix shape does not match source/target", true});
    return rep;
  }
  if (f.action_slack < Rational(0))
    rep.items.push_back({"action-slack", "negative action slack", false});
  for (auto [i, j] : f.matrix.entries()) {
    const auto& src = f.source.generators[static_cast<std::size_t>(j)];
    const auto& tgt = f.target.generators[static_cast<std::size_t>(i)];
    if (tgt.grading != src.grading + f.degree)
      rep.items.push_back({"grading", "map entry " + src.id + " -> " + tgt.id +
                                          " shifts grading by " +
                                          std::to_string(tgt.grading - src.grading) +
                                          ", declared degree " + std::to_string(f.degree),
                           true});
    if (tgt.action > src.action + f.action_slack)
      rep.items.push_back({"action-slack", "map entry " + src.id + " -> " + tgt.id +
                                               " raises action beyond the declared slack",
                           false});
    if (src.label != tgt.label)
      rep.items.push_back({"class-leak", "map entry " + src.id + " -> " + tgt.id +
                                             " connects different classes",
                           true});
  }
  // chain map identity: f d_src = d_tgt f
  SparseF2 lhs = multiply(f.matrix, f.source.d);
  SparseF2 rhs = multiply(f.target.d, f.matrix);
  SparseF2 diff = add(lhs, rhs);
  for (auto [i, j] : diff.entries())
    rep.items.push_back({"not-chain-map",
                         "f d - d f has entry " +
                             f.source.generators[static_cast<std::size_t>(j)].id + " -> " +
                             f.target.generators[static_cast<std::size_t>(i)].id,
                         true});
  return rep;
}

inline void require_structural(const ChainMap& f) {
  ValidationReport rep = validate(f);
  if (!rep.structural_ok()) throw ValidationError(std::move(rep));
}

}  // namespace ech
