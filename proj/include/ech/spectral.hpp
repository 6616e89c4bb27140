#pragma once

// Spectral invariants c_sigma and c_k, and the connected-sum comparison
// sweep c_k(cone) vs max-convolution of the factor spectra.
//
// The filtration only jumps at generator actions, so every infimum here is
// attained exactly: a homology class enters the image of the truncation at
// the largest birth action in its persistence-basis support, and c_k is the
// least such value over classes sent to the contact class by U^k. Both are
// computed by prefix elimination over the birth-sorted basis, never by
// numerical search.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "connect.hpp"
#include "errors.hpp"
#include "filtration.hpp"
#include "homology.hpp"
#include "rational.hpp"

namespace ech {

// A homology class, named by its support in the persistence basis of one
// grading (indices into HomologyResult::basis[grading]).
struct ClassRef {
  std::int64_t grading = 0;
  std::vector<index_t> members;  // sorted, nonempty for a nonzero class
};

// Birth action of a class: the largest birth in its basis support. This is
// exactly the least L at which the class is hit by H(C^{<L}) -> H(C).
inline Rational class_birth(const HomologyResult& hs, const ClassRef& sigma) {
  if (sigma.members.empty()) throw Error("the zero class has no spectral invariant");
  auto it = hs.basis.find(sigma.grading);
  if (it == hs.basis.end()) throw Error("no homology in grading " + std::to_string(sigma.grading));
  Rational birth(0);
  bool first = true;
  for (index_t m : sigma.members) {
    if (m < 0 || static_cast<std::size_t>(m) >= it->second.size())
      throw Error("class support index out of range");
    const Rational& b = it->second[static_cast<std::size_t>(m)].birth_action;
    if (first || birth < b) birth = b;
    first = false;
  }
  return birth;
}

inline Rational c_sigma(const FilteredTower& tower, const HomologyResult& hs,
                        const ClassRef& sigma) {
  Rational birth = class_birth(hs, sigma);
  if (!(birth < tower.thresholds.back()))
    throw DepthError("class of action " + birth.str() +
                     " is not reached within the tower; deepen the truncation");
  return birth;
}

inline Rational c_sigma(const FilteredTower& tower, const ClassRef& sigma) {
  return c_sigma(tower, homology(tower.base), sigma);
}

// The contact class: the class of the least-action generator carrying the
// zero class label (the empty orbit set in the models here).
inline ClassRef contact_class(const HomologyResult& hs) {
  const auto& gens = hs.complex.generators;
  index_t pick = -1;
  for (index_t i = 0; i < static_cast<index_t>(gens.size()); ++i) {
    const Generator& g = gens[static_cast<std::size_t>(i)];
    if (!is_zero(g.label)) continue;
    if (pick < 0) {
      pick = i;
      continue;
    }
    const Generator& p = gens[static_cast<std::size_t>(pick)];
    if (g.action < p.action || (g.action == p.action && g.id < p.id)) pick = i;
  }
  if (pick < 0) throw Error("no zero-class generator to seed the contact class");
  const Generator& cg = gens[static_cast<std::size_t>(pick)];
  if (!apply(hs.complex.d, {pick}).empty())
    throw Error("candidate contact generator is not a cycle");
  Expressed e = express(hs, {pick});
  if (e.coeffs.empty()) throw Error("contact class vanishes in homology");
  return ClassRef{cg.grading, e.coeffs};
}

namespace detail {

// Minimal prefix of the columns of m whose span contains target, together
// with the expression of target over that prefix. Columns are scanned in
// order; pivots are accumulated so each column is reduced once.
inline std::optional<std::pair<index_t, std::vector<index_t>>> minimal_prefix_witness(
    const SparseF2& m, const std::vector<index_t>& target) {
  std::map<index_t, std::pair<std::vector<index_t>, std::vector<index_t>>> pivots;
  for (index_t t = 0; t < static_cast<index_t>(m.n_cols()); ++t) {
    std::vector<index_t> col = m.cols[static_cast<std::size_t>(t)];
    std::vector<index_t> support{t};
    while (!col.empty()) {
      index_t p = col.back();
      auto it = pivots.find(p);
      if (it == pivots.end()) {
        pivots.emplace(p, std::make_pair(std::move(col), std::move(support)));
        break;
      }
      col = xor_merge(col, it->second.first);
      support = xor_merge(support, it->second.second);
    }
    std::vector<index_t> rem = target, witness;
    while (!rem.empty()) {
      auto it = pivots.find(rem.back());
      if (it == pivots.end()) break;
      rem = xor_merge(rem, it->second.first);
      witness = xor_merge(witness, it->second.second);
    }
    if (rem.empty()) return std::make_pair(t, witness);
  }
  return std::nullopt;
}

}  // namespace detail

struct SpectrumRow {
  std::int64_t k = 0;
  Rational c_k;
  std::string witness;             // birth generators of the witness class
  std::int64_t threshold_index = 0;  // first tower level containing the witness
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;  // k = 0 .. (possibly short of requested_kmax)
  std::int64_t requested_kmax = 0;
  bool depth_limited = false;
  std::string depth_note;
  const SpectrumRow& row(std::int64_t k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= rows.size())
      throw DepthError("spectrum table has no row k=" + std::to_string(k) +
                       (depth_note.empty() ? "" : ("; " + depth_note)));
    return rows[static_cast<std::size_t>(k)];
  }
};

// c_k for k = 0..kmax: the least birth action among classes sigma in
// grading g0+2k with U^k sigma = contact class. Stops early (with a note)
// when the truncated model runs out of U^k-preimages or tower depth.
inline SpectrumTable c_k_table(const FilteredTower& tower, std::int64_t kmax) {
  if (kmax < 0) throw std::invalid_argument("kmax must be non-negative");
  if (!tower.base.u) throw Error("spectral invariants need a U-map");
  HomologyResult hs = homology(tower.base);
  ClassRef contact = contact_class(hs);
  const std::int64_t g0 = contact.grading;

  SpectrumTable table;
  table.requested_kmax = kmax;

  auto basis_size = [&hs](std::int64_t g) -> index_t {
    auto it = hs.basis.find(g);
    return it == hs.basis.end() ? 0 : static_cast<index_t>(it->second.size());
  };

  // Composed U^k from grading g0+2k down to g0, extended one factor per k.
  SparseF2 composed = SparseF2::identity(static_cast<std::size_t>(basis_size(g0)));
  for (std::int64_t k = 0; k <= kmax; ++k) {
    const std::int64_t g = g0 + 2 * k;
    if (k > 0) {
      auto it = hs.induced_u.find(g);
      if (it == hs.induced_u.end() || basis_size(g) == 0) {
        table.depth_limited = true;
        table.depth_note = "no classes in grading " + std::to_string(g);
        return table;
      }
      composed = multiply(composed, it->second);
    }
    auto found = detail::minimal_prefix_witness(composed, contact.members);
    if (!found) {
      table.depth_limited = true;
      table.depth_note = "no U^" + std::to_string(k) + " preimage of the contact class";
      return table;
    }
    const auto& [t, witness] = *found;
    const auto& classes = hs.basis.at(g);
    SpectrumRow row;
    row.k = k;
    row.c_k = classes[static_cast<std::size_t>(t)].birth_action;
    for (std::size_t i = 0; i < witness.size(); ++i) {
      const HClass& cls = classes[static_cast<std::size_t>(witness[i])];
      if (i) row.witness += "+";
      row.witness +=
          hs.complex.generators[static_cast<std::size_t>(cls.birth_gen)].id;
    }
    row.threshold_index = -1;
    for (std::size_t i = 0; i < tower.thresholds.size(); ++i)
      if (row.c_k < tower.thresholds[i]) {
        row.threshold_index = static_cast<std::int64_t>(i);
        break;
      }
    if (row.threshold_index < 0) {
      table.depth_limited = true;
      table.depth_note = "c_" + std::to_string(k) + " = " + row.c_k.str() +
                         " exceeds every tower threshold";
      return table;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline Rational c_k(const FilteredTower& tower, std::int64_t k) {
  return c_k_table(tower, k).row(k).c_k;
}

inline Rational max_convolution(const SpectrumTable& s1, const SpectrumTable& s2,
                                std::int64_t k) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  std::optional<Rational> best;
  for (std::int64_t i = 0; i <= k; ++i) {
    Rational v = s1.row(i).c_k + s2.row(k - i).c_k;
    if (!best || *best < v) best = v;
  }
  return *best;
}

// One tower level above everything is enough when the invariant is read off
// the persistence basis; the threshold only has to certify depth.
inline FilteredTower full_tower(const GradedComplex& c) {
  Rational top(1);
  for (const auto& g : c.generators)
    if (!(g.action + Rational(1) < top)) top = g.action + Rational(1);
  return make_tower(c, {top});
}

struct SweepCell {
  Rational eps;
  std::int64_t k = 0;
  std::optional<Rational> c_cone, target, diff;
  bool converged = false;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // eps descending, k ascending
  bool all_converged = true;     // every last-eps cell agreed with its predecessor
};

// For each eps (largest to smallest) build the connected-sum cone and
// compare its spectrum against the max-convolution of the factor spectra.
// Cells beyond the reachable depth carry empty optionals.
inline SweepResult conjecture_sweep(const GradedComplex& c1, const GradedComplex& c2,
                                    std::int64_t kmax, std::vector<Rational> eps_list) {
  if (eps_list.empty()) throw std::invalid_argument("need at least one eps");
  std::sort(eps_list.begin(), eps_list.end(),
            [](const Rational& a, const Rational& b) { return b < a; });
  eps_list.erase(std::unique(eps_list.begin(), eps_list.end()), eps_list.end());

  SpectrumTable s1 = c_k_table(full_tower(c1), kmax);
  SpectrumTable s2 = c_k_table(full_tower(c2), kmax);

  SweepResult out;
  std::map<std::int64_t, std::optional<Rational>> prev;
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    ConeData data;
    data.c1 = c1;
    data.c2 = c2;
    data.eps = eps_list[e];
    SpectrumTable sc = c_k_table(full_tower(assemble_cone(data).cone), kmax);
    for (std::int64_t k = 0; k <= kmax; ++k) {
      SweepCell cell;
      cell.eps = eps_list[e];
      cell.k = k;
      if (static_cast<std::size_t>(k) < sc.rows.size()) cell.c_cone = sc.row(k).c_k;
      if (static_cast<std::size_t>(k) < s1.rows.size() &&
          static_cast<std::size_t>(k) < s2.rows.size())
        cell.target = max_convolution(s1, s2, k);
      if (cell.c_cone && cell.target) cell.diff = *cell.c_cone - *cell.target;
      cell.converged = e > 0 && cell.c_cone && prev[k] && *cell.c_cone == *prev[k];
      if (e + 1 == eps_list.size() && eps_list.size() > 1 && !cell.converged)
        out.all_converged = false;
      prev[k] = cell.c_cone;
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

}  // namespace ech
