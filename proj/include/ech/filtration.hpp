#pragma once

// Action filtration machinery: strict truncation below a level L, inclusion
// maps between truncations, towers of truncations over increasing
// thresholds, and the finite-scale stabilization profile that stands in for
// the direct limit. Truncation demands the filtration tier: with a strictly
// action-decreasing differential the sublevel set is automatically a
// subcomplex, and a generator sitting exactly at a threshold is a
// degeneracy, not a judgment call.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "homology.hpp"
#include "rational.hpp"
#include "sparse_f2.hpp"

namespace ech {

inline GradedComplex truncate(const GradedComplex& c, const Rational& L) {
  require_valid(c);
  std::vector<index_t> keep;  // old index per new index
  std::vector<index_t> newpos(static_cast<std::size_t>(c.size()), -1);
  for (index_t i = 0; i < c.size(); ++i) {
    const auto& g = c.generators[static_cast<std::size_t>(i)];
    if (g.action == L)
      throw DegeneracyError("generator '" + g.id + "' sits exactly at the truncation level " +
                            L.str());
    if (g.action < L) {
      newpos[static_cast<std::size_t>(i)] = static_cast<index_t>(keep.size());
      keep.push_back(i);
    }
  }
  GradedComplex out;
  out.generators.reserve(keep.size());
  for (index_t i : keep) out.generators.push_back(c.generators[static_cast<std::size_t>(i)]);
  auto restrict_matrix = [&](const SparseF2& m) {
    SparseF2 r = SparseF2::zero(static_cast<index_t>(keep.size()),
                                static_cast<index_t>(keep.size()));
    for (std::size_t jn = 0; jn < keep.size(); ++jn)
      for (index_t i : m.cols[static_cast<std::size_t>(keep[jn])]) {
        index_t in = newpos[static_cast<std::size_t>(i)];
        // strict action decrease means images of survivors survive
        r.cols[jn].push_back(in);
      }
    return r;
  };
  out.d = restrict_matrix(c.d);
  if (c.u) out.u = restrict_matrix(*c.u);
  return out;
}

// Generator-wise inclusion of a truncation into a larger one (or the base).
// Generators are matched by id and must agree in grading, action, and class;
// anything else means the two complexes are not truncations of one base.
inline ChainMap inclusion(const GradedComplex& small, const GradedComplex& large) {
  auto idx = id_index(large);
  ChainMap f;
  f.degree = 0;
  f.action_slack = Rational(0);
  f.matrix = SparseF2::zero(large.size(), small.size());
  for (index_t j = 0; j < small.size(); ++j) {
    const auto& g = small.generators[static_cast<std::size_t>(j)];
    auto it = idx.find(g.id);
    if (it == idx.end())
      throw Error("inclusion: generator '" + g.id + "' is missing from the larger complex");
    const auto& t = large.generators[static_cast<std::size_t>(it->second)];
    if (t.grading != g.grading || t.action != g.action || t.label != g.label)
      throw Error("inclusion: generator '" + g.id + "' differs between the two complexes");
    f.matrix.cols[static_cast<std::size_t>(j)] = {it->second};
  }
  f.source = small;
  f.target = large;
  require_structural(f);  // fails iff the differentials are not nested
  return f;
}

struct FilteredTower {
  GradedComplex base;
  std::vector<Rational> thresholds;      // strictly increasing
  std::vector<GradedComplex> levels;     // truncation at each threshold
  std::vector<ChainMap> inclusions;      // level i -> level i+1
  ChainMap top_to_base;                  // last level -> base
};

inline FilteredTower make_tower(const GradedComplex& base, std::vector<Rational> thresholds) {
  if (thresholds.empty()) throw std::invalid_argument("tower needs at least one threshold");
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i - 1] < thresholds[i]))
      throw std::invalid_argument("tower thresholds must be strictly increasing");
  FilteredTower t;
  t.base = base;
  t.thresholds = std::move(thresholds);
  for (const auto& L : t.thresholds) t.levels.push_back(truncate(base, L));
  for (std::size_t i = 0; i + 1 < t.levels.size(); ++i)
    t.inclusions.push_back(inclusion(t.levels[i], t.levels[i + 1]));
  t.top_to_base = inclusion(t.levels.back(), t.base);
  return t;
}

// Midpoints between consecutive distinct action values, then one threshold
// past the top, so that every level boundary separates actual generators and
// the last level is the whole complex.
inline std::vector<Rational> auto_thresholds(const GradedComplex& c) {
  std::vector<Rational> acts;
  acts.reserve(c.generators.size());
  for (const auto& g : c.generators) acts.push_back(g.action);
  std::sort(acts.begin(), acts.end());
  acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
  std::vector<Rational> out;
  for (std::size_t i = 0; i + 1 < acts.size(); ++i)
    out.push_back((acts[i] + acts[i + 1]) / Rational(2));
  if (!acts.empty()) out.push_back(acts.back() + Rational(1));
  return out;
}

struct StabilizationProfile {
  std::int64_t grading = 0;
  std::vector<index_t> level_dims;   // dim of homology at the grading, per level
  index_t base_dim = 0;
  // step_iso[i]: induced map level i -> level i+1 is an isomorphism at the
  // grading; the last entry is the step from the top level into the base.
  std::vector<bool> step_iso;
  // smallest level index from which every later step is an isomorphism
  std::optional<std::size_t> stable_from;
};

inline StabilizationProfile stabilization_profile(const FilteredTower& t, std::int64_t grading) {
  StabilizationProfile p;
  p.grading = grading;
  std::vector<HomologyResult> hs;
  hs.reserve(t.levels.size());
  for (const auto& lvl : t.levels) hs.push_back(homology(lvl));
  HomologyResult hbase = homology(t.base);

  auto dim_at = [&](const HomologyResult& h) -> index_t {
    auto it = h.basis.find(grading);
    return it == h.basis.end() ? 0 : static_cast<index_t>(it->second.size());
  };
  for (const auto& h : hs) p.level_dims.push_back(dim_at(h));
  p.base_dim = dim_at(hbase);

  auto step_is_iso = [&](const ChainMap& f, const HomologyResult& a,
                         const HomologyResult& b) -> bool {
    index_t da = dim_at(a), db = dim_at(b);
    if (da != db) return false;
    if (da == 0) return true;
    auto m = induced_map(f, a, b);
    auto it = m.find(grading);
    if (it == m.end()) return false;
    return invertible(it->second);
  };
  for (std::size_t i = 0; i + 1 < hs.size(); ++i)
    p.step_iso.push_back(step_is_iso(t.inclusions[i], hs[i], hs[i + 1]));
  p.step_iso.push_back(step_is_iso(t.top_to_base, hs.back(), hbase));

  std::optional<std::size_t> stable;
  for (std::size_t s = p.step_iso.size(); s-- > 0;) {
    if (!p.step_iso[s]) break;
    stable = s;
  }
  p.stable_from = stable;
  return p;
}

}  // namespace ech
