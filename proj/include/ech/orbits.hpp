#pragma once

// Embedded Reeb orbits and admissible orbit sets: finite multisets of
// distinct orbits, hyperbolic ones with multiplicity exactly 1. These are
// the generators of the filtered complexes; everything here is exact
// rational arithmetic, and genuinely irrational rotation numbers and
// actions enter as convergents with large denominators. Irrationality only
// ever matters through the absence of ties, so ties are detected and
// reported instead of being silently broken.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "class_label.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace ech {

enum class OrbitKind { elliptic, positive_hyperbolic, negative_hyperbolic };

inline bool is_hyperbolic(OrbitKind k) { return k != OrbitKind::elliptic; }

inline std::string to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::elliptic: return "elliptic";
    case OrbitKind::positive_hyperbolic: return "positive_hyperbolic";
    default: return "negative_hyperbolic";
  }
}

inline OrbitKind orbit_kind_from_string(const std::string& s) {
  if (s == "elliptic") return OrbitKind::elliptic;
  if (s == "positive_hyperbolic") return OrbitKind::positive_hyperbolic;
  if (s == "negative_hyperbolic") return OrbitKind::negative_hyperbolic;
  throw ParseError("unknown orbit kind '" + s + "'");
}

struct Orbit {
  std::string id;
  OrbitKind kind = OrbitKind::elliptic;
  Rational rotation;         // elliptic only; never an integer
  std::int64_t winding = 0;  // hyperbolic only; parity fixed by the kind
  Rational action;           // > 0
  ClassLabel label;
};

inline void validate_orbit(const Orbit& o) {
  if (o.id.empty()) throw std::invalid_argument("orbit needs a nonempty id");
  if (!(Rational(0) < o.action))
    throw std::invalid_argument("orbit '" + o.id + "' must have positive action");
  if (o.kind == OrbitKind::elliptic) {
    if (o.rotation == Rational(o.rotation.floor()))
      throw DegeneracyError("orbit '" + o.id + "' has integer rotation " + o.rotation.str());
  } else {
    bool even = (o.winding % 2) == 0;
    if (o.kind == OrbitKind::positive_hyperbolic && !even)
      throw std::invalid_argument("orbit '" + o.id + "' is positive hyperbolic, winding must be even");
    if (o.kind == OrbitKind::negative_hyperbolic && even)
      throw std::invalid_argument("orbit '" + o.id + "' is negative hyperbolic, winding must be odd");
  }
}

// A multiset of distinct orbits; pairs kept sorted by orbit id.
struct OrbitSet {
  std::vector<std::pair<Orbit, std::int64_t>> pairs;

  bool empty() const { return pairs.empty(); }
};

inline OrbitSet make_orbit_set(std::vector<std::pair<Orbit, std::int64_t>> pairs) {
  for (const auto& [o, m] : pairs) {
    validate_orbit(o);
    if (m <= 0) throw std::invalid_argument("orbit multiplicity must be positive");
    if (is_hyperbolic(o.kind) && m != 1)
      throw std::invalid_argument("hyperbolic orbit '" + o.id + "' cannot have multiplicity " +
                                  std::to_string(m));
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first.id < b.first.id; });
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i - 1].first.id == pairs[i].first.id)
      throw std::invalid_argument("orbit '" + pairs[i].first.id + "' listed twice");
  OrbitSet s;
  s.pairs = std::move(pairs);
  return s;
}

inline Rational action(const OrbitSet& s) {
  Rational a(0);
  for (const auto& [o, m] : s.pairs) a = a + o.action * Rational(m);
  return a;
}

// Canonical display/sort name: "empty", or factors joined by "*" with "^m"
// multiplicity suffixes, e.g. "a^2*b".
inline std::string name(const OrbitSet& s) {
  if (s.pairs.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    if (i) out += "*";
    out += s.pairs[i].first.id;
    if (s.pairs[i].second > 1) out += "^" + std::to_string(s.pairs[i].second);
  }
  return out;
}

inline ClassLabel total_class(const OrbitSet& s, const ClassLabel& shape) {
  ClassLabel sum = zero_label_like(shape);
  for (const auto& [o, m] : s.pairs) sum = add(sum, scale(o.label, m));
  return sum;
}

// All admissible orbit sets of action strictly below L, optionally filtered
// by total class, sorted by (action, name). Multiplicity bounds come from
// the action itself; a set landing exactly at action L is simply not below
// L and is excluded. Two distinct sets sharing an action are legal but
// reported as warnings since they break action-rank grading conventions
// downstream.
inline std::vector<OrbitSet> enumerate_orbit_sets(std::vector<Orbit> catalog, const Rational& L,
                                                  const std::optional<ClassLabel>& gamma = std::nullopt,
                                                  std::vector<std::string>* warnings = nullptr) {
  for (const auto& o : catalog) validate_orbit(o);
  std::sort(catalog.begin(), catalog.end(),
            [](const Orbit& a, const Orbit& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < catalog.size(); ++i)
    if (catalog[i - 1].id == catalog[i].id)
      throw std::invalid_argument("orbit catalog repeats id '" + catalog[i].id + "'");
  ClassLabel shape = catalog.empty() ? ClassLabel{} : catalog.front().label;
  for (const auto& o : catalog)
    if (!same_shape(o.label, shape))
      throw std::invalid_argument("orbit catalog mixes class label shapes");
  if (gamma && !same_shape(*gamma, shape))
    throw std::invalid_argument("class filter has a different label shape than the catalog");

  std::vector<OrbitSet> out;
  std::vector<std::pair<Orbit, std::int64_t>> chosen;

  auto emit = [&]() {
    OrbitSet s;
    s.pairs = chosen;  // already id-sorted: catalog order is id order
    if (!gamma || total_class(s, shape) == *gamma) out.push_back(std::move(s));
  };

  auto rec = [&](auto&& self, std::size_t idx, Rational acc) -> void {
    if (idx == catalog.size()) {
      emit();
      return;
    }
    const Orbit& o = catalog[idx];
    Rational a = acc;
    for (std::int64_t m = 0;; ++m) {
      if (m > 0) a = a + o.action;
      if (!(a < L)) break;
      if (m > 0) chosen.emplace_back(o, m);
      if (m > 0 && is_hyperbolic(o.kind)) {
        self(self, idx + 1, a);
        chosen.pop_back();
        break;
      }
      self(self, idx + 1, a);
      if (m > 0) chosen.pop_back();
    }
  };
  rec(rec, 0, Rational(0));

  std::vector<std::pair<std::pair<Rational, std::string>, std::size_t>> keys;
  keys.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    keys.push_back({{action(out[i]), name(out[i])}, i});
  std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    if (a.first.first != b.first.first) return a.first.first < b.first.first;
    return a.first.second < b.first.second;
  });
  std::vector<OrbitSet> sorted;
  sorted.reserve(out.size());
  for (const auto& k : keys) sorted.push_back(std::move(out[k.second]));
  if (warnings)
    for (std::size_t i = 1; i < keys.size(); ++i)
      if (keys[i - 1].first.first == keys[i].first.first)
        warnings->push_back("orbit sets '" + keys[i - 1].first.second + "' and '" +
                            keys[i].first.second + "' share action " +
                            keys[i].first.first.str());
  return sorted;
}

}  // namespace ech
