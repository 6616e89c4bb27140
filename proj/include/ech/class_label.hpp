#pragma once

// First-homology class labels attached to orbits and generators. A label
// lives in Z^r x (Z/m_1 x ... x Z/m_t); the shape (r and the moduli) is part
// of the value so labels from different models cannot be mixed silently.
// Addition is componentwise, torsion coordinates reduced mod their moduli.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ech {

struct ClassLabel {
  std::vector<std::int64_t> free;
  std::vector<std::int64_t> torsion;  // torsion[i] normalized into [0, moduli[i])
  std::vector<std::int64_t> moduli;   // each >= 2

  bool trivial_shape() const { return free.empty() && moduli.empty(); }

  friend bool operator==(const ClassLabel& a, const ClassLabel& b) {
    return a.free == b.free && a.torsion == b.torsion && a.moduli == b.moduli;
  }
  friend bool operator!=(const ClassLabel& a, const ClassLabel& b) { return !(a == b); }
  friend bool operator<(const ClassLabel& a, const ClassLabel& b) {
    if (a.free != b.free) return a.free < b.free;
    if (a.torsion != b.torsion) return a.torsion < b.torsion;
    return a.moduli < b.moduli;
  }
};

inline bool same_shape(const ClassLabel& a, const ClassLabel& b) {
  return a.free.size() == b.free.size() && a.moduli == b.moduli;
}

inline void normalize(ClassLabel& l) {
  if (l.torsion.size() != l.moduli.size())
    throw std::invalid_argument("ClassLabel: torsion/moduli length mismatch");
  for (std::size_t i = 0; i < l.torsion.size(); ++i) {
    if (l.moduli[i] < 2) throw std::invalid_argument("ClassLabel: modulus < 2");
    std::int64_t m = l.moduli[i];
    std::int64_t v = l.torsion[i] % m;
    if (v < 0) v += m;
    l.torsion[i] = v;
  }
}

inline ClassLabel zero_label_like(const ClassLabel& shape) {
  ClassLabel z;
  z.free.assign(shape.free.size(), 0);
  z.torsion.assign(shape.moduli.size(), 0);
  z.moduli = shape.moduli;
  return z;
}

inline bool is_zero(const ClassLabel& l) {
  for (std::int64_t v : l.free)
    if (v != 0) return false;
  for (std::int64_t v : l.torsion)
    if (v != 0) return false;
  return true;
}

inline ClassLabel add(const ClassLabel& a, const ClassLabel& b) {
  if (!same_shape(a, b)) throw std::invalid_argument("ClassLabel add: shape mismatch");
  ClassLabel out = a;
  for (std::size_t i = 0; i < out.free.size(); ++i) out.free[i] += b.free[i];
  for (std::size_t i = 0; i < out.torsion.size(); ++i) out.torsion[i] += b.torsion[i];
  normalize(out);
  return out;
}

// Push two labels into the direct sum of their groups. Useful when two
// models with different declared groups must be moved to a common shape
// before any pairwise operation.
inline ClassLabel concat(const ClassLabel& a, const ClassLabel& b) {
  ClassLabel out = a;
  out.free.insert(out.free.end(), b.free.begin(), b.free.end());
  out.torsion.insert(out.torsion.end(), b.torsion.begin(), b.torsion.end());
  out.moduli.insert(out.moduli.end(), b.moduli.begin(), b.moduli.end());
  normalize(out);
  return out;
}

inline ClassLabel scale(const ClassLabel& a, std::int64_t k) {
  ClassLabel out = a;
  for (auto& v : out.free) v *= k;
  for (auto& v : out.torsion) v *= k;
  normalize(out);
  return out;
}

inline std::string to_string(const ClassLabel& l) {
  std::string s = "(";
  for (std::size_t i = 0; i < l.free.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(l.free[i]);
  }
  s += ";";
  for (std::size_t i = 0; i < l.torsion.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(l.torsion[i]) + " mod " + std::to_string(l.moduli[i]);
  }
  s += ")";
  return s;
}

}  // namespace ech
