#pragma once

// Sparse matrices over the two-element field. Column-major: cols[j] is the
// strictly increasing list of rows where column j has a 1. All differentials,
// U-maps, chain maps and reduction transcripts in the library are carried in
// this form; addition is symmetric difference, there are no signs anywhere.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ech {

using index_t = std::int64_t;

struct SparseF2 {
  index_t rows = 0;
  std::vector<std::vector<index_t>> cols;

  static SparseF2 zero(index_t n_rows, index_t n_cols) {
    SparseF2 m;
    m.rows = n_rows;
    m.cols.resize(static_cast<std::size_t>(n_cols));
    return m;
  }

  static SparseF2 identity(index_t n) {
    SparseF2 m = zero(n, n);
    for (index_t j = 0; j < n; ++j) m.cols[static_cast<std::size_t>(j)] = {j};
    return m;
  }

  index_t n_cols() const { return static_cast<index_t>(cols.size()); }

  bool get(index_t i, index_t j) const {
    const auto& c = cols[static_cast<std::size_t>(j)];
    return std::binary_search(c.begin(), c.end(), i);
  }

  // Flips entry (i, j); set-like usage builds columns out of order safely.
  void toggle(index_t i, index_t j) {
    auto& c = cols[static_cast<std::size_t>(j)];
    auto it = std::lower_bound(c.begin(), c.end(), i);
    if (it != c.end() && *it == i)
      c.erase(it);
    else
      c.insert(it, i);
  }

  bool is_zero() const {
    for (const auto& c : cols)
      if (!c.empty()) return false;
    return true;
  }

  index_t n_entries() const {
    index_t n = 0;
    for (const auto& c : cols) n += static_cast<index_t>(c.size());
    return n;
  }

  // (row, col) pairs in column-major order; deterministic.
  std::vector<std::pair<index_t, index_t>> entries() const {
    std::vector<std::pair<index_t, index_t>> e;
    for (index_t j = 0; j < n_cols(); ++j)
      for (index_t i : cols[static_cast<std::size_t>(j)]) e.emplace_back(i, j);
    return e;
  }

  friend bool operator==(const SparseF2& a, const SparseF2& b) {
    return a.rows == b.rows && a.cols == b.cols;
  }
  friend bool operator!=(const SparseF2& a, const SparseF2& b) { return !(a == b); }
};

// Symmetric difference of two sorted index lists.
inline std::vector<index_t> xor_merge(const std::vector<index_t>& a,
                                      const std::vector<index_t>& b) {
  std::vector<index_t> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline SparseF2 add(const SparseF2& a, const SparseF2& b) {
  if (a.rows != b.rows || a.n_cols() != b.n_cols())
    throw std::invalid_argument("SparseF2 add: shape mismatch");
  SparseF2 out = SparseF2::zero(a.rows, a.n_cols());
  for (std::size_t j = 0; j < a.cols.size(); ++j) out.cols[j] = xor_merge(a.cols[j], b.cols[j]);
  return out;
}

// Matrix applied to a column vector given as its sorted support.
inline std::vector<index_t> apply(const SparseF2& m, const std::vector<index_t>& v) {
  std::vector<index_t> out;
  for (index_t j : v) out = xor_merge(out, m.cols[static_cast<std::size_t>(j)]);
  return out;
}

inline SparseF2 multiply(const SparseF2& a, const SparseF2& b) {
  if (a.n_cols() != b.rows) throw std::invalid_argument("SparseF2 multiply: shape mismatch");
  SparseF2 out = SparseF2::zero(a.rows, b.n_cols());
  for (std::size_t j = 0; j < b.cols.size(); ++j) out.cols[j] = apply(a, b.cols[j]);
  return out;
}

inline SparseF2 transpose(const SparseF2& m) {
  SparseF2 out = SparseF2::zero(m.n_cols(), m.rows);
  for (index_t j = 0; j < m.n_cols(); ++j)
    for (index_t i : m.cols[static_cast<std::size_t>(j)])
      out.cols[static_cast<std::size_t>(i)].push_back(j);
  // columns were filled in increasing j, already sorted
  return out;
}

// Rank by plain column elimination on a working copy.
inline index_t rank(const SparseF2& m) {
  std::vector<std::vector<index_t>> pivots;
  std::vector<index_t> owner(static_cast<std::size_t>(m.rows), -1);
  for (const auto& orig : m.cols) {
    std::vector<index_t> col = orig;
    while (!col.empty()) {
      index_t p = col.back();
      index_t o = owner[static_cast<std::size_t>(p)];
      if (o < 0) {
        owner[static_cast<std::size_t>(p)] = static_cast<index_t>(pivots.size());
        pivots.push_back(std::move(col));
        break;
      }
      col = xor_merge(col, pivots[static_cast<std::size_t>(o)]);
    }
  }
  return static_cast<index_t>(pivots.size());
}

// True iff the square matrix is invertible over F2.
inline bool invertible(const SparseF2& m) { return m.rows == m.n_cols() && rank(m) == m.rows; }

}  // namespace ech
