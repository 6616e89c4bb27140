#pragma once

// Linearized Reeb flow across the Weinstein 1-handle and the spectrum of
// the asymptotic operator at its hyperbolic orbit.
//
// The flow splits into a rotation-by-t/2 block (the symplectization
// directions) and a cosh/sinh block (the contact plane). The contact block
// has fixed eigendirections with eigenvalues e^{+-sqrt(2) t}, which is what
// makes h hyperbolic with zero winding.
//
// Quadratic diagnostics (symplecticity, determinant, the finite-difference
// derivative check) are reported relative to the scale of the entries
// involved: the contact block grows like e^{sqrt(2) t}, so an absolute
// residual of a quadratic form carries an irreducible cancellation error of
// order |Phi|^2 eps and would be meaningless at large t. Entrywise
// comparisons (group law, closed form vs an independent exponential) stay
// absolute.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace ech {

using Mat2 = std::array<double, 4>;   // row major
using Mat4 = std::array<double, 16>;  // row major

namespace detail {

inline double& at4(Mat4& m, int i, int j) { return m[static_cast<std::size_t>(4 * i + j)]; }
inline double at4(const Mat4& m, int i, int j) { return m[static_cast<std::size_t>(4 * i + j)]; }

inline Mat4 mat4_identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) at4(m, i, i) = 1.0;
  return m;
}

inline Mat4 mat4_mul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      double aik = at4(a, i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < 4; ++j) at4(r, i, j) += aik * at4(b, k, j);
    }
  return r;
}

inline Mat4 mat4_transpose(const Mat4& a) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) at4(r, i, j) = at4(a, j, i);
  return r;
}

inline double mat4_norm(const Mat4& a) {
  double n = 0.0;
  for (double x : a) n = std::max(n, std::abs(x));
  return n;
}

inline double mat4_diff_norm(const Mat4& a, const Mat4& b) {
  double n = 0.0;
  for (std::size_t i = 0; i < 16; ++i) n = std::max(n, std::abs(a[i] - b[i]));
  return n;
}

inline double det3(double a, double b, double c, double d, double e, double f, double g, double h,
                   double i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

inline double mat4_det(const Mat4& m) {
  double r = 0.0;
  for (int j = 0; j < 4; ++j) {
    double minor[9];
    int p = 0;
    for (int i = 1; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        if (k == j) continue;
        minor[p++] = at4(m, i, k);
      }
    double cof = det3(minor[0], minor[1], minor[2], minor[3], minor[4], minor[5], minor[6],
                      minor[7], minor[8]);
    r += ((j % 2 == 0) ? 1.0 : -1.0) * at4(m, 0, j) * cof;
  }
  return r;
}

// Standard symplectic form on R^4 as two J0 blocks.
inline Mat4 j4() {
  Mat4 m{};
  at4(m, 0, 1) = -1.0;
  at4(m, 1, 0) = 1.0;
  at4(m, 2, 3) = -1.0;
  at4(m, 3, 2) = 1.0;
  return m;
}

// | Phi^T J Phi - J | over the squared magnitude of Phi.
inline double symplectic_residual(const Mat4& phi) {
  Mat4 j = j4();
  double n = std::max(1.0, mat4_norm(phi));
  return mat4_diff_norm(mat4_mul(mat4_transpose(phi), mat4_mul(j, phi)), j) / (n * n);
}

}  // namespace detail

// Generator of the linearized flow at the co-core sphere.
inline Mat4 weinstein_matrix_a() {
  Mat4 a{};
  detail::at4(a, 0, 1) = 0.5;
  detail::at4(a, 1, 0) = -0.5;
  detail::at4(a, 2, 3) = 1.0;
  detail::at4(a, 3, 2) = 2.0;
  return a;
}

struct FlowSample {
  double t = 0.0;
  Mat4 phi{};
};

inline FlowSample weinstein_flow(double t) {
  // Evaluate the hyperbolic block in long double: in pure double the
  // rounding of the argument sqrt(2)*t alone is worth ~1e-9 in the entries
  // at t=10, eating the whole comparison budget.
  const long double lt = static_cast<long double>(t);
  const long double r2 = std::sqrt(2.0L);
  const long double ch = std::cosh(r2 * lt), sh = std::sinh(r2 * lt);
  const double c = static_cast<double>(std::cos(lt / 2.0L));
  const double s = static_cast<double>(std::sin(lt / 2.0L));
  Mat4 phi{};
  detail::at4(phi, 0, 0) = c;
  detail::at4(phi, 0, 1) = s;
  detail::at4(phi, 1, 0) = -s;
  detail::at4(phi, 1, 1) = c;
  detail::at4(phi, 2, 2) = static_cast<double>(ch);
  detail::at4(phi, 2, 3) = static_cast<double>(sh / r2);
  detail::at4(phi, 3, 2) = static_cast<double>(r2 * sh);
  detail::at4(phi, 3, 3) = static_cast<double>(ch);
  if (detail::symplectic_residual(phi) > 1e-9)
    throw Error("flow sample lost symplecticity at t=" + std::to_string(t));
  return {t, phi};
}

// The symmetric matrix governing the asymptotic operator on the contact
// plane at h: S = -J0 * (lower block of A).
inline Mat2 weinstein_contact_s() { return Mat2{2.0, 0.0, 0.0, -1.0}; }

struct FlowReport {
  double max_derivative_residual = 0.0;  // finite-difference Phi' vs A Phi, relative
  double max_group_residual = 0.0;       // Phi(s+t) vs Phi(s) Phi(t), absolute
  double max_symplectic_residual = 0.0;  // relative
  double max_det_residual = 0.0;         // |det - 1| relative
  double max_block_residual = 0.0;       // off-diagonal 2x2 blocks, absolute
  double max_eigendirection_residual = 0.0;  // contact block on (1, +-sqrt 2), relative
  bool hyperbolic = true;  // contact eigenvalues real, positive, reciprocal
  bool cz_zero = true;     // contact eigendirections fixed: no rotation
  bool ok() const {
    return max_derivative_residual <= 1e-6 && max_group_residual <= 1e-9 &&
           max_symplectic_residual <= 1e-9 && max_det_residual <= 1e-9 &&
           max_block_residual <= 1e-9 && max_eigendirection_residual <= 1e-9 && hyperbolic &&
           cz_zero;
  }
};

inline FlowReport flow_report() {
  FlowReport rep;
  const Mat4 a = weinstein_matrix_a();
  const double r2 = std::sqrt(2.0);
  std::vector<double> grid;
  for (int j = 1; j <= 100; ++j) grid.push_back(0.1 * j);

  const double h = 1e-4;
  for (double t : grid) {
    Mat4 phi = weinstein_flow(t).phi;
    Mat4 fwd = weinstein_flow(t + h).phi, bwd = weinstein_flow(t - h).phi;
    Mat4 fd{}, aphi = detail::mat4_mul(a, phi);
    for (std::size_t i = 0; i < 16; ++i) fd[i] = (fwd[i] - bwd[i]) / (2.0 * h);
    rep.max_derivative_residual =
        std::max(rep.max_derivative_residual,
                 detail::mat4_diff_norm(fd, aphi) / std::max(1.0, detail::mat4_norm(aphi)));

    rep.max_symplectic_residual =
        std::max(rep.max_symplectic_residual, detail::symplectic_residual(phi));
    double scale = std::max(1.0, detail::mat4_norm(phi));
    rep.max_det_residual = std::max(rep.max_det_residual,
                                    std::abs(detail::mat4_det(phi) - 1.0) / (scale * scale));

    double block = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 2; j < 4; ++j)
        block = std::max({block, std::abs(detail::at4(phi, i, j)),
                          std::abs(detail::at4(phi, j - 2, i + 2))});
    rep.max_block_residual = std::max(rep.max_block_residual, block);

    // Contact block eigendirections (1, +-sqrt 2) should be carried to
    // e^{+-sqrt(2) t} times themselves: no rotation of the contact plane.
    for (double sign : {1.0, -1.0}) {
      double vx = 1.0, vy = sign * r2;
      double wx = detail::at4(phi, 2, 2) * vx + detail::at4(phi, 2, 3) * vy;
      double wy = detail::at4(phi, 3, 2) * vx + detail::at4(phi, 3, 3) * vy;
      double lam = std::exp(sign * r2 * t);
      double res = std::max(std::abs(wx - lam * vx), std::abs(wy - lam * vy)) / std::max(1.0, lam);
      rep.max_eigendirection_residual = std::max(rep.max_eigendirection_residual, res);
    }

    // Hyperbolicity: the contact block has trace 2cosh(sqrt(2) t) > 2 and
    // determinant 1, hence real distinct reciprocal eigenvalues.
    double tr = detail::at4(phi, 2, 2) + detail::at4(phi, 3, 3);
    double det = detail::at4(phi, 2, 2) * detail::at4(phi, 3, 3) -
                 detail::at4(phi, 2, 3) * detail::at4(phi, 3, 2);
    double disc = tr * tr - 4.0 * det;
    if (!(disc > 0.0) || std::abs(det - 1.0) / (scale * scale) > 1e-9) rep.hyperbolic = false;
  }

  // Group law on pairs staying inside the sampled range [0, 10], where the
  // entrywise comparison is meaningful at 1e-9.
  for (double s : {0.3, 1.1, 2.7, 4.9})
    for (double t : {0.4, 1.3, 3.8, 5.1}) {
      Mat4 lhs = weinstein_flow(s + t).phi;
      Mat4 rhs = detail::mat4_mul(weinstein_flow(s).phi, weinstein_flow(t).phi);
      rep.max_group_residual = std::max(rep.max_group_residual, detail::mat4_diff_norm(lhs, rhs));
    }

  rep.cz_zero = rep.hyperbolic && rep.max_eigendirection_residual <= 1e-9;
  return rep;
}

// ---------------------------------------------------------------------------
// Asymptotic operator J0 d/dt + S on period-1 loops, S constant symmetric.
// In the Fourier basis e^{2 pi i k t} the operator is the Hermitian 2x2
// block S + 2 pi i k J0, so eigenvalues come in closed form and the
// eigenfunctions are explicit loops whose winding we read off a mesh.

struct EigenMode {
  double lambda = 0.0;
  std::int64_t winding = 0;
  std::int64_t mode = 0;  // |k| of the Fourier mode
};

struct SpectrumResult {
  std::vector<EigenMode> modes;  // sorted by eigenvalue
  std::int64_t n_modes = 0;
  std::int64_t mesh = 0;
};

namespace detail {

// Winding of t -> Re(v e^{2 pi i k t}) over one period, by phase tracking.
inline std::int64_t loop_winding(const std::complex<double>& v1, const std::complex<double>& v2,
                                 std::int64_t k, std::int64_t mesh) {
  const double two_pi = 2.0 * std::numbers::pi;
  double total = 0.0;
  std::complex<double> prev;
  for (std::int64_t j = 0; j <= mesh; ++j) {
    double t = static_cast<double>(j) / static_cast<double>(mesh);
    std::complex<double> rot = std::polar(1.0, two_pi * static_cast<double>(k) * t);
    std::complex<double> z((v1 * rot).real(), (v2 * rot).real());
    if (std::abs(z) < 1e-10)
      throw ResolutionError("eigenfunction magnitude fell below 1e-10 on the mesh; "
                            "the winding is ambiguous at this resolution");
    if (j > 0) {
      double step = std::arg(z * std::conj(prev));
      if (std::abs(step) > std::numbers::pi / 2.0)
        throw ResolutionError("phase step exceeded pi/2 between mesh points; "
                              "increase the mesh to resolve the winding");
      total += step;
    }
    prev = z;
  }
  double w = total / two_pi;
  double rounded = std::round(w);
  if (std::abs(w - rounded) > 1e-6)
    throw ResolutionError("accumulated phase did not close up to an integer winding");
  return static_cast<std::int64_t>(rounded);
}

}  // namespace detail

inline SpectrumResult asymptotic_spectrum(const Mat2& s, std::int64_t n_modes,
                                          std::int64_t mesh = 0) {
  if (s[1] != s[2]) throw std::invalid_argument("asymptotic operator needs a symmetric S");
  if (n_modes < 8) throw std::invalid_argument("need at least 8 Fourier modes");
  if (mesh == 0) mesh = std::max<std::int64_t>(64, 32 * n_modes);

  const double two_pi = 2.0 * std::numbers::pi;
  SpectrumResult out;
  out.n_modes = n_modes;
  out.mesh = mesh;

  for (std::int64_t k = 0; k <= n_modes; ++k) {
    // Fourier block [[s00, c],[conj(c), s11]] with c = s01 - 2 pi i k.
    std::complex<double> c(s[1], -two_pi * static_cast<double>(k));
    double mean = (s[0] + s[3]) / 2.0;
    double gap = (s[0] - s[3]) / 2.0;
    double disc = std::sqrt(gap * gap + std::norm(c));
    for (double lambda : {mean - disc, mean + disc}) {
      std::complex<double> v1, v2;
      if (std::abs(c) == 0.0) {
        // diagonal block: plain coordinate eigenvectors
        if (std::abs(lambda - s[0]) <= std::abs(lambda - s[3])) {
          v1 = 1.0;
          v2 = 0.0;
        } else {
          v1 = 0.0;
          v2 = 1.0;
        }
      } else {
        v1 = c;
        v2 = lambda - s[0];
        double n = std::sqrt(std::norm(v1) + std::norm(v2));
        v1 /= n;
        v2 /= n;
      }
      std::int64_t w = detail::loop_winding(v1, v2, k, mesh);
      // k = 0 contributes one real dimension per eigenvalue; k >= 1
      // contributes two (real and imaginary parts of the complex mode).
      int copies = (k == 0) ? 1 : 2;
      for (int r = 0; r < copies; ++r) out.modes.push_back({lambda, w, k});
    }
  }

  std::sort(out.modes.begin(), out.modes.end(), [](const EigenMode& a, const EigenMode& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.winding != b.winding) return a.winding < b.winding;
    return a.mode < b.mode;
  });
  return out;
}

inline std::map<std::int64_t, std::int64_t> winding_multiplicities(const SpectrumResult& r) {
  std::map<std::int64_t, std::int64_t> m;
  for (const auto& e : r.modes) ++m[e.winding];
  return m;
}

// Windings must be non-increasing as the eigenvalue grows, compared across
// degeneracy groups at the given tolerance.
inline bool winding_monotone(const SpectrumResult& r, double group_tol = 1e-8) {
  std::size_t i = 0;
  std::int64_t prev_min = 0;
  bool first = true;
  while (i < r.modes.size()) {
    std::size_t j = i;
    std::int64_t gmin = r.modes[i].winding, gmax = r.modes[i].winding;
    while (j + 1 < r.modes.size() && r.modes[j + 1].lambda - r.modes[i].lambda <= group_tol) {
      ++j;
      gmin = std::min(gmin, r.modes[j].winding);
      gmax = std::max(gmax, r.modes[j].winding);
    }
    if (!first && gmax > prev_min) return false;
    prev_min = gmin;
    first = false;
    i = j + 1;
  }
  return true;
}

}  // namespace ech
