#pragma once

// Dense 2x2 complex algebra for spin-1/2 work: Pauli-vector exponentials,
// propagators and spinor states. Everything here has a closed form, so no
// general matrix library is pulled in.

#include <cmath>
#include <complex>
#include <utility>

namespace laserspin {

using cplx = std::complex<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline double norm(const Vec3& v) { return std::hypot(v.x, v.y, v.z); }

struct Mat2c {
  cplx m00{}, m01{}, m10{}, m11{};

  static Mat2c identity() { return {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)}; }
  static Mat2c zero() { return {}; }
};

// Propagators and monodromy matrices carry the full U(2) phase, so a plain
// 2x2 complex matrix is the right representation; unitarity is a checked
// invariant, not a type guarantee.
using Unitary2 = Mat2c;

inline Mat2c operator*(const Mat2c& a, const Mat2c& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

inline Mat2c operator+(const Mat2c& a, const Mat2c& b) {
  return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}

inline Mat2c operator-(const Mat2c& a, const Mat2c& b) {
  return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}

inline Mat2c operator*(cplx s, const Mat2c& a) { return {s * a.m00, s * a.m01, s * a.m10, s * a.m11}; }

inline Mat2c adjoint(const Mat2c& a) {
  return {std::conj(a.m00), std::conj(a.m10), std::conj(a.m01), std::conj(a.m11)};
}

inline cplx trace(const Mat2c& a) { return a.m00 + a.m11; }
inline cplx det(const Mat2c& a) { return a.m00 * a.m11 - a.m01 * a.m10; }

inline double frobenius_norm(const Mat2c& a) {
  return std::sqrt(std::norm(a.m00) + std::norm(a.m01) + std::norm(a.m10) + std::norm(a.m11));
}

inline double unitarity_defect(const Mat2c& u) {
  return frobenius_norm(adjoint(u) * u - Mat2c::identity());
}

inline bool all_finite(const Mat2c& a) {
  auto ok = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  return ok(a.m00) && ok(a.m01) && ok(a.m10) && ok(a.m11);
}

// exp(i w.sigma) = cos|w| I + i sin|w|/|w| (w.sigma). Exactly unitary up to
// rounding, which is what makes the exponential steppers drift-free.
inline Mat2c exp_i_sigma(const Vec3& w) {
  const double th = norm(w);
  if (th == 0.0) return Mat2c::identity();
  const double c = std::cos(th);
  const double s = std::sin(th) / th;
  const cplx i(0, 1);
  return {c + i * (s * w.z), i * s * cplx(w.x, -w.y),
          i * s * cplx(w.x, w.y), c - i * (s * w.z)};
}

// Spin rotations exp(-i theta sigma_k / 2).
inline Mat2c rot_x(double theta) { return exp_i_sigma({-0.5 * theta, 0.0, 0.0}); }
inline Mat2c rot_y(double theta) { return exp_i_sigma({0.0, -0.5 * theta, 0.0}); }
inline Mat2c rot_z(double theta) { return exp_i_sigma({0.0, 0.0, -0.5 * theta}); }

// Eigenvalues of a 2x2 complex matrix from trace and determinant.
inline std::pair<cplx, cplx> eigenvalues(const Mat2c& a) {
  const cplx tr = trace(a);
  const cplx disc = std::sqrt(tr * tr - 4.0 * det(a));
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

struct SpinState {
  cplx up{1, 0}, down{0, 0};
};

inline double norm(const SpinState& s) { return std::sqrt(std::norm(s.up) + std::norm(s.down)); }

inline SpinState normalized(const SpinState& s) {
  const double n = norm(s);
  return {s.up / n, s.down / n};
}

inline SpinState apply(const Mat2c& u, const SpinState& s) {
  return {u.m00 * s.up + u.m01 * s.down, u.m10 * s.up + u.m11 * s.down};
}

// <a|b>
inline cplx inner(const SpinState& a, const SpinState& b) {
  return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

}  // namespace laserspin
