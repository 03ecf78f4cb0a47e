#pragma once

// Jacobi elliptic functions sn, cn, dn and the complete elliptic integral of
// the first kind K, for real argument and real parameter m in (-1, 1).
//
// K uses the arithmetic-geometric mean. sn/cn/dn use Bulirsch's sncndn
// descending-Landen recurrence (Numer. Math. 7, 78-90 (1965)), which keeps
// dn well conditioned near the quarter periods where amplitude-based
// backward recurrences degrade to 0/0. Negative parameter is reduced to an
// equivalent positive parameter mu = -m/(1-m) with rescaled argument
// (A&S 16.10):
//
//   sn(u|m) = sd(v|mu)/sqrt(1-m),  cn(u|m) = cd(v|mu),  dn(u|m) = nd(v|mu),
//   K(m)    = K(mu)/sqrt(1-m),     v = u*sqrt(1-m).
//
// m is the parameter (the squared modulus); callers that think in terms of
// the modulus k should pass m = k^2.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace laserspin::elliptic {

// Parameter m = k^2, restricted to (-1, 1). |m| >= 1 is outside the regime
// this library models and is rejected at construction.
class EllipticParameter {
 public:
  explicit EllipticParameter(double m) : m_(m) {
    if (!std::isfinite(m) || std::abs(m) >= 1.0) {
      throw std::domain_error("elliptic parameter must satisfy |m| < 1, got " + std::to_string(m));
    }
  }
  double value() const { return m_; }

 private:
  double m_;
};

struct JacobiTriple {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
  double u = 0.0;
};

namespace detail {

inline constexpr int kAgmMaxIter = 24;
inline constexpr double kAgmTol = 1e-16;

// K(m) for m in [0, 1) by the AGM: K = pi / (2 * agm(1, sqrt(1-m))).
inline double complete_k_nonneg(double m) {
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int i = 0; i < kAgmMaxIter && std::abs(a - b) > kAgmTol * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return M_PI / (2.0 * a);
}

// sn, cn, dn for m in [0, 1): Bulirsch's sncndn. The scale factors of the
// descending Landen chain are stored on the way down; sn/cn follow from the
// trigonometric limit of the transformed argument and dn is rebuilt by the
// ascending product recurrence.
inline JacobiTriple jacobi_nonneg(double u, double m) {
  static const double tol = std::sqrt(0.01 * std::numeric_limits<double>::epsilon());

  JacobiTriple out;
  out.u = u;

  double mc = 1.0 - m;  // complementary parameter, in (0, 1]
  std::array<double, kAgmMaxIter + 1> scale_a{};
  std::array<double, kAgmMaxIter + 1> scale_b{};

  double a = 1.0;
  double c = 1.0;
  int depth = 0;
  for (int i = 0; i <= kAgmMaxIter; ++i) {
    depth = i;
    scale_a[i] = a;
    mc = std::sqrt(mc);
    scale_b[i] = mc;
    c = 0.5 * (a + mc);
    if (std::abs(a - mc) <= tol * a) break;
    mc *= a;
    a = c;
  }

  const double x = u * c;
  double sn = std::sin(x);
  double cn = std::cos(x);
  double dn = 1.0;
  if (sn != 0.0) {
    a = cn / sn;
    c *= a;
    for (int i = depth; i >= 0; --i) {
      const double b = scale_a[i];
      a *= c;
      c *= dn;
      dn = (scale_b[i] + a) / (b + a);
      a = c / b;
    }
    const double inv = 1.0 / std::sqrt(c * c + 1.0);
    sn = sn < 0.0 ? -inv : inv;
    cn = c * sn;
  }

  out.sn = sn;
  out.cn = cn;
  out.dn = dn;
  return out;
}

}  // namespace detail

// Complete elliptic integral of the first kind, K(m). The quarter period of
// sn and cn at parameter m.
inline double complete_k(EllipticParameter m) {
  const double mv = m.value();
  if (mv < 0.0) {
    const double mu = -mv / (1.0 - mv);
    return detail::complete_k_nonneg(mu) / std::sqrt(1.0 - mv);
  }
  return detail::complete_k_nonneg(mv);
}

inline double complete_k(double m) { return complete_k(EllipticParameter(m)); }

inline JacobiTriple jacobi(double u, EllipticParameter m) {
  if (!std::isfinite(u)) {
    throw std::domain_error("jacobi: argument u must be finite");
  }
  const double mv = m.value();
  if (mv >= 0.0) return detail::jacobi_nonneg(u, mv);

  const double mu = -mv / (1.0 - mv);
  const double root = std::sqrt(1.0 - mv);
  const JacobiTriple p = detail::jacobi_nonneg(u * root, mu);
  JacobiTriple out;
  out.u = u;
  out.sn = p.sn / (root * p.dn);
  out.cn = p.cn / p.dn;
  out.dn = 1.0 / p.dn;
  return out;
}

inline JacobiTriple jacobi(double u, double m) { return jacobi(u, EllipticParameter(m)); }

}  // namespace laserspin::elliptic
