#pragma once

// Closed-form solutions of the driven spin problem.
//
// Circular polarization (eps = 1/sqrt(2)): with
//
//   Delta = -1/(kappa eta) + eta^2 gamma_z,   beta = atan(Delta),
//   r     = eta kappa omega' sqrt(1 + Delta^2),
//
// the propagator in Euler form is
//
//   U(t) = e^{-i omega' t s3/2} e^{-i beta s1/2} e^{-i r t s3/2} e^{+i beta s1/2}
//
// and advancing one drive period T = 2 pi / omega' gives
//
//   U(t + T) = e^{i pi} U(t) M,   M = e^{-i beta s1/2} M_D e^{+i beta s1/2},
//
// an identity of the Euler product when M_D = e^{-i phi s3} with the cycle
// phase phi = pi eta kappa sqrt(1 + Delta^2). That sign of the M_D exponent
// is forced by the relation above; the spectrum {e^{+i phi}, e^{-i phi}} is
// symmetric either way. phi -> pi as eta -> 0, the free-field value.
//
// Linear polarization (eps = 0 or 1): H(t) stays proportional to one Pauli
// matrix, the time ordering is trivial, and with u = omega' t
//
//   eps = 0:  U(t) = exp(+i (kappa eta eps'/2) (1 - cn(u, mu^2)) s1),
//   eps = 1:  U(t) = exp(+i (kappa eta eps /2) sn(u, mu^2) s2),
//
// using int_0^u sn dn = 1 - cn(u) and int_0^u cn dn = sn(u). Both return to
// the identity after u = 4K(mu^2).

#include <cmath>
#include <stdexcept>

#include "laserspin/elliptic.hpp"
#include "laserspin/model.hpp"
#include "laserspin/su2.hpp"

namespace laserspin {

inline constexpr double kCircularEpsilon = 0.70710678118654752;  // 1/sqrt(2)

inline bool is_circular(const PhysicalConfig& c, double tol = 1e-12) {
  return std::abs(c.epsilon() - kCircularEpsilon) <= tol;
}

struct CircularSolution {
  double delta = 0.0;  // detuning combination, tan(beta) = delta
  double beta = 0.0;   // tilt angle of the rotation axis, radians
  double rabi = 0.0;   // eta kappa omega' sqrt(1 + delta^2); sign follows kappa
  PhysicalConfig config;
};

inline CircularSolution circular_params(const PhysicalConfig& c) {
  if (!is_circular(c)) {
    throw std::invalid_argument("circular_params: epsilon = 1/sqrt(2) required");
  }
  if (c.eta() == 0.0) {
    throw std::domain_error("circular_params: eta = 0 makes Delta diverge; quantum_phase handles the limit");
  }
  const double delta = -1.0 / (c.kappa() * c.eta()) + c.eta() * c.eta() * c.gamma_z();
  const double root = std::hypot(1.0, delta);
  return {delta, std::atan(delta), c.eta() * c.kappa() * c.omega_prime() * root, c};
}

inline Unitary2 circular_propagator(const PhysicalConfig& c, double t) {
  const CircularSolution s = circular_params(c);
  return rot_z(c.omega_prime() * t) * rot_x(s.beta) * rot_z(s.rabi * t) * rot_x(-s.beta);
}

// Cycle phase of the diagonalized monodromy. Continuous at eta = 0 where it
// takes the free-field value pi (sign following kappa).
inline double quantum_phase(const PhysicalConfig& c) {
  if (c.eta() == 0.0) return c.kappa() > 0 ? M_PI : -M_PI;
  const double delta = -1.0 / (c.kappa() * c.eta()) + c.eta() * c.eta() * c.gamma_z();
  return M_PI * c.eta() * c.kappa() * std::hypot(1.0, delta);
}

struct Monodromy {
  Unitary2 matrix;    // M
  Unitary2 diagonal;  // M_D = e^{-i phase s3}
  double phase = 0.0; // pi eta kappa sqrt(1 + Delta^2), unwrapped
};

inline Monodromy monodromy(const PhysicalConfig& c) {
  const CircularSolution s = circular_params(c);
  const double phase = quantum_phase(c);
  const Unitary2 diag = exp_i_sigma({0.0, 0.0, -phase});
  return {rot_x(s.beta) * diag * rot_x(-s.beta), diag, phase};
}

inline Unitary2 linear_propagator(const PhysicalConfig& c, double t) {
  const double u = c.omega_prime() * t;
  const elliptic::EllipticParameter m(c.mu_sq());
  if (c.epsilon() == 0.0) {
    const auto j = elliptic::jacobi(u, m);
    return exp_i_sigma({0.5 * c.kappa() * c.eta() * c.epsilon_prime() * (1.0 - j.cn), 0.0, 0.0});
  }
  if (c.epsilon() == 1.0) {
    const auto j = elliptic::jacobi(u, m);
    return exp_i_sigma({0.0, 0.5 * c.kappa() * c.eta() * c.epsilon() * j.sn, 0.0});
  }
  throw std::invalid_argument("linear_propagator: epsilon must be 0 or 1");
}

struct PeriodResult {
  double exact = 0.0;       // 4 K(mu^2) / omega'
  double expansion2 = 0.0;  // (2 pi / omega') (1 + (1/4)(1 - 2 eps^2) gamma_z^p eta^2)
};

inline PeriodResult period(const PhysicalConfig& c) {
  PeriodResult out;
  out.exact = 4.0 * elliptic::complete_k(c.mu_sq()) / c.omega_prime();
  const int p = c.options().period_expansion_gamma_power;
  const double gz = p == 1 ? c.gamma_z() : c.gamma_z() * c.gamma_z();
  out.expansion2 = (2.0 * M_PI / c.omega_prime()) *
                   (1.0 + 0.25 * c.polarization_factor() * gz * c.eta() * c.eta());
  return out;
}

}  // namespace laserspin
