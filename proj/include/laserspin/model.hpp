#pragma once

// Physical parameters of the driven spin and the quantities derived from
// them, plus the instantaneous Larmor vector and the two-level Hamiltonian.
//
// Units: hbar = 1 and kappa is a dimensionless coupling; time is whatever
// unit makes omega an angular frequency. With
//
//   gamma_z = 1/(1 - beta_z),  omega' = omega/gamma_z,
//   eps'    = sqrt(1 - eps^2), mu^2   = (1 - 2 eps^2) eta^2 gamma_z,
//
// the precession vector at u = omega' t is
//
//   Omega_1 = eta omega' eps' sn(u, mu^2) dn(u, mu^2)
//   Omega_2 = eta omega' eps  cn(u, mu^2) dn(u, mu^2)
//   Omega_3 = -eta^2 eps eps' omega            (constant in time)
//
// and H(t) = -(kappa/2) Omega(t).sigma. Omega_3 carries the unshifted omega;
// the omega3_uses_omega_prime toggle switches it to omega' for sensitivity
// studies.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "laserspin/elliptic.hpp"
#include "laserspin/su2.hpp"

namespace laserspin {

struct ConfigOptions {
  bool omega3_uses_omega_prime = false;
  // power p of gamma_z in the O(eta^2) period expansion; 1 is the value the
  // modulus implies, 2 is kept selectable for sensitivity studies
  int period_expansion_gamma_power = 1;
};

class PhysicalConfig {
 public:
  PhysicalConfig(double eta, double epsilon, double omega, double beta_z, double kappa,
                 ConfigOptions opts = {})
      : eta_(eta), epsilon_(epsilon), omega_(omega), beta_z_(beta_z), kappa_(kappa), opts_(opts) {
    auto fail = [](const std::string& msg) { throw std::domain_error("PhysicalConfig: " + msg); };
    if (!(std::isfinite(eta) && std::isfinite(epsilon) && std::isfinite(omega) &&
          std::isfinite(beta_z) && std::isfinite(kappa))) {
      fail("all parameters must be finite");
    }
    if (eta < 0.0) fail("eta must be >= 0, got " + std::to_string(eta));
    if (eta >= 1.0) {
      fail("eta = " + std::to_string(eta) + " is outside the semi-relativistic regime (eta^2 < 1 required)");
    }
    if (epsilon < 0.0 || epsilon > 1.0) fail("epsilon must lie in [0, 1], got " + std::to_string(epsilon));
    if (omega <= 0.0) fail("omega must be > 0, got " + std::to_string(omega));
    if (beta_z <= -1.0 || beta_z >= 1.0) {
      fail("beta_z must lie in (-1, 1), got " + std::to_string(beta_z));
    }
    if (kappa == 0.0) fail("kappa must be nonzero");
    if (opts.period_expansion_gamma_power != 1 && opts.period_expansion_gamma_power != 2) {
      fail("period_expansion_gamma_power must be 1 or 2");
    }

    gamma_z_ = 1.0 / (1.0 - beta_z);
    omega_prime_ = omega / gamma_z_;
    epsilon_prime_ = std::sqrt(1.0 - epsilon * epsilon);
    // 1 - 2 eps^2 vanishes identically at circular polarization; absorb the
    // rounding residue of eps = 1/sqrt(2) so mu^2 = 0 holds exactly there
    pol_factor_ = 1.0 - 2.0 * epsilon * epsilon;
    if (std::abs(pol_factor_) < 4.0 * std::numeric_limits<double>::epsilon()) pol_factor_ = 0.0;
    mu_sq_ = pol_factor_ * eta * eta * gamma_z_;
    if (!(std::abs(mu_sq_) < 1.0)) {
      fail("derived modulus mu^2 = " + std::to_string(mu_sq_) +
           " must satisfy |mu^2| < 1; reduce eta or beta_z");
    }
  }

  double eta() const { return eta_; }
  double epsilon() const { return epsilon_; }
  double omega() const { return omega_; }
  double beta_z() const { return beta_z_; }
  double kappa() const { return kappa_; }
  const ConfigOptions& options() const { return opts_; }

  double gamma_z() const { return gamma_z_; }
  double omega_prime() const { return omega_prime_; }
  double epsilon_prime() const { return epsilon_prime_; }
  double mu_sq() const { return mu_sq_; }
  // 1 - 2 eps^2, exactly zero at circular polarization
  double polarization_factor() const { return pol_factor_; }

  // eta above this is still accepted but the eta^2 expansions thin out
  bool strong_field_warning() const { return eta_ > 0.7; }

 private:
  double eta_, epsilon_, omega_, beta_z_, kappa_;
  ConfigOptions opts_;
  double gamma_z_, omega_prime_, epsilon_prime_, mu_sq_, pol_factor_;
};

struct DerivedQuantities {
  double gamma_z;
  double omega_prime;
  double epsilon_prime;
  double mu_sq;
};

inline DerivedQuantities derive(const PhysicalConfig& c) {
  return {c.gamma_z(), c.omega_prime(), c.epsilon_prime(), c.mu_sq()};
}

struct LarmorVector {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double t = 0.0;
};

inline LarmorVector larmor(const PhysicalConfig& c, double t) {
  if (!std::isfinite(t)) throw std::domain_error("larmor: time must be finite");
  const double u = c.omega_prime() * t;
  const auto j = elliptic::jacobi(u, elliptic::EllipticParameter(c.mu_sq()));
  const double w3base = c.options().omega3_uses_omega_prime ? c.omega_prime() : c.omega();
  LarmorVector v;
  v.t = t;
  v.omega1 = c.eta() * c.omega_prime() * c.epsilon_prime() * j.sn * j.dn;
  v.omega2 = c.eta() * c.omega_prime() * c.epsilon() * j.cn * j.dn;
  v.omega3 = -c.eta() * c.eta() * c.epsilon() * c.epsilon_prime() * w3base;
  return v;
}

// H(t) = -(kappa/2) Omega(t).sigma, traceless Hermitian by construction.
inline Mat2c hamiltonian(const PhysicalConfig& c, double t) {
  const LarmorVector v = larmor(c, t);
  const double f = -0.5 * c.kappa();
  return {cplx(f * v.omega3, 0.0), cplx(f * v.omega1, -f * v.omega2),
          cplx(f * v.omega1, f * v.omega2), cplx(-f * v.omega3, 0.0)};
}

}  // namespace laserspin
