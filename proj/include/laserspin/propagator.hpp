#pragma once

// Time-ordered propagation of i dU/dt = H(t) U for the driven two-level
// system. Every step is the exact exponential of a traceless Hermitian 2x2
// generator, so unitarity holds structurally and only rounding accumulates:
//
//   midpoint: U_k+1 = exp(-i h H(t_k + h/2)) U_k                 (order 2)
//   magnus4:  two-exponential commutator-free scheme on the two   (order 4)
//             Gauss-Legendre nodes of the step
//
// Since H = -(kappa/2) Omega.sigma, a step exponential is exp(i w.sigma)
// with w = (kappa h / 2) * (weighted Omega average).

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "laserspin/model.hpp"
#include "laserspin/su2.hpp"

namespace laserspin {

enum class Method {
  midpoint,
  magnus4,
};

struct IntegratorSpec {
  Method method = Method::magnus4;
  // step selection, first positive wins: explicit step; step derived from a
  // local error target; fundamental period / steps_per_period
  double step = 0.0;
  double local_error_target = 0.0;
  int steps_per_period = 256;
};

// 4K(mu^2)/omega': the period of the drive generator (2 pi / omega' in the
// circular degeneracy).
inline double fundamental_period(const PhysicalConfig& c) {
  return 4.0 * elliptic::complete_k(c.mu_sq()) / c.omega_prime();
}

namespace detail {

// largest admissible step: the drive must be resolved
inline double max_step(const PhysicalConfig& c) { return (M_PI / 8.0) / c.omega_prime(); }

inline double resolve_step(const PhysicalConfig& c, const IntegratorSpec& spec) {
  const double cap = max_step(c);
  if (spec.step > 0.0) {
    if (spec.step > cap) {
      throw std::invalid_argument("IntegratorSpec: step * omega' exceeds pi/8");
    }
    return spec.step;
  }
  if (spec.local_error_target > 0.0) {
    const int order = spec.method == Method::midpoint ? 2 : 4;
    const double rate = std::abs(c.kappa()) * c.eta() * c.omega_prime();
    const double h = rate > 0.0
                         ? std::pow(spec.local_error_target, 1.0 / (order + 1)) / rate
                         : cap;
    return std::min(h, cap);
  }
  if (spec.steps_per_period < 1) {
    throw std::invalid_argument("IntegratorSpec: steps_per_period must be >= 1");
  }
  return std::min(fundamental_period(c) / spec.steps_per_period, cap);
}

inline Vec3 larmor_vec(const PhysicalConfig& c, double t) {
  const LarmorVector v = larmor(c, t);
  return {v.omega1, v.omega2, v.omega3};
}

// Steps for dU/dt = (i/2) (g(t).sigma) U; the physical generator is
// g(t) = kappa Omega(t), so that i dU/dt = H U with H = -(kappa/2) Omega.sigma.
// The convention-scan machinery substitutes sign-flipped fields here.
template <typename Field, typename Accumulate>
inline void integrate_field(Field&& field, Method method, double t0, double t1, double step,
                            Accumulate&& acc) {
  if (!std::isfinite(t0) || !std::isfinite(t1)) {
    throw std::invalid_argument("evolve: time endpoints must be finite");
  }
  const double span = t1 - t0;
  if (span == 0.0) return;
  const long n = static_cast<long>(std::ceil(std::abs(span) / step));
  const double h = span / static_cast<double>(n);
  if (method == Method::midpoint) {
    for (long k = 0; k < n; ++k) {
      acc(exp_i_sigma((0.5 * h) * field(t0 + (k + 0.5) * h)));
    }
  } else {
    static const double root3_6 = std::sqrt(3.0) / 6.0;
    const double c1 = 0.5 - root3_6;
    const double c2 = 0.5 + root3_6;
    const double p = 0.25 - root3_6;
    const double q = 0.25 + root3_6;
    for (long k = 0; k < n; ++k) {
      const double tk = t0 + k * h;
      const Vec3 g1 = field(tk + c1 * h);
      const Vec3 g2 = field(tk + c2 * h);
      acc(exp_i_sigma((0.5 * h) * (q * g1 + p * g2)));
      acc(exp_i_sigma((0.5 * h) * (p * g1 + q * g2)));
    }
  }
}

template <typename Accumulate>
inline void integrate(const PhysicalConfig& c, double t0, double t1, const IntegratorSpec& spec,
                      Accumulate&& acc) {
  const double h = resolve_step(c, spec);
  integrate_field([&c](double t) { return c.kappa() * larmor_vec(c, t); }, spec.method, t0, t1, h,
                  acc);
}

}  // namespace detail

// Propagator U(t0 -> t1). t1 < t0 integrates backwards.
inline Unitary2 evolve_unitary(const PhysicalConfig& c, double t0, double t1,
                               const IntegratorSpec& spec = {}) {
  Mat2c u = Mat2c::identity();
  detail::integrate(c, t0, t1, spec, [&u](const Mat2c& step) { u = step * u; });
  if (!all_finite(u)) throw std::runtime_error("evolve_unitary: non-finite propagator");
  return u;
}

inline SpinState evolve_state(const SpinState& s, const PhysicalConfig& c, double t0, double t1,
                              const IntegratorSpec& spec = {}) {
  SpinState out = s;
  detail::integrate(c, t0, t1, spec, [&out](const Mat2c& step) { out = apply(step, out); });
  return out;
}

// (<sigma_1>, <sigma_2>, <sigma_3>) for a pure state.
inline std::array<double, 3> bloch(const SpinState& s) {
  const cplx cross = std::conj(s.up) * s.down;
  return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(s.up) - std::norm(s.down)};
}

struct TrajectoryPoint {
  double t = 0.0;
  SpinState state;
  std::array<double, 3> bloch{};
};

// Dense output over a grid starting at t = 0; each segment continues from
// the previous sample instead of re-integrating from the origin.
inline std::vector<TrajectoryPoint> sample_trajectory(const SpinState& initial,
                                                      const PhysicalConfig& c,
                                                      const std::vector<double>& t_grid,
                                                      const IntegratorSpec& spec = {}) {
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw std::invalid_argument("sample_trajectory: grid must start at t = 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument("sample_trajectory: grid must be strictly increasing");
    }
  }
  std::vector<TrajectoryPoint> out;
  out.reserve(t_grid.size());
  SpinState s = initial;
  out.push_back({0.0, s, bloch(s)});
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    s = evolve_state(s, c, t_grid[i - 1], t_grid[i], spec);
    out.push_back({t_grid[i], s, bloch(s)});
  }
  return out;
}

}  // namespace laserspin
