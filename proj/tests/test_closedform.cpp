#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "laserspin/closedform.hpp"
#include "laserspin/propagator.hpp"
#include "laserspin/random.hpp"

using namespace laserspin;

namespace {

PhysicalConfig circular_config(double eta, double kappa = 1.0, double beta_z = 0.0, double omega = 1.0) {
  return PhysicalConfig(eta, kCircularEpsilon, omega, beta_z, kappa);
}

double dist(const Mat2c& a, const Mat2c& b) { return frobenius_norm(a - b); }

const cplx kI(0, 1);

}  // namespace

TEST_CASE("circular parameters by direct substitution") {
  const auto s = circular_params(circular_config(0.5));
  REQUIRE(s.delta == Catch::Approx(-1.75).margin(1e-15));
  REQUIRE(s.beta == Catch::Approx(std::atan(-1.75)).margin(1e-15));
  REQUIRE(s.rabi == Catch::Approx(0.5 * std::sqrt(1.0 + 1.75 * 1.75)).margin(1e-14));
  REQUIRE(std::tan(s.beta) == Catch::Approx(s.delta).margin(1e-12));
}

TEST_CASE("circular parameter preconditions") {
  REQUIRE_THROWS_AS(circular_params(PhysicalConfig(0.3, 0.0, 1.0, 0.0, 1.0)), std::invalid_argument);
  REQUIRE_THROWS_AS(circular_params(circular_config(0.0)), std::domain_error);
}

TEST_CASE("rabi exponent approaches omega' as the field vanishes") {
  const auto s = circular_params(circular_config(1e-8));
  REQUIRE(std::abs(s.rabi - 1.0) <= 1e-6);
  REQUIRE(s.rabi >= 0.0);
}

TEST_CASE("euler propagator at t = 0 is the identity") {
  REQUIRE(dist(circular_propagator(circular_config(0.37), 0.0), Mat2c::identity()) <= 1e-15);
}

TEST_CASE("zero tilt collapses the euler product to a sigma3 rotation") {
  // Delta = 0 requires kappa = 1/(eta^3 gamma_z)
  const double eta = 0.5;
  const auto c = circular_config(eta, 1.0 / (eta * eta * eta));
  const auto s = circular_params(c);
  REQUIRE(std::abs(s.delta) <= 1e-12);
  for (double t : {0.4, 2.0, 7.7}) {
    const auto u = circular_propagator(c, t);
    const auto expected = rot_z((c.omega_prime() + s.rabi) * t);
    CAPTURE(t);
    REQUIRE(dist(u, expected) <= 1e-13);
  }
}

TEST_CASE("one-period relation with the monodromy matrix") {
  Rng rng(0xf1e7);
  for (int i = 0; i < 25; ++i) {
    const auto c = circular_config(rng.uniform(0.02, 0.69), rng.uniform(0.3, 2.5),
                                   rng.uniform(-0.3, 0.4), rng.uniform(0.5, 2.0));
    const double T = 2.0 * M_PI / c.omega_prime();
    const auto m = monodromy(c);
    for (int k = 0; k < 20; ++k) {
      const double t = rng.uniform(0.0, 3.0 * T);
      const auto lhs = circular_propagator(c, t + T);
      const auto rhs = std::exp(kI * M_PI) * (circular_propagator(c, t) * m.matrix);
      CAPTURE(c.eta(), c.kappa(), t);
      REQUIRE(dist(lhs, rhs) <= 1e-12);
    }
  }
}

TEST_CASE("propagator after one cycle equals e^{i pi} M") {
  const auto c = circular_config(0.3);
  const double T = 2.0 * M_PI / c.omega_prime();
  const auto m = monodromy(c);
  REQUIRE(dist(circular_propagator(c, T), std::exp(kI * M_PI) * m.matrix) <= 1e-13);
}

TEST_CASE("monodromy structure") {
  Rng rng(0x30d0);
  for (int i = 0; i < 200; ++i) {
    const auto c = circular_config(rng.uniform(0.02, 0.69), rng.uniform(0.3, 2.5),
                                   rng.uniform(-0.3, 0.4), rng.uniform(0.5, 2.0));
    const auto s = circular_params(c);
    const auto m = monodromy(c);

    // similarity M = V M_D V^dagger with V = e^{-i beta s1/2}
    const auto v = rot_x(s.beta);
    REQUIRE(dist(m.matrix, v * m.diagonal * adjoint(v)) <= 1e-12);

    // spectrum is e^{+-i phase}
    const auto [l1, l2] = eigenvalues(m.matrix);
    const cplx e1 = std::exp(kI * m.phase);
    const cplx e2 = std::exp(-kI * m.phase);
    const double match = std::min(std::abs(l1 - e1) + std::abs(l2 - e2),
                                  std::abs(l1 - e2) + std::abs(l2 - e1));
    REQUIRE(match <= 1e-12);

    // unitarity of every closed-form output
    REQUIRE(unitarity_defect(m.matrix) <= 1e-12);
    REQUIRE(unitarity_defect(circular_propagator(c, rng.uniform(0.0, 20.0))) <= 1e-12);
  }
}

TEST_CASE("zero tilt makes the monodromy diagonal") {
  const double eta = 0.4;
  const auto c = circular_config(eta, 1.0 / (eta * eta * eta));
  const auto m = monodromy(c);
  REQUIRE(dist(m.matrix, m.diagonal) <= 1e-13);
}

TEST_CASE("free-field limit of the cycle phase and monodromy") {
  REQUIRE(quantum_phase(circular_config(0.0, 1.0)) == M_PI);
  REQUIRE(quantum_phase(PhysicalConfig(0.0, kCircularEpsilon, 1.0, 0.0, -1.0)) == -M_PI);

  const auto c = circular_config(1e-8);
  REQUIRE(std::abs(quantum_phase(c) - M_PI) <= 1e-6);
  const auto m = monodromy(c);
  REQUIRE(dist(std::exp(kI * M_PI) * m.matrix, Mat2c::identity()) <= 1e-4);

  // continuity toward the limit
  const double prev = std::abs(quantum_phase(circular_config(1e-4)) - M_PI);
  const double next = std::abs(quantum_phase(circular_config(1e-6)) - M_PI);
  REQUIRE(next < prev);
}

TEST_CASE("cycle phase by substitution and against the monodromy eigenphase") {
  const auto c = circular_config(0.5);
  REQUIRE(quantum_phase(c) ==
          Catch::Approx(M_PI * 0.5 * std::sqrt(1.0 + 1.75 * 1.75)).margin(1e-13));

  const auto m = monodromy(c);
  const auto [l1, l2] = eigenvalues(m.matrix);
  const double ph = std::abs(std::arg(l1));
  // eigenvalue args live in (-pi, pi]; compare modulo 2 pi
  const double expect = std::remainder(m.phase, 2.0 * M_PI);
  REQUIRE(ph == Catch::Approx(std::abs(expect)).margin(1e-12));
}

TEST_CASE("linear closed form: identity at t = 0 and after a full elliptic period") {
  for (double eps : {0.0, 1.0}) {
    const PhysicalConfig c(0.45, eps, 1.0, 0.1, 1.0);
    CAPTURE(eps);
    REQUIRE(dist(linear_propagator(c, 0.0), Mat2c::identity()) <= 1e-15);
    const double T = fundamental_period(c);
    REQUIRE(dist(linear_propagator(c, T), Mat2c::identity()) <= 1e-12);
  }
  REQUIRE_THROWS_AS(linear_propagator(PhysicalConfig(0.3, 0.5, 1.0, 0.0, 1.0), 1.0),
                    std::invalid_argument);
}

TEST_CASE("linear closed form agrees with the numerical propagator") {
  for (double eps : {0.0, 1.0}) {
    for (double beta_z : {0.0, 0.2}) {
      const PhysicalConfig c(0.5, eps, 1.0, beta_z, 1.0);
      const double T = fundamental_period(c);
      double worst = 0.0;
      for (int k = 1; k <= 40; ++k) {
        const double t = k * T / 16.0;  // up to 2.5 periods
        worst = std::max(worst, dist(linear_propagator(c, t), evolve_unitary(c, 0.0, t)));
      }
      CAPTURE(eps, beta_z, worst);
      REQUIRE(worst <= 1e-9);
    }
  }
}

TEST_CASE("period law") {
  SECTION("circular polarization leaves the cycle unchanged, exactly") {
    const auto c = circular_config(0.6, 1.0, 0.25, 1.3);
    const auto p = period(c);
    REQUIRE(p.exact == 2.0 * M_PI / c.omega_prime());
    REQUIRE(p.expansion2 == 2.0 * M_PI / c.omega_prime());
  }
  SECTION("free field gives the bare doppler-shifted cycle") {
    const PhysicalConfig c(0.0, 0.3, 1.0, 0.1, 1.0);
    REQUIRE(period(c).exact == 2.0 * M_PI / c.omega_prime());
  }
  SECTION("expansion residual scales as eta^4 at linear polarization") {
    auto residual = [](double eta) {
      const PhysicalConfig c(eta, 0.0, 1.0, 0.0, 1.0);
      const auto p = period(c);
      return std::abs(p.exact - p.expansion2);
    };
    const double r1 = residual(0.1);
    const double r2 = residual(0.2);
    const double r4 = residual(0.4);
    CAPTURE(r1, r2, r4);
    REQUIRE(r2 / r1 == Catch::Approx(16.0).epsilon(0.25));
    REQUIRE(r4 / r2 == Catch::Approx(16.0).epsilon(0.25));
  }
  SECTION("gamma power toggle moves the expansion but not the exact period") {
    ConfigOptions o2;
    o2.period_expansion_gamma_power = 2;
    const PhysicalConfig c1(0.3, 0.0, 1.0, 0.2, 1.0);
    const PhysicalConfig c2(0.3, 0.0, 1.0, 0.2, 1.0, o2);
    REQUIRE(period(c1).exact == period(c2).exact);
    REQUIRE(period(c1).expansion2 != period(c2).expansion2);
    // p = 1 is the choice consistent with the K series through O(eta^2)
    REQUIRE(std::abs(period(c1).exact - period(c1).expansion2) <
            std::abs(period(c2).exact - period(c2).expansion2));
  }
}
