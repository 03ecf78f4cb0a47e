#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "laserspin/analysis.hpp"
#include "laserspin/random.hpp"

using namespace laserspin;

namespace {

PhysicalConfig circular_config(double eta, double kappa = 1.0, double beta_z = 0.0) {
  return PhysicalConfig(eta, kCircularEpsilon, 1.0, beta_z, kappa);
}

bool identity_convention(const Convention& c) {
  return c.sign_omega1 == 1 && c.sign_omega2 == 1 && c.sign_generator == 1 && c.rabi_factor == 1.0;
}

}  // namespace

TEST_CASE("measure_period flags the free field as trivial") {
  const auto m = measure_period(PhysicalConfig(0.0, 0.0, 1.0, 0.0, 1.0));
  REQUIRE(m.status == RecurrenceStatus::trivial_identity);
  REQUIRE(m.residual == 0.0);
}

TEST_CASE("measured recurrence reproduces the elliptic period at linear polarization") {
  for (double eta : {0.1, 0.3, 0.5}) {
    for (double beta_z : {0.0, 0.2}) {
      const PhysicalConfig c(eta, 0.0, 1.0, beta_z, 1.0);
      const auto m = measure_period(c);
      const double expected = fundamental_period(c);
      CAPTURE(eta, beta_z, m.period, expected);
      REQUIRE(m.status == RecurrenceStatus::found);
      REQUIRE(std::abs(m.period - expected) / expected <= 1e-8);
    }
  }
}

TEST_CASE("epsilon = 1 recurrence works through the negative parameter") {
  // sn vanishes at 2K already, so the first identity return is half the
  // 4K generator period
  const PhysicalConfig c(0.4, 1.0, 1.0, 0.1, 1.0);
  const auto m = measure_period(c);
  const double expected = 0.5 * fundamental_period(c);
  REQUIRE(m.status == RecurrenceStatus::found);
  REQUIRE(std::abs(m.period - expected) / expected <= 1e-8);
}

TEST_CASE("circular recurrence is the bare drive cycle via state fidelity") {
  for (double eta : {0.1, 0.3, 0.5}) {
    const auto c = circular_config(eta);
    const auto m = measure_period(c);
    const double expected = 2.0 * M_PI / c.omega_prime();
    CAPTURE(eta, m.period);
    REQUIRE(m.status == RecurrenceStatus::found);
    REQUIRE(std::abs(m.period - expected) / expected <= 1e-8);
  }
}

TEST_CASE("fidelity measurement copes with strong coupling") {
  const double eta = 0.5;
  const auto c = circular_config(eta, 1.0 / (eta * eta * eta));
  const auto m = measure_period(c);
  const double expected = 2.0 * M_PI / c.omega_prime();
  REQUIRE(m.status == RecurrenceStatus::found);
  REQUIRE(std::abs(m.period - expected) / expected <= 1e-8);
}

TEST_CASE("general polarization may simply not recur at the operator level") {
  const PhysicalConfig c(0.45, 0.4, 1.0, 0.0, 1.0);
  const auto m = measure_period(c);
  if (m.status == RecurrenceStatus::found) {
    REQUIRE(m.period > 0.0);
  } else {
    REQUIRE(m.status == RecurrenceStatus::no_recurrence);
    REQUIRE(m.residual > 1e-6);
  }
}

TEST_CASE("frequency shift sweep") {
  SweepSpec spec;
  spec.eta_grid = {0.0, 0.05, 0.1, 0.2};
  spec.epsilon_grid = {0.0, kCircularEpsilon};
  spec.beta_z_grid = {0.0};
  const auto records = frequency_shift_curve(spec);
  REQUIRE(records.size() == 8);

  SECTION("eta = 0 rows have period ratio exactly 1") {
    for (const auto& r : records) {
      if (r.eta == 0.0) {
        REQUIRE(r.error.empty());
        REQUIRE(r.period_measured == r.period_exact);
      }
    }
  }
  SECTION("circular rows keep the bare cycle for every eta") {
    for (const auto& r : records) {
      if (r.epsilon == kCircularEpsilon) {
        REQUIRE(r.error.empty());
        REQUIRE(r.period_exact == 2.0 * M_PI);
        REQUIRE(std::abs(r.period_measured - r.period_exact) <= 1e-7);
      }
    }
  }
  SECTION("period growth scales as eta^2 at linear polarization") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records) {
      if (r.epsilon == 0.0 && r.eta > 0.0) {
        const double t0 = 2.0 * M_PI;  // omega' = 1 here
        pts.push_back({r.eta, r.period_measured / t0 - 1.0});
      }
    }
    REQUIRE(pts.size() == 3);
    const double slope = loglog_slope(pts);
    CAPTURE(slope);
    REQUIRE(std::abs(slope - 2.0) <= 0.05);
  }
  SECTION("closed-form deviation column is small where a closed form exists") {
    for (const auto& r : records) {
      if (r.eta > 0.0) {
        CAPTURE(r.eta, r.epsilon);
        REQUIRE(r.closedform_deviation == r.closedform_deviation);  // not NaN
        if (r.epsilon == 0.0) REQUIRE(r.closedform_deviation <= 1e-9);
      }
    }
  }
}

TEST_CASE("sweep records per-point failures without aborting") {
  SweepSpec spec;
  spec.eta_grid = {0.3, 0.6};
  spec.epsilon_grid = {0.0};
  spec.beta_z_grid = {0.9};  // gamma_z = 10: mu^2 = eta^2 * 10 >= 1 at eta = 0.6
  const auto records = frequency_shift_curve(spec);
  REQUIRE(records.size() == 2);
  REQUIRE(records[0].error.empty());
  REQUIRE_FALSE(records[1].error.empty());
  REQUIRE(std::isnan(records[1].period_exact));
}

TEST_CASE("phase curve") {
  SweepSpec spec;
  spec.eta_grid = {0.0, 1e-6, 1e-4, 0.1, 0.3};
  const auto pts = phase_curve(spec);
  REQUIRE(pts.size() == 5);
  REQUIRE(pts[0].phase == M_PI);
  REQUIRE(pts[0].deviation_from_pi == 0.0);
  // deviation is continuous and shrinks toward eta = 0
  REQUIRE(std::abs(pts[1].deviation_from_pi) < std::abs(pts[2].deviation_from_pi));
  REQUIRE(std::abs(pts[2].deviation_from_pi) < std::abs(pts[4].deviation_from_pi));
  // pointwise equality with the monodromy phase
  for (const auto& p : pts) {
    if (p.eta == 0.0) continue;
    REQUIRE(p.phase == monodromy(circular_config(p.eta)).phase);
  }
}

TEST_CASE("reconciliation self-test identifies the exact convention") {
  const auto c = circular_config(0.3);
  const auto report = reconcile_conventions(c, {}, 1e-6, circular_rotating_frame_reference);
  REQUIRE(report.ranked.size() == 24);
  CAPTURE(report.best.id(), report.best_deviation);
  REQUIRE(identity_convention(report.best));
  REQUIRE(report.best_deviation <= 1e-10);
  REQUIRE(report.matched);
  REQUIRE_FALSE(report.degenerate);
  // clear gap to the runner-up
  REQUIRE(report.ranked[1].deviation > 1e-3);
}

TEST_CASE("reconciliation ground truth really solves the evolution") {
  const auto c = circular_config(0.25, 1.3, 0.1);
  IntegratorSpec fine;
  fine.steps_per_period = 2048;
  for (double t : {0.7, 3.1, 9.4}) {
    const auto exact = circular_rotating_frame_reference(c, t, 1.0);
    const auto num = evolve_unitary(c, 0.0, t, fine);
    CAPTURE(t);
    REQUIRE(frobenius_norm(exact - num) <= 1e-11);
  }
}

TEST_CASE("free-field fixture degenerates the convention scan") {
  const auto c = circular_config(0.0);
  const auto report = reconcile_conventions(c, {}, 1e-6, circular_rotating_frame_reference);
  REQUIRE(report.matched);
  REQUIRE(report.degenerate);
  REQUIRE(report.best_deviation <= 1e-12);
  REQUIRE(identity_convention(report.best));
}

TEST_CASE("reconciliation against the euler-form closed form emits a full report") {
  const auto c = circular_config(0.3);
  const auto report = reconcile_conventions(c);
  REQUIRE(report.ranked.size() == 24);
  // deviations are filled in and sorted
  for (std::size_t i = 1; i < report.ranked.size(); ++i) {
    REQUIRE(report.ranked[i - 1].deviation <= report.ranked[i].deviation);
  }
  // the verdict itself is an empirical output, not asserted here
}

TEST_CASE("reconciliation is deterministic") {
  const auto c = circular_config(0.3);
  const auto a = reconcile_conventions(c);
  const auto b = reconcile_conventions(c);
  REQUIRE(a.ranked.size() == b.ranked.size());
  for (std::size_t i = 0; i < a.ranked.size(); ++i) {
    REQUIRE(a.ranked[i].convention.id() == b.ranked[i].convention.id());
    REQUIRE(a.ranked[i].deviation == b.ranked[i].deviation);
  }
  REQUIRE(a.best_deviation == b.best_deviation);
}

TEST_CASE("reconciliation requires circular polarization for the default reference") {
  REQUIRE_THROWS_AS(reconcile_conventions(PhysicalConfig(0.3, 0.0, 1.0, 0.0, 1.0)),
                    std::invalid_argument);
}
