#pragma once

// The invariant suite behind the `validate` subcommand: elliptic identities,
// propagator unitarity, closed-form reproduction, period law, free-field
// limits and the reconciliation self-test. Each check records the worst
// observed defect against its bound; `tolerance_scale` multiplies every
// bound, which is how the negative-path test forces a named failure.

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "laserspin/analysis.hpp"
#include "laserspin/cli.hpp"
#include "laserspin/closedform.hpp"
#include "laserspin/format.hpp"
#include "laserspin/model.hpp"
#include "laserspin/propagator.hpp"
#include "laserspin/random.hpp"

namespace laserspin {

struct CheckOptions {
  std::uint64_t seed = 20260809;
  int trials = 10000;
  double tolerance_scale = 1.0;
  IntegratorSpec integrator{};
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string detail;
};

namespace detail {

// K(m) Maclaurin series, the cross-oracle for the AGM path
inline double k_series(double m) {
  double coeff = 1.0, power = 1.0, sum = 1.0;
  for (int n = 1; n < 4000; ++n) {
    const double r = (2.0 * n - 1.0) / (2.0 * n);
    coeff *= r * r;
    power *= m;
    const double term = coeff * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return 0.5 * M_PI * sum;
}

class CheckRunner {
 public:
  explicit CheckRunner(double scale) : scale_(scale) {}

  // body returns the worst observed defect; pass iff observed <= bound*scale
  void run(const std::string& name, double bound, const std::function<double()>& body) {
    CheckResult r;
    r.name = name;
    r.bound = bound * scale_;
    try {
      r.observed = body();
      r.pass = r.observed <= r.bound;
      r.detail = "observed " + format_double(r.observed) + ", bound " + format_double(r.bound);
    } catch (const std::exception& e) {
      r.pass = false;
      r.observed = std::nan("");
      r.detail = std::string("exception: ") + e.what();
    }
    results_.push_back(r);
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  double scale_;
  std::vector<CheckResult> results_;
};

}  // namespace detail

inline std::vector<CheckResult> run_validation_suite(const CheckOptions& opts) {
  detail::CheckRunner runner(opts.tolerance_scale);
  const IntegratorSpec integ = opts.integrator;

  runner.run("elliptic.identities", 1e-12, [&] {
    Rng rng(opts.seed);
    double worst = 0.0;
    for (int i = 0; i < opts.trials; ++i) {
      const double u = rng.uniform(-50.0, 50.0);
      const double m = rng.uniform(-0.99, 0.99);
      const auto j = elliptic::jacobi(u, m);
      worst = std::max(worst, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
      worst = std::max(worst, std::abs(j.dn * j.dn + m * j.sn * j.sn - 1.0));
    }
    return worst;
  });

  runner.run("elliptic.k_zero", 1e-15,
             [&] { return std::abs(elliptic::complete_k(0.0) - M_PI / 2.0); });

  runner.run("elliptic.k_half_series", 1e-13,
             [&] { return std::abs(elliptic::complete_k(0.5) - detail::k_series(0.5)); });

  runner.run("elliptic.periodicity", 1e-10, [&] {
    Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
    double worst = 0.0;
    for (int i = 0; i < std::min(opts.trials, 500); ++i) {
      const double m = rng.uniform(-0.99, 0.99);
      const double k = elliptic::complete_k(m);
      const double u = rng.uniform(-100.0 * k, 100.0 * k);
      const auto a = elliptic::jacobi(u, m);
      const auto b = elliptic::jacobi(u + 4.0 * k, m);
      const auto c = elliptic::jacobi(u + 2.0 * k, m);
      worst = std::max(worst, std::abs(b.sn - a.sn));
      worst = std::max(worst, std::abs(b.cn - a.cn));
      worst = std::max(worst, std::abs(c.dn - a.dn));
    }
    return worst;
  });

  runner.run("propagator.unitarity_100_periods", 1e-10, [&] {
    const PhysicalConfig c(0.5, 0.0, 1.0, 0.0, 1.0);
    const auto u = evolve_unitary(c, 0.0, 100.0 * fundamental_period(c), integ);
    return std::max(unitarity_defect(u), std::abs(std::abs(det(u)) - 1.0));
  });

  runner.run("linear.periodicity", 1e-8, [&] {
    double worst = 0.0;
    for (double eta : {0.1, 0.3, 0.5}) {
      for (double bz : {0.0, 0.2}) {
        const PhysicalConfig c(eta, 0.0, 1.0, bz, 1.0);
        const auto u = evolve_unitary(c, 0.0, fundamental_period(c), integ);
        worst = std::max(worst, frobenius_norm(u - Mat2c::identity()));
      }
    }
    return worst;
  });

  runner.run("linear.closedform_vs_numeric", 1e-9, [&] {
    double worst = 0.0;
    for (double eta : {0.1, 0.3, 0.5}) {
      for (double bz : {0.0, 0.2}) {
        const PhysicalConfig c(eta, 0.0, 1.0, bz, 1.0);
        const double T = fundamental_period(c);
        Mat2c u = Mat2c::identity();
        for (int k = 1; k <= 100; ++k) {
          u = evolve_unitary(c, (k - 1) * T / 100.0, k * T / 100.0, integ) * u;
          worst = std::max(worst, frobenius_norm(linear_propagator(c, k * T / 100.0) - u));
        }
      }
    }
    return worst;
  });

  runner.run("period.measured_matches_exact", 1e-8, [&] {
    double worst = 0.0;
    for (double eta : {0.1, 0.3, 0.5}) {
      for (double bz : {0.0, 0.2}) {
        const PhysicalConfig c(eta, 0.0, 1.0, bz, 1.0);
        const auto m = measure_period(c, integ);
        if (m.status != RecurrenceStatus::found) return 1.0;
        const double expected = period(c).exact;
        worst = std::max(worst, std::abs(m.period - expected) / expected);
      }
    }
    return worst;
  });

  runner.run("period.growth_slope", 0.05, [&] {
    std::vector<std::pair<double, double>> pts;
    for (double eta : {0.05, 0.1, 0.2}) {
      const PhysicalConfig c(eta, 0.0, 1.0, 0.0, 1.0);
      const auto m = measure_period(c, integ);
      if (m.status != RecurrenceStatus::found) return 1.0;
      pts.push_back({eta, m.period / (2.0 * M_PI / c.omega_prime()) - 1.0});
    }
    return std::abs(loglog_slope(pts) - 2.0);
  });

  runner.run("period.circular_exact", 0.0, [&] {
    double worst = 0.0;
    for (double eta : {0.1, 0.3, 0.5, 0.7}) {
      const PhysicalConfig c(eta, kCircularEpsilon, 1.0, 0.2, 1.0);
      worst = std::max(worst, std::abs(period(c).exact - 2.0 * M_PI / c.omega_prime()));
    }
    return worst;
  });

  {
    // shared random circular ensemble for the closed-form structure checks
    auto random_circular = [&](Rng& rng) {
      return PhysicalConfig(rng.uniform(0.02, 0.69), kCircularEpsilon, rng.uniform(0.5, 2.0),
                            rng.uniform(-0.3, 0.4), rng.uniform(0.3, 2.5));
    };
    const int n_configs = std::max(1, std::min(opts.trials / 10, 1000));

    runner.run("circular.unitarity", 1e-12, [&] {
      Rng rng(opts.seed ^ 0xc2b2ae3d27d4eb4full);
      double worst = 0.0;
      for (int i = 0; i < n_configs; ++i) {
        const auto c = random_circular(rng);
        const double t = rng.uniform(0.0, 20.0);
        worst = std::max(worst, unitarity_defect(circular_propagator(c, t)));
        worst = std::max(worst, unitarity_defect(monodromy(c).matrix));
      }
      return worst;
    });

    runner.run("circular.floquet_relation", 1e-12, [&] {
      Rng rng(opts.seed ^ 0x165667b19e3779f9ull);
      double worst = 0.0;
      for (int i = 0; i < n_configs; ++i) {
        const auto c = random_circular(rng);
        const double T = 2.0 * M_PI / c.omega_prime();
        const auto m = monodromy(c);
        const double t = rng.uniform(0.0, 3.0 * T);
        const auto lhs = circular_propagator(c, t + T);
        const auto rhs = std::exp(cplx(0, M_PI)) * (circular_propagator(c, t) * m.matrix);
        worst = std::max(worst, frobenius_norm(lhs - rhs));
      }
      return worst;
    });

    runner.run("circular.monodromy_spectrum", 1e-12, [&] {
      Rng rng(opts.seed ^ 0x27d4eb2f165667c5ull);
      double worst = 0.0;
      for (int i = 0; i < n_configs; ++i) {
        const auto c = random_circular(rng);
        const auto m = monodromy(c);
        const auto [l1, l2] = eigenvalues(m.matrix);
        const cplx e1 = std::exp(cplx(0, m.phase));
        const cplx e2 = std::exp(cplx(0, -m.phase));
        worst = std::max(worst, std::min(std::abs(l1 - e1) + std::abs(l2 - e2),
                                         std::abs(l1 - e2) + std::abs(l2 - e1)));
      }
      return worst;
    });

    runner.run("circular.tanbeta_delta", 1e-12, [&] {
      Rng rng(opts.seed ^ 0x85ebca77c2b2ae63ull);
      double worst = 0.0;
      for (int i = 0; i < n_configs; ++i) {
        const auto s = circular_params(random_circular(rng));
        worst = std::max(worst, std::abs(std::tan(s.beta) - s.delta) / std::hypot(1.0, s.delta));
      }
      return worst;
    });
  }

  runner.run("circular.free_field_phase", 1e-6, [&] {
    const PhysicalConfig c(1e-8, kCircularEpsilon, 1.0, 0.0, 1.0);
    return std::abs(quantum_phase(c) - M_PI);
  });

  runner.run("circular.free_field_monodromy", 1e-4, [&] {
    const PhysicalConfig c(1e-8, kCircularEpsilon, 1.0, 0.0, 1.0);
    const auto m = monodromy(c);
    return frobenius_norm(std::exp(cplx(0, M_PI)) * m.matrix - Mat2c::identity());
  });

  runner.run("reconcile.selftest", 1e-10, [&] {
    const PhysicalConfig c(0.3, kCircularEpsilon, 1.0, 0.0, 1.0);
    const auto report = reconcile_conventions(c, integ, 1e-6, circular_rotating_frame_reference);
    const auto& best = report.best;
    const bool exact = best.sign_omega1 == 1 && best.sign_omega2 == 1 &&
                       best.sign_generator == 1 && best.rabi_factor == 1.0;
    if (!exact || report.degenerate) return 1.0;
    return report.best_deviation;
  });

  runner.run("reconcile.determinism", 0.0, [&] {
    const PhysicalConfig c(0.3, kCircularEpsilon, 1.0, 0.0, 1.0);
    const auto a = reconcile_report(reconcile_conventions(c, integ)).dump();
    const auto b = reconcile_report(reconcile_conventions(c, integ)).dump();
    return a == b ? 0.0 : 1.0;
  });

  runner.run("sweep.deterministic_roundtrip", 0.0, [&] {
    RunConfig rc;
    rc.sweep_eta = {0.0, 0.1, 0.3};
    rc.sweep_epsilon = {0.0, kCircularEpsilon};
    rc.sweep_beta_z = {0.0};
    rc.integrator = integ;
    const std::string a = emit_csv(sweep_table(rc));
    const std::string b = emit_csv(sweep_table(rc));
    if (a != b) return 1.0;
    if (emit_csv(parse_csv(a)) != a) return 2.0;
    return 0.0;
  });

  return runner.take();
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

inline detail::njson validation_json(const std::vector<CheckResult>& results) {
  detail::njson out;
  out["schema_version"] = 1;
  out["all_pass"] = all_passed(results);
  detail::njson checks = detail::njson::array();
  for (const auto& r : results) {
    detail::njson c;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["observed"] = r.observed;
    c["bound"] = r.bound;
    c["detail"] = r.detail;
    checks.push_back(c);
  }
  out["checks"] = checks;
  return out;
}

inline std::string validation_text(const std::vector<CheckResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += (r.pass ? "[PASS] " : "[FAIL] ") + r.name + ": " + r.detail + "\n";
  }
  out += all_passed(results) ? "all checks passed\n" : "VALIDATION FAILED\n";
  return out;
}

}  // namespace laserspin
