#pragma once

// Run configuration (a single strict JSON document) and the emitters behind
// the command-line subcommands. Every table is emitted with shortest
// round-trip floats, so identical configs give byte-identical files and
// parse -> re-emit is the identity.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "laserspin/analysis.hpp"
#include "laserspin/closedform.hpp"
#include "laserspin/format.hpp"
#include "laserspin/model.hpp"
#include "laserspin/propagator.hpp"

namespace laserspin {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // physical
  double eta = 0.3;
  double epsilon = 0.0;
  double omega = 1.0;
  double beta_z = 0.0;
  double kappa = 1.0;
  ConfigOptions options{};
  IntegratorSpec integrator{};
  // simulate
  double sim_periods = 1.0;
  double sim_t_end = 0.0;  // absolute end time override when > 0
  int sim_samples = 256;
  SpinState initial_state{};
  // sweep
  std::vector<double> sweep_eta = {0.05, 0.1, 0.2, 0.3, 0.5};
  std::vector<double> sweep_epsilon = {0.0, 0.3, kCircularEpsilon, 1.0};
  std::vector<double> sweep_beta_z = {0.0, 0.2};
  bool sweep_measure = true;
  // phase
  std::vector<double> phase_eta = {0.0, 1e-6, 1e-4, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7};
  // reconcile
  double reconcile_tolerance = 1e-6;
  // validate
  std::uint64_t seed = 20260809;
  int trials = 10000;
  double tolerance_scale = 1.0;

  PhysicalConfig physical() const { return {eta, epsilon, omega, beta_z, kappa, options}; }

  SweepSpec sweep_spec() const {
    SweepSpec s;
    s.eta_grid = sweep_eta;
    s.epsilon_grid = sweep_epsilon;
    s.beta_z_grid = sweep_beta_z;
    s.kappa = kappa;
    s.omega = omega;
    s.integrator = integrator;
    s.measure = sweep_measure;
    s.options = options;
    return s;
  }
};

namespace detail {

using njson = nlohmann::json;

inline void reject_unknown(const njson& obj, const std::string& path,
                           std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown config key '" + path + "." + item.key() + "'");
  }
}

inline const njson* find(const njson& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double get_number(const njson& obj, const char* key, double fallback, const std::string& path) {
  const njson* j = find(obj, key);
  if (!j) return fallback;
  if (!j->is_number()) throw ConfigError("'" + path + "." + key + "' must be a number");
  return j->get<double>();
}

inline int get_int(const njson& obj, const char* key, int fallback, const std::string& path) {
  const njson* j = find(obj, key);
  if (!j) return fallback;
  if (!j->is_number_integer()) throw ConfigError("'" + path + "." + key + "' must be an integer");
  return j->get<int>();
}

inline bool get_bool(const njson& obj, const char* key, bool fallback, const std::string& path) {
  const njson* j = find(obj, key);
  if (!j) return fallback;
  if (!j->is_boolean()) throw ConfigError("'" + path + "." + key + "' must be a boolean");
  return j->get<bool>();
}

inline std::vector<double> get_grid(const njson& obj, const char* key,
                                    std::vector<double> fallback, const std::string& path) {
  const njson* j = find(obj, key);
  if (!j) return fallback;
  if (!j->is_array() || j->empty()) {
    throw ConfigError("'" + path + "." + key + "' must be a non-empty array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : *j) {
    if (!v.is_number()) throw ConfigError("'" + path + "." + key + "' must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

inline RunConfig parse_run_config(const std::string& text) {
  using detail::njson;
  njson root;
  try {
    root = njson::parse(text);
  } catch (const njson::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  detail::reject_unknown(root, "$", {"schema_version", "physical", "integrator", "simulate",
                                     "sweep", "phase", "reconcile", "validate"});

  const detail::njson* ver = detail::find(root, "schema_version");
  if (!ver || !ver->is_number_integer() || ver->get<int>() != 1) {
    throw ConfigError("config must declare \"schema_version\": 1");
  }

  RunConfig rc;

  if (const auto* phys = detail::find(root, "physical")) {
    if (!phys->is_object()) throw ConfigError("'$.physical' must be an object");
    detail::reject_unknown(*phys, "$.physical",
                           {"eta", "epsilon", "omega", "beta_z", "kappa",
                            "omega3_uses_omega_prime", "period_expansion_gamma_power"});
    rc.eta = detail::get_number(*phys, "eta", rc.eta, "$.physical");
    rc.epsilon = detail::get_number(*phys, "epsilon", rc.epsilon, "$.physical");
    rc.omega = detail::get_number(*phys, "omega", rc.omega, "$.physical");
    rc.beta_z = detail::get_number(*phys, "beta_z", rc.beta_z, "$.physical");
    rc.kappa = detail::get_number(*phys, "kappa", rc.kappa, "$.physical");
    rc.options.omega3_uses_omega_prime =
        detail::get_bool(*phys, "omega3_uses_omega_prime", false, "$.physical");
    rc.options.period_expansion_gamma_power =
        detail::get_int(*phys, "period_expansion_gamma_power", 1, "$.physical");
  }

  if (const auto* integ = detail::find(root, "integrator")) {
    if (!integ->is_object()) throw ConfigError("'$.integrator' must be an object");
    detail::reject_unknown(*integ, "$.integrator",
                           {"method", "steps_per_period", "step", "local_error_target"});
    if (const auto* m = detail::find(*integ, "method")) {
      if (!m->is_string()) throw ConfigError("'$.integrator.method' must be a string");
      const std::string name = m->get<std::string>();
      if (name == "midpoint") {
        rc.integrator.method = Method::midpoint;
      } else if (name == "magnus4") {
        rc.integrator.method = Method::magnus4;
      } else {
        throw ConfigError("'$.integrator.method' must be 'midpoint' or 'magnus4'");
      }
    }
    rc.integrator.steps_per_period =
        detail::get_int(*integ, "steps_per_period", rc.integrator.steps_per_period, "$.integrator");
    rc.integrator.step = detail::get_number(*integ, "step", 0.0, "$.integrator");
    rc.integrator.local_error_target =
        detail::get_number(*integ, "local_error_target", 0.0, "$.integrator");
    if (rc.integrator.steps_per_period < 1) {
      throw ConfigError("'$.integrator.steps_per_period' must be >= 1");
    }
  }

  if (const auto* sim = detail::find(root, "simulate")) {
    if (!sim->is_object()) throw ConfigError("'$.simulate' must be an object");
    detail::reject_unknown(*sim, "$.simulate", {"periods", "t_end", "samples", "initial_state"});
    rc.sim_periods = detail::get_number(*sim, "periods", rc.sim_periods, "$.simulate");
    rc.sim_t_end = detail::get_number(*sim, "t_end", rc.sim_t_end, "$.simulate");
    rc.sim_samples = detail::get_int(*sim, "samples", rc.sim_samples, "$.simulate");
    if (rc.sim_samples < 1) throw ConfigError("'$.simulate.samples' must be >= 1");
    if (rc.sim_periods <= 0.0 && rc.sim_t_end <= 0.0) {
      throw ConfigError("'$.simulate' needs a positive 'periods' or 't_end'");
    }
    if (const auto* st = detail::find(*sim, "initial_state")) {
      if (!st->is_object()) throw ConfigError("'$.simulate.initial_state' must be an object");
      detail::reject_unknown(*st, "$.simulate.initial_state",
                             {"re_up", "im_up", "re_down", "im_down"});
      const std::string p = "$.simulate.initial_state";
      const SpinState raw{cplx(detail::get_number(*st, "re_up", 1.0, p),
                               detail::get_number(*st, "im_up", 0.0, p)),
                          cplx(detail::get_number(*st, "re_down", 0.0, p),
                               detail::get_number(*st, "im_down", 0.0, p))};
      if (norm(raw) < 1e-12) throw ConfigError("'$.simulate.initial_state' must be nonzero");
      rc.initial_state = normalized(raw);
    }
  }

  if (const auto* sw = detail::find(root, "sweep")) {
    if (!sw->is_object()) throw ConfigError("'$.sweep' must be an object");
    detail::reject_unknown(*sw, "$.sweep", {"eta", "epsilon", "beta_z", "measure"});
    rc.sweep_eta = detail::get_grid(*sw, "eta", rc.sweep_eta, "$.sweep");
    rc.sweep_epsilon = detail::get_grid(*sw, "epsilon", rc.sweep_epsilon, "$.sweep");
    rc.sweep_beta_z = detail::get_grid(*sw, "beta_z", rc.sweep_beta_z, "$.sweep");
    rc.sweep_measure = detail::get_bool(*sw, "measure", rc.sweep_measure, "$.sweep");
  }

  if (const auto* ph = detail::find(root, "phase")) {
    if (!ph->is_object()) throw ConfigError("'$.phase' must be an object");
    detail::reject_unknown(*ph, "$.phase", {"eta"});
    rc.phase_eta = detail::get_grid(*ph, "eta", rc.phase_eta, "$.phase");
  }

  if (const auto* re = detail::find(root, "reconcile")) {
    if (!re->is_object()) throw ConfigError("'$.reconcile' must be an object");
    detail::reject_unknown(*re, "$.reconcile", {"match_tolerance"});
    rc.reconcile_tolerance =
        detail::get_number(*re, "match_tolerance", rc.reconcile_tolerance, "$.reconcile");
    if (rc.reconcile_tolerance <= 0.0) throw ConfigError("'$.reconcile.match_tolerance' must be > 0");
  }

  if (const auto* va = detail::find(root, "validate")) {
    if (!va->is_object()) throw ConfigError("'$.validate' must be an object");
    detail::reject_unknown(*va, "$.validate", {"trials", "seed", "tolerance_scale"});
    rc.trials = detail::get_int(*va, "trials", rc.trials, "$.validate");
    if (rc.trials < 1) throw ConfigError("'$.validate.trials' must be >= 1");
    if (const auto* s = detail::find(*va, "seed")) {
      if (!s->is_number_unsigned() && !s->is_number_integer()) {
        throw ConfigError("'$.validate.seed' must be an integer");
      }
      rc.seed = s->get<std::uint64_t>();
    }
    rc.tolerance_scale = detail::get_number(*va, "tolerance_scale", 1.0, "$.validate");
    if (rc.tolerance_scale <= 0.0) throw ConfigError("'$.validate.tolerance_scale' must be > 0");
  }

  // surface invalid physics as a config error with the library's message
  try {
    (void)rc.physical();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return rc;
}

// ---------------------------------------------------------------------------
// emitters

inline CsvTable simulate_table(const RunConfig& rc) {
  const PhysicalConfig c = rc.physical();
  const double t_end = rc.sim_t_end > 0.0 ? rc.sim_t_end : rc.sim_periods * fundamental_period(c);
  std::vector<double> grid(rc.sim_samples + 1);
  for (int i = 0; i <= rc.sim_samples; ++i) grid[i] = t_end * i / rc.sim_samples;
  grid[0] = 0.0;
  const auto traj = sample_trajectory(rc.initial_state, c, grid, rc.integrator);

  CsvTable t;
  t.header = {"t", "re_up", "im_up", "re_down", "im_down", "bx", "by", "bz",
              "omega1", "omega2", "omega3"};
  t.rows.reserve(traj.size());
  for (const auto& p : traj) {
    const LarmorVector v = larmor(c, p.t);
    t.rows.push_back({p.t, p.state.up.real(), p.state.up.imag(), p.state.down.real(),
                      p.state.down.imag(), p.bloch[0], p.bloch[1], p.bloch[2], v.omega1, v.omega2,
                      v.omega3});
  }
  return t;
}

namespace detail {

inline std::vector<double> sweep_row(const SweepRecord& r, bool with_phase) {
  const double rel = std::abs(r.period_measured - r.period_exact) / r.period_exact;
  std::vector<double> row = {r.eta,           r.epsilon,           r.beta_z,
                             r.period_exact,  r.period_expansion,  r.period_measured,
                             rel};
  if (with_phase) {
    row.push_back(r.quantum_phase);
    row.push_back(r.quantum_phase - M_PI);
  }
  return row;
}

}  // namespace detail

inline CsvTable period_table(const RunConfig& rc) {
  SweepSpec spec = rc.sweep_spec();
  spec.eta_grid = {rc.eta};
  spec.epsilon_grid = {rc.epsilon};
  spec.beta_z_grid = {rc.beta_z};
  const auto records = frequency_shift_curve(spec);
  CsvTable t;
  t.header = {"eta", "epsilon", "beta_z", "period_exact", "period_expansion", "period_measured",
              "rel_dev"};
  for (const auto& r : records) t.rows.push_back(detail::sweep_row(r, false));
  return t;
}

inline CsvTable sweep_table(const RunConfig& rc) {
  const auto records = frequency_shift_curve(rc.sweep_spec());
  CsvTable t;
  t.header = {"eta", "epsilon", "beta_z", "period_exact", "period_expansion", "period_measured",
              "rel_dev", "phase", "phase_minus_pi"};
  for (const auto& r : records) t.rows.push_back(detail::sweep_row(r, true));
  return t;
}

inline CsvTable phase_table(const RunConfig& rc) {
  SweepSpec spec = rc.sweep_spec();
  spec.eta_grid = rc.phase_eta;
  spec.beta_z_grid = {rc.beta_z};
  const auto pts = phase_curve(spec);
  CsvTable t;
  t.header = {"eta", "phase", "phase_minus_pi"};
  for (const auto& p : pts) t.rows.push_back({p.eta, p.phase, p.deviation_from_pi});
  return t;
}

namespace detail {

inline njson complex_json(const cplx& z) { return njson::array({z.real(), z.imag()}); }

inline njson matrix_json(const Mat2c& m) {
  return njson::array({njson::array({complex_json(m.m00), complex_json(m.m01)}),
                       njson::array({complex_json(m.m10), complex_json(m.m11)})});
}

}  // namespace detail

inline detail::njson monodromy_report(const RunConfig& rc) {
  const PhysicalConfig c = rc.physical();
  const CircularSolution s = circular_params(c);
  const Monodromy m = monodromy(c);
  detail::njson out;
  out["schema_version"] = 1;
  out["eta"] = c.eta();
  out["epsilon"] = c.epsilon();
  out["omega"] = c.omega();
  out["beta_z"] = c.beta_z();
  out["kappa"] = c.kappa();
  out["delta"] = s.delta;
  out["beta"] = s.beta;
  out["rabi"] = s.rabi;
  out["phase"] = m.phase;
  out["phase_free_field"] = M_PI;
  out["phase_minus_free_field"] = m.phase - M_PI;
  out["matrix"] = detail::matrix_json(m.matrix);
  out["diagonal"] = detail::matrix_json(m.diagonal);
  return out;
}

inline detail::njson reconcile_report(const ConventionReport& r) {
  detail::njson out;
  out["schema_version"] = 1;
  out["match_tolerance"] = r.match_tolerance;
  out["matched"] = r.matched;
  out["degenerate"] = r.degenerate;
  out["best"] = r.best.id();
  out["best_deviation"] = r.best_deviation;
  detail::njson cands = detail::njson::array();
  for (const auto& cand : r.ranked) {
    detail::njson c;
    c["id"] = cand.convention.id();
    c["sign_omega1"] = cand.convention.sign_omega1;
    c["sign_omega2"] = cand.convention.sign_omega2;
    c["sign_generator"] = cand.convention.sign_generator;
    c["rabi_factor"] = cand.convention.rabi_factor;
    c["deviation"] = cand.deviation;
    cands.push_back(c);
  }
  out["candidates"] = cands;
  return out;
}

inline std::string reconcile_csv(const ConventionReport& r) {
  std::string out = "rank,sign_omega1,sign_omega2,sign_generator,rabi_factor,deviation\n";
  int rank = 1;
  for (const auto& cand : r.ranked) {
    out += std::to_string(rank++) + ',' + std::to_string(cand.convention.sign_omega1) + ',' +
           std::to_string(cand.convention.sign_omega2) + ',' +
           std::to_string(cand.convention.sign_generator) + ',' +
           format_double(cand.convention.rabi_factor) + ',' + format_double(cand.deviation) + '\n';
  }
  return out;
}

// csv table -> json mirror used by --format json
inline detail::njson table_json(const CsvTable& t) {
  detail::njson out;
  out["schema_version"] = 1;
  out["header"] = t.header;
  detail::njson rows = detail::njson::array();
  for (const auto& r : t.rows) rows.push_back(r);
  out["rows"] = rows;
  return out;
}

}  // namespace laserspin
