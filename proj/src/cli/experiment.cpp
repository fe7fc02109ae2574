#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "bosonlab/cli.hpp"
#include "bosonlab/dynamics.hpp"
#include "bosonlab/entanglement.hpp"
#include "bosonlab/errors.hpp"
#include "bosonlab/evolution.hpp"
#include "bosonlab/jj_model.hpp"
#include "bosonlab/parallel.hpp"
#include "bosonlab/polarization.hpp"
#include "bosonlab/random.hpp"

namespace bosonlab::cli {
namespace {

using json = nlohmann::ordered_json;

double num(const json& params, const char* key) { return params.at(key).get<double>(); }
std::int64_t whole(const json& params, const char* key) { return params.at(key).get<std::int64_t>(); }

std::int64_t positive(const json& params, const char* key) {
  const auto v = whole(params, key);
  if (v < 1) throw DomainError(std::string(key) + " must be >= 1");
  return v;
}

json effective_config(const ExperimentConfig& cfg) {
  json c = json::object();
  c["subcommand"] = cfg.subcommand;
  c["seed"] = cfg.seed;
  c["format"] = cfg.format == ReportFormat::csv ? "csv" : "json";
  for (const auto& [k, v] : cfg.params.items()) c[k] = v;
  return c;
}

std::vector<Cell> bound_row(std::uint64_t seed, int cutoff, const BoundReport& r) {
  return {seed, std::int64_t{cutoff}, r.moments.n_a, r.moments.n_b, r.moments.n_a_n_b,
          r.negativity, r.bound_exact, r.bound_approx, r.satisfied};
}

const std::vector<std::string> kBoundColumns = {"seed",       "cutoff",     "n_a",          "n_b",      "n_a_n_b",
                                                "negativity", "bound_exact", "bound_approx", "satisfied"};

struct BoundSample {
  std::uint64_t seed = 0;
  BoundReport report;
};

void run_bound_check(ExperimentConfig& cfg, Table& table, bool& violated) {
  const auto samples = whole(cfg.params, "samples");
  const auto mixtures = whole(cfg.params, "mixtures");
  const auto cutoff = whole(cfg.params, "cutoff");
  if (samples < 0 || mixtures < 0) throw DomainError("samples and mixtures must be >= 0");
  if (cutoff < 1 || cutoff > 3) throw DomainError("cutoff must be 1, 2 or 3");
  const FockSpace space = two_beam_space(static_cast<int>(cutoff));
  const std::size_t total = static_cast<std::size_t>(samples + mixtures);

  std::vector<BoundSample> out(total);
  parallel_for(total, cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = task_seed(cfg.seed, i);
    Rng rng(seed);
    if (i < static_cast<std::size_t>(samples)) {
      out[i] = {seed, check_bound(haar_random_state(space, rng))};
    } else {
      // Redraw until both components have <n_a n_b> > 0; at cutoff >= 1 this
      // fails only on a measure-zero set.
      const auto x = gamma_from_state(haar_random_state(space, rng));
      const auto y = gamma_from_state(haar_random_state(space, rng));
      const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      out[i] = {seed, check_bound(mix(x, y, w))};
    }
  });
  table.columns = kBoundColumns;
  for (const auto& s : out) {
    table.add_row(bound_row(s.seed, static_cast<int>(cutoff), s.report));
    if (!s.report.satisfied || !s.report.intermediate_satisfied) violated = true;
  }
}

void run_neg_sweep(ExperimentConfig& cfg, Table& table, bool& violated) {
  const auto k_min = positive(cfg.params, "k_min");
  const auto k_max = whole(cfg.params, "k_max");
  const auto samples = positive(cfg.params, "samples");
  if (k_max < k_min) throw DomainError("k_max must be >= k_min");
  if (k_max > 40) throw DomainError("k_max must be <= 40");
  const std::size_t ks = static_cast<std::size_t>(k_max - k_min + 1);
  const std::size_t per_k = static_cast<std::size_t>(samples);

  std::vector<BoundSample> out(ks * per_k);
  parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
    const int k = static_cast<int>(k_min) + static_cast<int>(i / per_k);
    const std::uint64_t seed = task_seed(cfg.seed, i);
    Rng rng(seed);
    out[i] = {seed, check_bound(random_beam_number_state(k, rng))};
  });
  table.columns = kBoundColumns;
  for (std::size_t j = 0; j < ks; ++j) {
    const BoundSample* best = &out[j * per_k];
    for (std::size_t s = 0; s < per_k; ++s) {
      const BoundSample& cand = out[j * per_k + s];
      if (!cand.report.satisfied || !cand.report.intermediate_satisfied) violated = true;
      if (cand.report.negativity > best->report.negativity) best = &cand;
    }
    table.add_row(bound_row(best->seed, static_cast<int>(k_min + static_cast<std::int64_t>(j)), best->report));
  }
}

cplx parse_complex(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("complex entries must be a number or [re, im], got " + v.dump());
}

Matrix2c parse_matrix2(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_array() || v[0].size() != 2 || !v[1].is_array() ||
      v[1].size() != 2)
    throw ConfigError("expected a 2x2 matrix [[a, b], [c, d]], got " + v.dump());
  Matrix2c m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = parse_complex(v[r][c]);
  return m;
}

json stokes_json(const StokesVector& s) { return json{{"I", s.intensity}, {"M", s.m}, {"C", s.c}, {"S", s.s}}; }

json run_tomography(ExperimentConfig& cfg, Table& table) {
  const json& prm = cfg.params;
  const bool has_omega = prm.contains("omega") && !prm["omega"].is_null();
  const bool has_stokes = prm.contains("stokes") && !prm["stokes"].is_null();
  if (has_omega == has_stokes) throw ConfigError("tomography needs exactly one of omega or stokes");
  std::optional<CorrelationMatrix2> omega;
  if (has_omega) {
    omega.emplace(parse_matrix2(prm["omega"]));
  } else {
    const auto& s = prm["stokes"];
    if (s.size() != 4) throw ConfigError("stokes must have four entries I, M, C, S");
    omega.emplace(to_omega({s[0].get<double>(), s[1].get<double>(), s[2].get<double>(), s[3].get<double>()}));
  }
  const json& maps = prm["device_maps"];
  if (!maps.is_array()) throw ConfigError("device_maps must be a list");
  for (const auto& map : maps) {
    if (!map.is_array() || map.empty()) throw ConfigError("each device map must be a non-empty list of Kraus matrices");
    std::vector<Matrix2c> kraus;
    for (const auto& k : map) kraus.push_back(parse_matrix2(k));
    omega.emplace(apply_device_map(*omega, DeviceMap(std::move(kraus))));
  }
  const auto shots = positive(prm, "shots");
  const TomographyResult res =
      tomography_simulate(*omega, static_cast<std::size_t>(shots), cfg.seed, prm["noise"].get<bool>());
  const StokesVector truth = to_stokes(*omega);

  table.columns = {"component", "true_value", "estimate", "standard_error"};
  const std::array<const char*, 4> names = {"I", "M", "C", "S"};
  const std::array<double, 4> t = {truth.intensity, truth.m, truth.c, truth.s};
  const std::array<double, 4> e = {res.estimate.intensity, res.estimate.m, res.estimate.c, res.estimate.s};
  const std::array<double, 4> se = {res.standard_errors.intensity, res.standard_errors.m, res.standard_errors.c,
                                    res.standard_errors.s};
  for (int i = 0; i < 4; ++i) table.add_row({std::string(names[i]), t[i], e[i], se[i]});
  return json{{"estimate", stokes_json(res.estimate)},
              {"standard_errors", stokes_json(res.standard_errors)},
              {"true_values", stokes_json(truth)}};
}

JJParams junction(ExperimentConfig& cfg, std::ostream& diag) {
  json& prm = cfg.params;
  JJParams p;
  p.e_c = num(prm, "e_c");
  p.lam = num(prm, "lam");
  const auto n_total = whole(prm, "n_total");
  if (n_total < 1 || n_total > 1'000'000) throw DomainError("n_total must be in [1, 1e6]");
  p.n_total = static_cast<int>(n_total);
  if (!prm.contains("n_bar1")) prm["n_bar1"] = 0.5 * p.n_total;
  p.n_bar1 = num(prm, "n_bar1");
  p.validate();
  if (!p.in_charge_qubit_regime())
    diag << "warning: parameters are outside the charge-qubit regime (10 <= n_bar1 <= N/10); "
            "the pendulum reduction is only qualitative here\n";
  return p;
}

double resolve_dt(json& prm, double omega) {
  if (!prm.contains("dt")) {
    if (!(omega > 0.0)) throw DomainError("dt has no default when omega = 0; pass --dt");
    prm["dt"] = 0.01 / omega;
  }
  const double dt = num(prm, "dt");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  return dt;
}

double resolve_horizon(const json& prm, double omega) {
  const double wt = num(prm, "omega_t");
  if (!(wt >= 0.0) || !std::isfinite(wt)) throw DomainError("omega_t must be >= 0");
  if (!(omega > 0.0)) throw DomainError("omega_t needs a positive omega");
  return wt / omega;
}

void trajectory_table(const Trajectory& traj, Table& table) {
  table.columns = {"time", "n1", "phi", "norm_drift", "energy", "fidelity"};
  for (std::size_t i = 0; i < traj.size(); ++i)
    table.add_row({traj.times[i], traj.n1[i], traj.phi[i], traj.norm_drift[i], traj.energy_like[i],
                   traj.product_fidelity[i]});
}

void check_exact_conservation(const Trajectory& traj) {
  const double e0 = traj.energy_like.front();
  const double scale = std::max(std::abs(e0), 1e-300);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.norm_drift[i] > 1e-9)
      throw InvariantViolation("norm drifted by " + std::to_string(traj.norm_drift[i]) + " at t = " +
                               std::to_string(traj.times[i]));
    if (std::abs(traj.energy_like[i] - e0) > 1e-8 * scale && std::abs(traj.energy_like[i] - e0) > 1e-12)
      throw InvariantViolation("energy drifted at t = " + std::to_string(traj.times[i]));
  }
}

json run_jj_evolve(ExperimentConfig& cfg, Table& table, std::ostream& diag) {
  const JJParams p = junction(cfg, diag);
  json& prm = cfg.params;
  const MeanFieldReduction red = mean_field_reduction(p);
  if (!prm.contains("n0")) prm["n0"] = p.n_bar1;
  const double n0 = num(prm, "n0");
  const double phi0 = num(prm, "phi0");
  const double dt = resolve_dt(prm, red.omega);
  const double horizon = resolve_horizon(prm, red.omega);
  const auto every = positive(prm, "output_every");
  const bool fidelity = prm["fidelity"].get<bool>();
  const std::string model = prm["model"].get<std::string>();

  const StateVector initial = product_state(p.n_total, n0, phi0);
  Trajectory traj;
  if (model == "mean-field") {
    MeanFieldOptions opts;
    opts.output_every = static_cast<std::size_t>(every);
    opts.track_fidelity = fidelity;
    traj = evolve_meanfield(initial, p, horizon, dt, opts);
    for (std::size_t i = 0; i < traj.size(); ++i)
      if (traj.norm_drift[i] > 1e-9) throw InvariantViolation("mean-field norm drift exceeded 1e-9");
  } else if (model == "exact") {
    const Trajectory full = evolve_exact(initial, p, horizon, dt, fidelity);
    check_exact_conservation(full);
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (i % static_cast<std::size_t>(every) != 0 && i + 1 != full.size()) continue;
      traj.times.push_back(full.times[i]);
      traj.n1.push_back(full.n1[i]);
      traj.phi.push_back(full.phi[i]);
      traj.norm_drift.push_back(full.norm_drift[i]);
      traj.energy_like.push_back(full.energy_like[i]);
      traj.product_fidelity.push_back(full.product_fidelity[i]);
    }
  } else {
    throw ConfigError("model must be mean-field or exact, got '" + model + "'");
  }
  trajectory_table(traj, table);
  return json{{"omega", red.omega}, {"phi_star", red.phi_star}, {"n_eq", red.n_eq}};
}

void run_pendulum(ExperimentConfig& cfg, Table& table) {
  json& prm = cfg.params;
  const double omega = num(prm, "omega");
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("omega must be >= 0");
  const double dt = resolve_dt(prm, omega);
  const double horizon = prm.contains("horizon") ? num(prm, "horizon") : resolve_horizon(prm, omega);
  PendulumOptions opts;
  opts.adaptive = prm["adaptive"].get<bool>();
  const Trajectory traj = pendulum_trajectory(num(prm, "phi0"), num(prm, "phidot0"), omega, horizon, dt, opts);
  const double e0 = traj.energy_like.front();
  for (double e : traj.energy_like)
    if (std::abs(e - e0) > 1e-9 * std::abs(e0) && std::abs(e - e0) > 1e-15)
      throw InvariantViolation("pendulum energy drift exceeded 1e-9 relative");
  table.columns = {"time", "n1", "phi", "norm_drift", "energy", "fidelity", "phidot"};
  for (std::size_t i = 0; i < traj.size(); ++i)
    table.add_row({traj.times[i], traj.n1[i], traj.phi[i], traj.norm_drift[i], traj.energy_like[i],
                   traj.product_fidelity[i], traj.phi_rate[i]});
}

json run_fluctuations(ExperimentConfig& cfg, Table& table) {
  const json& prm = cfg.params;
  const double frac = num(prm, "p");
  if (!(frac > 0.0 && frac < 1.0)) throw DomainError("p must lie in (0, 1)");
  std::vector<JJParams> points;
  for (const auto& v : prm["n_bar1_values"]) {
    const double nb = v.get<double>();
    const double n_total = nb / frac;
    if (!(nb > 0.0) || std::abs(n_total - std::round(n_total)) > 1e-9 * n_total)
      throw DomainError("n_bar1 / p must be a positive integer for every scan point");
    JJParams p;
    p.n_total = static_cast<int>(std::round(n_total));
    p.n_bar1 = nb;
    points.push_back(p);
  }
  const FluctuationReport rep = fluctuation_scan(points, num(prm, "phi"), cfg.threads);
  table.columns = {"n_bar1",           "n_total",      "number_variance",   "binomial_variance",
                   "phase_half_width", "variance_exponent", "phase_exponent"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double binom = rep.n_total_values[i] * frac * (1.0 - frac);
    table.add_row({rep.n_bar1_values[i], std::int64_t{rep.n_total_values[i]}, rep.number_variance[i], binom,
                   rep.phase_width[i], rep.number_fit.exponent, rep.phase_fit.exponent});
  }
  return json{{"variance_exponent", rep.number_fit.exponent}, {"phase_exponent", rep.phase_fit.exponent}};
}

json run_compare(ExperimentConfig& cfg, Table& table, std::ostream& diag) {
  const JJParams p = junction(cfg, diag);
  json& prm = cfg.params;
  if (p.n_total + 1 > static_cast<int>(kDenseEvolutionLimit)) throw DomainError("compare needs n_total < 2000");
  const MeanFieldReduction red = mean_field_reduction(p);
  if (!prm.contains("n0")) prm["n0"] = 0.75 * p.n_total;
  const double dt = resolve_dt(prm, red.omega);
  const double horizon = resolve_horizon(prm, red.omega);
  const ModelComparison cmp = model_compare(p, num(prm, "n0"), num(prm, "phi0"), horizon, dt);
  check_exact_conservation(cmp.exact);

  table.columns = {"time",         "n1_exact",       "n1_mean_field",  "n1_pendulum",       "phi_exact",
                   "phi_mean_field", "phi_pendulum", "n1_divergence",  "phi_divergence",    "max_n1_divergence",
                   "fidelity_exact"};
  double running = 0.0;
  for (std::size_t i = 0; i < cmp.exact.size(); ++i) {
    running = std::max(running, cmp.n1_divergence[i]);
    table.add_row({cmp.exact.times[i], cmp.exact.n1[i], cmp.mean_field.n1[i], cmp.pendulum.n1[i],
                   cmp.exact.phi[i], cmp.mean_field.phi[i], cmp.pendulum.phi[i], cmp.n1_divergence[i],
                   cmp.phi_divergence[i], running, cmp.exact.product_fidelity[i]});
  }
  return json{{"omega", red.omega},
              {"max_n1_divergence", cmp.max_n1_divergence},
              {"max_phi_divergence", cmp.max_phi_divergence}};
}

}  // namespace

void run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& diagnostics) {
  ExperimentConfig cfg = config;
  Table table;
  json extra = nullptr;
  bool violated = false;
  const std::string& name = cfg.subcommand;
  if (name == "bound-check") {
    run_bound_check(cfg, table, violated);
  } else if (name == "neg-sweep") {
    run_neg_sweep(cfg, table, violated);
  } else if (name == "tomography") {
    extra = run_tomography(cfg, table);
  } else if (name == "jj-evolve") {
    extra = run_jj_evolve(cfg, table, diagnostics);
  } else if (name == "pendulum") {
    run_pendulum(cfg, table);
  } else if (name == "fluctuations") {
    extra = run_fluctuations(cfg, table);
  } else if (name == "compare") {
    extra = run_compare(cfg, table, diagnostics);
  } else {
    throw ConfigError("unknown subcommand '" + name + "'");
  }
  // Reorder resolved parameters to table order before echoing.
  const SubcommandSpec& spec = find_subcommand(name);
  json ordered = json::object();
  for (const auto& ps : spec.params)
    if (cfg.params.contains(ps.key)) ordered[ps.key] = cfg.params[ps.key];
  cfg.params = std::move(ordered);

  emit_report(table, cfg.format, cfg.output_path, out, effective_config(cfg), extra);
  if (violated) throw InvariantViolation("a sampled state violated the negativity bound; see the report");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig cfg;
    if (!parse_command_line(argc, argv, cfg, out)) return 0;
    run_experiment(cfg, out, err);
    return 0;
  } catch (const InvariantViolation& e) {
    err << "bosonlab: invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const IntegrationFailure& e) {
    err << "bosonlab: integration failure: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "bosonlab: config error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::ordered_json::exception& e) {
    err << "bosonlab: config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "bosonlab: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "bosonlab: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bosonlab::cli
