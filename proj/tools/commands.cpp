#include "commands.hpp"

#include <cmath>
#include <cstdio>

#include "output.hpp"
#include "rnlw/criteria.hpp"
#include "rnlw/errors.hpp"
#include "rnlw/linear_wave.hpp"
#include "rnlw/trajectory_io.hpp"

namespace rnlw::cli {

using J = nlohmann::ordered_json;

namespace {

J num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

J vec(const std::vector<double>& v) {
  J a = J::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

const char* side_name(Side s) {
  switch (s) {
    case Side::Upper: return "upper";
    case Side::Lower: return "lower";
    default: return "two_sided";
  }
}

J regression_json(const RegressionReport& r) {
  J m = J::array();
  for (const auto& row : r.moment_ratio) m.push_back(vec(row));
  return {{"claim", r.claim},
          {"ladder", vec(r.ladder)},
          {"means", vec(r.means)},
          {"variances", vec(r.variances)},
          {"samples", r.samples},
          {"measured_slope", num(r.measured_slope)},
          {"standard_error", num(r.standard_error)},
          {"predicted_slope", num(r.predicted_slope)},
          {"tolerance", r.tolerance},
          {"side", side_name(r.side)},
          {"pass", r.pass},
          {"two_sided_pass", r.two_sided_pass},
          {"sigma_set", vec(r.sigma_set)},
          {"moment_ratio", m},
          {"moment_growth", num(r.moment_growth)},
          {"moment_drift", num(r.moment_drift)}};
}

void regression_rows(const RegressionReport& r, double index, std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < r.ladder.size(); ++i) rows.push_back({index, r.ladder[i], r.means[i], r.variances[i]});
}

J criteria_json(const std::vector<CriterionResult>& res) {
  J a = J::array();
  for (const auto& c : res) a.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return a;
}

bool print_criteria(const std::vector<CriterionResult>& res) {
  bool ok = true;
  for (const auto& c : res) {
    std::printf("[%s] %2d %s: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.detail.c_str());
    ok = ok && c.pass;
  }
  std::fflush(stdout);
  return ok;
}

// unit H^1-dot shell profile with g = |grad| f, the same family the forced scenario randomizes
SpectralData profile_data(const RunConfig& cfg) {
  const auto grid = cfg.scenario.grid();
  SpectralField prof = shell_compatible_profile(grid, cfg.scenario.gamma, 0.0, cfg.scenario.band_hi);
  prof = (1.0 / sobolev_norm(prof, 1.0, true)) * prof;
  return SpectralData(prof, fractional_derivative(prof, 1.0));
}

io::Container input_container(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("key 'input' is required by this subcommand");
  return io::deserialize(io::read_file(cfg.input));
}

ScenarioData scenario_data(const RunConfig& cfg) {
  if (cfg.input.empty()) return build_scenario(cfg.scenario);
  const auto c = input_container(cfg);
  ScenarioData d{io::unpack_data(c, "DATA"), std::nullopt};
  if (io::has_tag(c, "FORC")) d.forcing = io::unpack_data(c, "FORC");
  return d;
}

J base_header(const RunConfig& cfg, const char* kind) {
  return {{"kind", kind}, {"scenario", cfg.scenario.name}, {"seed", cfg.seed}};
}

double rel_sup(const std::vector<double>& a, const std::vector<double>& b) {
  double num_ = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num_ = std::max(num_, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num_ / den : num_;
}

J identity_json(const IdentityReport& r) {
  J extra = J::object();
  for (const auto& [k, v] : r.extra) extra[k] = num(v);
  return {{"name", r.name},   {"lhs", num(r.lhs)},         {"rhs", num(r.rhs)},
          {"residual", num(r.residual)}, {"scale", num(r.scale)}, {"extra", extra}};
}

}  // namespace

int cmd_randomize(const RunConfig& cfg) {
  OutputDir out(cfg, "randomize");
  SpectralData base = cfg.input.empty() ? profile_data(cfg) : to_spectral(io::unpack_data(input_container(cfg)));
  const auto& rp = cfg.randomization;
  const SpectralData r = sample_randomization(base, rp, 0);
  const auto& grid = base.grid();

  std::vector<double> bf(rp.shell_max), bg(rp.shell_max), rf(rp.shell_max), rg(rp.shell_max);
  std::vector<int> modes(rp.shell_max);
  for (int m = 1; m <= grid.size(); ++m) {
    const long k = shell_index(grid.rho(m), rp.gamma);
    if (k >= rp.shell_max) continue;
    auto sq = [](double x) { return x * x; };
    bf[k] += sq(base.f.coefficients[m - 1]);
    bg[k] += sq(base.g.coefficients[m - 1]);
    rf[k] += sq(r.f.coefficients[m - 1]);
    rg[k] += sq(r.g.coefficients[m - 1]);
    ++modes[k];
  }
  // |u|^2 = 4 pi (R/2) sum c^2
  const double w = 2.0 * M_PI * grid.radius_max;
  J shells = J::array();
  std::vector<std::vector<double>> rows;
  double tb = 0.0, tr = 0.0;
  for (int k = 0; k < rp.shell_max; ++k) {
    if (modes[k] == 0) continue;
    const double lo = std::pow(k, rp.gamma), hi = std::pow(k + 1, rp.gamma);
    tb += w * bf[k];
    tr += w * rf[k];
    shells.push_back({{"k", k},
                      {"rho_lo", lo},
                      {"rho_hi", hi},
                      {"modes", modes[k]},
                      {"f_l2", std::sqrt(w * bf[k])},
                      {"g_l2", std::sqrt(w * bg[k])},
                      {"f_omega_l2", std::sqrt(w * rf[k])},
                      {"g_omega_l2", std::sqrt(w * rg[k])}});
    rows.push_back({double(k), lo, hi, std::sqrt(w * bf[k]), std::sqrt(w * rf[k]), std::sqrt(w * bg[k]),
                    std::sqrt(w * rg[k])});
  }
  const WaveData phys = to_physical(r);
  out.container("randomized.rnlw", io::pack(phys, nullptr, base_header(cfg, "randomized").dump()));
  out.json("randomize.json", {{"gamma", rp.gamma},
                              {"shell_max", rp.shell_max},
                              {"seed", rp.seed},
                              {"trial", 0},
                              {"f_l2_squared", tb},
                              {"f_omega_l2_squared", tr},
                              // unit-variance multipliers: E |f^omega|^2 = |f|^2
                              {"expected_f_omega_l2_squared", tb},
                              {"shells", shells}});
  out.csv("shells.csv", {"k", "rho_lo", "rho_hi", "f_l2", "f_omega_l2", "g_l2", "g_omega_l2"}, rows);
  out.finish();
  std::printf("randomize: %zu shells, |f|^2 = %.6g, |f^w|^2 = %.6g -> %s\n", rows.size(), tb, tr,
              out.path().c_str());
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg) {
  const auto d = scenario_data(cfg);
  const auto& p = cfg.scenario.solver;
  p.validate(d.init.grid());  // refuse before any work

  OutputDir out(cfg, "evolve");
  EnergyIncrementTracker inc;
  MorawetzTracker mor;
  const WaveData* f = d.forcing ? &*d.forcing : nullptr;
  const Trajectory traj = evolve(d.init, f, p, [&](const StepView& s) {
    if (f) inc(s);
    mor(s);
  });

  const auto e = energy_series(traj);
  const auto t = traj.times();
  std::vector<std::vector<double>> rows;
  double drift = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    rows.push_back({t[i], e[i]});
    drift = std::max(drift, std::abs(e[i] - e.front()));
  }
  J rep{{"steps", static_cast<long>(std::lround(t.back() / traj.params.dt))},
        {"dt", traj.params.dt},
        {"snapshots", traj.states.size()},
        {"final_time", t.back()},
        {"energy_initial", e.front()},
        {"energy_final", e.back()},
        {"energy_max_drift", drift},
        {"morawetz", identity_json(mor.report())}};
  if (f) rep["energy_increment"] = identity_json(inc.report());

  out.container("trajectory.rnlw", io::pack(traj, base_header(cfg, "trajectory").dump()));
  out.csv("energy.csv", {"t", "energy"}, rows);
  out.json("evolve.json", rep);
  out.finish();
  std::printf("evolve: %zu snapshots to t = %g, E %.10g -> %.10g -> %s\n", traj.states.size(), t.back(), e.front(),
              e.back(), out.path().c_str());
  return kExitOk;
}

int cmd_decompose(const RunConfig& cfg) {
  const auto d = scenario_data(cfg);
  const double horizon = cfg.scenario.solver.horizon;
  OutputDir out(cfg, "decompose");
  const SpectralData sd = to_spectral(d.init);
  const auto [w_in, w_out] = in_out_decompose(sd, horizon);
  const auto [g_in, g_out] = gradient_profiles(sd, horizon);

  std::vector<std::vector<double>> rows, grows;
  for (std::size_t k = 0; k < w_in.samples.size(); ++k)
    rows.push_back({w_in.tau(static_cast<long>(k)), w_in.samples[k], w_out.samples[k]});
  for (std::size_t k = 0; k < g_in.samples.size(); ++k)
    grows.push_back({g_in.tau(static_cast<long>(k)), g_in.samples[k], g_out.samples[k]});

  // closure of the reconstruction against the exact propagator
  J closure = J::array();
  for (double t : {0.0, 0.5 * horizon, horizon}) {
    const auto rec = reconstruct(w_in, w_out, t, sd.grid());
    const auto ex = linear_solution(d.init, t);
    closure.push_back({{"t", t}, {"relative_sup_error", rel_sup(rec.values, ex.position.values)}});
  }
  J norms = J::array();
  for (double p : cfg.norms.p_set)
    norms.push_back({{"p", num(p)},
                     {"w_in", profile_norm(w_in, p)},
                     {"w_out", profile_norm(w_out, p)},
                     {"grad_in", profile_norm(g_in, p)},
                     {"grad_out", profile_norm(g_out, p)}});

  out.csv("profiles.csv", {"tau", "w_in", "w_out"}, rows);
  out.csv("gradient_profiles.csv", {"tau", "grad_in", "grad_out"}, grows);
  out.json("decompose.json", {{"horizon", horizon},
                              {"tau_min", w_in.tau_min},
                              {"tau_max", w_in.tau_max()},
                              {"step", w_in.step},
                              {"norms", norms},
                              {"closure", closure}});
  out.finish();
  std::printf("decompose: %zu profile samples on [%g, %g] -> %s\n", rows.size(), w_in.tau_min, w_in.tau_max(),
              out.path().c_str());
  return kExitOk;
}

int cmd_functionals(const RunConfig& cfg) {
  Trajectory traj;
  std::optional<WaveData> forcing;
  if (!cfg.input.empty()) {
    const auto c = input_container(cfg);
    if (!io::has_tag(c, "SNAP")) throw ConfigError("input '" + cfg.input + "' holds no trajectory snapshots");
    traj = io::unpack_trajectory(c);
    forcing = traj.forcing;
  } else {
    const auto d = build_scenario(cfg.scenario);
    cfg.scenario.solver.validate(d.init.grid());
    traj = evolve(d.init, d.forcing ? &*d.forcing : nullptr, cfg.scenario.solver);
    forcing = d.forcing;
  }
  OutputDir out(cfg, "functionals");
  const double a = traj.states.front().time, b = traj.states.back().time;

  FunctionalReport r;
  r.energy_sup = energy_sup(traj, a, b);
  r.morawetz = morawetz_term(traj, a, b);
  const auto mor = morawetz_identity_residual(traj, a, b);
  r.residuals["morawetz"] = mor.residual / mor.scale;
  J extra = J::object();
  if (forcing) {
    const auto fl = interaction_flux_term(traj, *forcing, cfg.norms, a, b);
    r.interaction_flux_out = fl.out;
    r.interaction_flux_in = fl.in;
    r.y_norm = y_norm(*forcing, cfg.norms, a, b);
    r.z_norm = z_norm(*forcing, cfg.norms);
    const auto inc = energy_increment_residual(traj, a, b);
    r.residuals["energy_increment"] = inc.residual / inc.scale;
    extra["energy_increment"] = identity_json(inc);
  } else {
    const auto e = energy_series(traj);
    double drift = 0.0;
    for (double x : e) drift = std::max(drift, std::abs(x - e.front()));
    r.residuals["energy_drift"] = e.front() > 0.0 ? drift / e.front() : drift;
  }
  extra["morawetz"] = identity_json(mor);

  J res = J::object();
  for (const auto& [k, v] : r.residuals) res[k] = num(v);
  out.json("functionals.json", {{"interval", {a, b}},
                                {"energy_sup", r.energy_sup},
                                {"morawetz", r.morawetz},
                                {"interaction_flux_out", r.interaction_flux_out},
                                {"interaction_flux_in", r.interaction_flux_in},
                                {"y_norm", r.y_norm},
                                {"z_norm", r.z_norm},
                                {"residuals", res},
                                {"identities", extra}});
  out.finish();
  std::printf("functionals: E_sup %.6g, Morawetz %.6g, Y %.6g, Z %.6g -> %s\n", r.energy_sup, r.morawetz, r.y_norm,
              r.z_norm, out.path().c_str());
  return kExitOk;
}

int cmd_mc(const RunConfig& cfg) {
  if (cfg.mc_acceptance) {
    CriteriaOptions opt;
    opt.mc_trials = cfg.mc.trials;
    if (opt.mc_trials < 64) throw InsufficientTrials("acceptance slopes need at least 64 trials");
    OutputDir out(cfg, "mc");
    const auto res = run_criteria(mc_criteria(), opt);
    const bool ok = print_criteria(res);
    out.json("mc_acceptance.json", {{"pass", ok}, {"criteria", criteria_json(res)}});
    out.finish();
    return ok ? kExitOk : kExitFail;
  }

  cfg.mc.validate();
  OutputDir out(cfg, "mc");
  const auto reps = mc_strichartz(cfg.mc, cfg.mc_norms);
  J arr = J::array();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    arr.push_back(regression_json(reps[i]));
    regression_rows(reps[i], double(i), rows);
    std::printf("mc: %s slope %.4f +- %.4f (predicted %.4f, %s)\n", reps[i].claim.c_str(), reps[i].measured_slope,
                reps[i].standard_error, reps[i].predicted_slope, reps[i].pass ? "pass" : "fail");
  }
  out.json("mc.json", {{"reports", arr}});
  out.csv("mc.csv", {"norm", "N", "mean", "variance"}, rows);

  if (cfg.delta_sweep) {
    const auto drep = refined_strichartz_delta_sweep(cfg.delta_claims, cfg.delta);
    J darr = J::array();
    std::vector<std::vector<double>> drows;
    for (std::size_t i = 0; i < drep.size(); ++i) {
      darr.push_back(regression_json(drep[i]));
      regression_rows(drep[i], double(i), drows);
      std::printf("delta: %s slope %.4f (predicted %.4f, %s)\n", drep[i].claim.c_str(), drep[i].measured_slope,
                  drep[i].predicted_slope, drep[i].pass ? "pass" : "fail");
    }
    out.json("delta.json", {{"reports", darr}});
    out.csv("delta.csv", {"claim", "delta", "norm", "variance"}, drows);
  }
  out.finish();
  std::fflush(stdout);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  CriteriaOptions opt;
  opt.mc_trials = cfg.mc.trials;
  opt.refined = cfg.refined;
  OutputDir out(cfg, "verify");
  const auto res = run_criteria(cfg.verify_criteria, opt);
  const bool ok = print_criteria(res);
  std::vector<std::vector<double>> rows;
  for (const auto& c : res) rows.push_back({double(c.id), c.pass ? 1.0 : 0.0});
  out.json("verify.json", {{"pass", ok}, {"refined", cfg.refined}, {"criteria", criteria_json(res)}});
  out.csv("verify.csv", {"criterion", "pass"}, rows);
  out.finish();
  return ok ? kExitOk : kExitFail;
}

int run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "randomize") return cmd_randomize(cfg);
  if (name == "evolve") return cmd_evolve(cfg);
  if (name == "decompose") return cmd_decompose(cfg);
  if (name == "functionals") return cmd_functionals(cfg);
  if (name == "mc") return cmd_mc(cfg);
  if (name == "verify") return cmd_verify(cfg);
  throw ConfigError("unknown subcommand '" + name + "'");
}

}  // namespace rnlw::cli
