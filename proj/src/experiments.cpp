#include "rnlw/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <stdexcept>

#include "rnlw/errors.hpp"
#include "rnlw/weighted_lp.hpp"

namespace rnlw {

int worker_count() {
  if (const char* e = std::getenv("RNLW_WORKERS")) {
    const int w = std::atoi(e);
    if (w > 0) return w;
  }
  return std::max(1, omp_get_max_threads());
}

namespace {

// Runs body(i) for i in [0, n) on the worker pool; the first exception is rethrown.
template <class F>
void parallel_for(long n, F&& body) {
  std::exception_ptr err;
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(rnlw_parallel_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

double mean_of(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance_of(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

// trapezoid L^q over a uniform grid; q = inf is the max
double time_norm(const std::vector<double>& f, double h, double q) {
  if (std::isinf(q)) return max_abs(f);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wt = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
    s += wt * abs_pow(f[i], q);
  }
  return std::pow(s * h, 1.0 / q);
}

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

// ---- regressions ------------------------------------------------------------

void fit_log_slope(const std::vector<double>& x, const std::vector<double>& mean, const std::vector<double>& var,
                   int n, double& slope, double& stderr_out) {
  const std::size_t k = x.size();
  if (k < 2 || mean.size() != k) throw std::invalid_argument("fit_log_slope: need matching ladders of size >= 2");
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(mean[i] > 0.0)) throw std::invalid_argument("fit_log_slope: nonpositive mean");
    lx[i] = std::log2(x[i]);
    ly[i] = std::log2(mean[i]);
  }
  const double mx = mean_of(lx), my = mean_of(ly);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  slope = sxy / sxx;
  double v = 0.0;
  if (n > 1) {
    // delta method: var(log2 m) = var / (n m^2 ln^2 2)
    for (std::size_t i = 0; i < k; ++i) {
      const double c = (lx[i] - mx) / sxx;
      const double vy = var[i] / (n * mean[i] * mean[i] * std::log(2.0) * std::log(2.0));
      v += c * c * vy;
    }
  } else if (k > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double r = ly[i] - (my + slope * (lx[i] - mx));
      rss += r * r;
    }
    v = rss / static_cast<double>(k - 2) / sxx;
  }
  stderr_out = std::sqrt(v);
}

void RegressionReport::decide() {
  const double d = measured_slope - predicted_slope;
  two_sided_pass = std::abs(d) <= tolerance;
  bool ok = two_sided_pass;
  if (side == Side::Upper) ok = d <= tolerance;
  if (side == Side::Lower) ok = d >= -tolerance;
  pass = ok && standard_error <= 0.5 * tolerance;
}

// ---- Monte Carlo Strichartz --------------------------------------------------

void McConfig::validate() const {
  if (trials < 2) throw InsufficientTrials("at least 2 trials are needed for a variance");
  if (slope_claim && trials < 100)
    throw InsufficientTrials(std::to_string(trials) + " trials with a slope claim (need >= 100)");
  if (shell_ladder.size() < 2) throw ConfigError("shell_ladder needs at least two entries");
  for (double N : shell_ladder)
    if (!(N >= 1.0)) throw ConfigError("shell_ladder entries must be >= 1");
  const auto [lo, hi] = std::minmax_element(shell_ladder.begin(), shell_ladder.end());
  if (slope_claim && std::log2(*hi / *lo) < 4.0 - 1e-12) throw ConfigError("shell_ladder spans fewer than 4 octaves");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (!(radius > 0.0) || !(radial_cut > 0.0 && radial_cut <= 1.0)) throw ConfigError("bad radius or radial_cut");
}

double strichartz_exponent(const NormSpec& s, double gamma) {
  const double m = std::min(s.p, s.q);
  return 1.5 - inv(s.q) - 3.0 * inv(s.p) - s.alpha - (0.5 - inv(m)) / gamma;
}

double profile_exponent(double q, double gamma) { return (1.0 - 1.0 / gamma) * (0.5 - inv(q)); }

namespace {

struct ShellSetup {
  RadialGrid grid;
  SpectralField base;           // unit L^2 shell data
  std::vector<long> shell;      // shell index per mode, -1 outside the data
  long shell_count = 0;
};

ShellSetup shell_setup(double R, double h, double N, double gamma) {
  ShellSetup s{RadialGrid(R, static_cast<int>(std::lround(R / h))), SpectralField(), {}, 0};
  s.base = normalized(shell_compatible_profile(s.grid, gamma, N, 2.0 * N));
  s.shell.assign(s.grid.size(), -1);
  for (int m = 1; m <= s.grid.size(); ++m) {
    if (s.base.coefficients[m - 1] == 0.0) continue;
    s.shell[m - 1] = shell_index(s.grid.rho(m), gamma);
    s.shell_count = std::max(s.shell_count, s.shell[m - 1] + 1);
  }
  return s;
}

// f^omega for position data; same Gaussians as sample_randomization (component 0)
SpectralField randomized(const ShellSetup& s, std::uint64_t seed, std::uint64_t trial) {
  std::vector<double> g(s.shell_count);
  for (long k = 0; k < s.shell_count; ++k) g[k] = counter_gaussian(seed, trial, k, 0);
  SpectralField c(s.grid);
  for (int m = 1; m <= s.grid.size(); ++m)
    if (s.shell[m - 1] >= 0) c.coefficients[m - 1] = g[s.shell[m - 1]] * s.base.coefficients[m - 1];
  return c;
}

std::vector<std::vector<double>> strichartz_samples(const McConfig& cfg, double N,
                                                    const std::vector<NormSpec>& norms) {
  const double h = 1.0 / std::max(cfg.points_per_unit, 4.0 * N);
  const auto setup = shell_setup(cfg.radius, h, N, cfg.gamma);
  const int jmax = static_cast<int>(cfg.radial_cut * setup.grid.size());
  double t_max = 0.0;
  for (const auto& s : norms) t_max = std::max(t_max, s.t_max);
  const long nt = std::lround(t_max / h);

  std::vector<WeightedLp> space;
  for (const auto& s : norms) space.emplace_back(jmax, h, s.alpha, s.p);

  std::vector<std::vector<double>> out(norms.size(), std::vector<double>(cfg.trials));
  parallel_for(cfg.trials, [&](long tr) {
    const SpectralField c = randomized(setup, cfg.seed, static_cast<std::uint64_t>(tr));
    const FreeWave fw(SpectralData(c, SpectralField(setup.grid)), 0, nt, jmax);
    std::vector<double> u(jmax);
    std::vector<std::vector<double>> series(norms.size());
    for (long n = 0; n <= nt; ++n) {
      fw.field(n, u.data());
      for (std::size_t i = 0; i < norms.size(); ++i)
        if (n * h <= norms[i].t_max + 1e-12) series[i].push_back(space[i](u.data()));
    }
    for (std::size_t i = 0; i < norms.size(); ++i) out[i][tr] = time_norm(series[i], h, norms[i].q);
  });
  return out;
}

std::vector<std::vector<double>> profile_samples(const McConfig& cfg, double N, const std::vector<NormSpec>& norms) {
  // a shell at rho ~ N has width ~ gamma N^{1 - 1/gamma}; R grows to keep it resolved
  const double R = cfg.radius * std::max(1.0, std::pow(N, 1.0 / cfg.gamma - 1.0));
  double qmax = 2.0;
  for (const auto& s : norms)
    if (!std::isinf(s.q)) qmax = std::max(qmax, s.q);
  // the periodic trapezoid integrates |W|^q exactly once 2 q N < 2 pi / h
  const double h = 1.0 / (N * std::max(2.0, 0.5 * qmax));
  const auto setup = shell_setup(R, h, N, cfg.gamma);
  const long n = setup.grid.point_count;

  std::vector<std::vector<double>> out(norms.size(), std::vector<double>(cfg.trials));
  parallel_for(cfg.trials, [&](long tr) {
    const SpectralField c = randomized(setup, cfg.seed, static_cast<std::uint64_t>(tr));
    const Profile w = profile_sine(c, -n, n);  // one period
    for (std::size_t i = 0; i < norms.size(); ++i) out[i][tr] = profile_norm(w, norms[i].q);
  });
  return out;
}

}  // namespace

std::vector<std::vector<std::vector<double>>> mc_samples(const McConfig& cfg, const std::vector<NormSpec>& norms) {
  cfg.validate();
  if (norms.empty()) throw ConfigError("no norms requested");
  for (const auto& s : norms) {
    if (cfg.kind == McKind::Strichartz && !(s.t_max > 0.0)) throw ConfigError("time window must be positive");
    if (!(s.q >= 1.0) || !(s.p >= 1.0)) throw ConfigError("norm exponents must be >= 1");
  }
  std::vector<std::vector<std::vector<double>>> out;
  for (double N : cfg.shell_ladder)
    out.push_back(cfg.kind == McKind::Strichartz ? strichartz_samples(cfg, N, norms) : profile_samples(cfg, N, norms));
  return out;
}

std::vector<RegressionReport> mc_strichartz(const McConfig& cfg, const std::vector<NormSpec>& norms) {
  const auto samples = mc_samples(cfg, norms);
  std::vector<RegressionReport> reports;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const auto& s = norms[i];
    RegressionReport r;
    char buf[160];
    if (cfg.kind == McKind::Strichartz) {
      std::snprintf(buf, sizeof buf, "|x|^%g e^{it|grad|} f_N in L^%g_t L^%g_x, gamma = %g", s.alpha, s.q, s.p,
                    cfg.gamma);
      r.predicted_slope = strichartz_exponent(s, cfg.gamma);
    } else {
      std::snprintf(buf, sizeof buf, "W_s[f_N] in L^%g_tau, gamma = %g", s.q, cfg.gamma);
      r.predicted_slope = profile_exponent(s.q, cfg.gamma);
    }
    r.claim = buf;
    r.ladder = cfg.shell_ladder;
    r.samples = cfg.trials;
    r.tolerance = cfg.tolerance;
    r.side = cfg.side;
    r.sigma_set = cfg.sigma_set;
    for (std::size_t k = 0; k < cfg.shell_ladder.size(); ++k) {
      const auto& x = samples[k][i];
      r.means.push_back(mean_of(x));
      r.variances.push_back(variance_of(x));
      std::vector<double> ratios;
      for (double sg : cfg.sigma_set) {
        double m = 0.0;
        for (double v : x) m += std::pow(v, sg);
        ratios.push_back(std::pow(m / static_cast<double>(x.size()), 1.0 / sg) / std::sqrt(sg));
      }
      for (std::size_t a = 0; a < ratios.size(); ++a)
        for (std::size_t b = a + 1; b < ratios.size(); ++b) {
          r.moment_growth = std::max(r.moment_growth, ratios[b] / ratios[a] - 1.0);
          const double hi = std::max(ratios[a], ratios[b]), lo = std::min(ratios[a], ratios[b]);
          r.moment_drift = std::max(r.moment_drift, hi / lo - 1.0);
        }
      r.moment_ratio.push_back(std::move(ratios));
    }
    fit_log_slope(r.ladder, r.means, r.variances, r.samples, r.measured_slope, r.standard_error);
    r.decide();
    reports.push_back(std::move(r));
  }
  return reports;
}

RegressionReport mc_strichartz(const McConfig& cfg) { return mc_strichartz(cfg, {cfg.norm}).front(); }

// ---- refined Strichartz ----------------------------------------------------------

bool admissible(double q, double p, double alpha) {
  if (!(q >= 2.0) || !(p >= 2.0)) return false;
  const bool qi = std::isinf(q), pi = std::isinf(p);
  if (!qi && !pi) return -3.0 / p < alpha && alpha < 2.0 * (0.5 - 1.0 / p) - 1.0 / q;
  if (qi && !pi) return -3.0 / p < alpha && alpha <= 2.0 * (0.5 - 1.0 / p);
  if (!qi && pi) return 0.0 <= alpha && alpha < 1.0 - 1.0 / q;
  return 0.0 <= alpha && alpha <= 1.0;
}

namespace {

struct SweepGrid {
  RadialGrid grid;
  long nt;
  int jmax;
};

SweepGrid sweep_grid(const DeltaSweepConfig& cfg) {
  const double dmin = *std::min_element(cfg.delta_ladder.begin(), cfg.delta_ladder.end());
  const double h = 1.0 / cfg.points_per_unit;
  const double R = cfg.radius_factor / dmin;
  SweepGrid g{RadialGrid(R, static_cast<int>(std::lround(R / h))), std::lround(cfg.window_factor / dmin / h), 0};
  g.jmax = static_cast<int>(0.9 * g.grid.size());
  return g;
}

// norms of |e^{it|grad|} f| = (cos^2 + sin^2)^{1/2} for every claim at one delta
std::vector<double> sweep_norms(const std::vector<DeltaClaim>& claims, double delta, const DeltaSweepConfig& cfg,
                                const SweepGrid& sg) {
  const auto& grid = sg.grid;
  SpectralField c(grid);
  const double a = cfg.shell;
  for (int m = 1; m <= grid.size(); ++m)
    if (grid.rho(m) >= a && grid.rho(m) < a * (1.0 + delta)) c.coefficients[m - 1] = 1.0;
  c = normalized(c);
  const FreeWave cosw(SpectralData(c, SpectralField(grid)), 0, sg.nt, sg.jmax);
  const FreeWave sinw(SpectralData(SpectralField(grid), fractional_derivative(c, 1.0)), 0, sg.nt, sg.jmax);

  const double h = grid.spacing();
  std::vector<WeightedLp> space;
  for (const auto& cl : claims) space.emplace_back(sg.jmax, h, cl.alpha, cl.p);
  std::vector<std::vector<double>> series(claims.size(), std::vector<double>(sg.nt + 1));
  parallel_for(sg.nt + 1, [&](long n) {
    std::vector<double> u(sg.jmax), v(sg.jmax);
    cosw.field(n, u.data());
    sinw.field(n, v.data());
    for (int j = 0; j < sg.jmax; ++j) u[j] = std::sqrt(u[j] * u[j] + v[j] * v[j]);
    for (std::size_t i = 0; i < claims.size(); ++i) series[i][n] = space[i](u.data());
  });
  std::vector<double> out;
  for (std::size_t i = 0; i < claims.size(); ++i) out.push_back(time_norm(series[i], h, claims[i].q));
  return out;
}

void check_claims(const std::vector<DeltaClaim>& claims) {
  for (const auto& c : claims)
    if (!admissible(c.q, c.p, c.alpha))
      throw InadmissibleTriple("(q, p, alpha) = (" + std::to_string(c.q) + ", " + std::to_string(c.p) + ", " +
                               std::to_string(c.alpha) + ")");
}

}  // namespace

std::vector<RegressionReport> refined_strichartz_delta_sweep(const std::vector<DeltaClaim>& claims,
                                                             const DeltaSweepConfig& cfg) {
  check_claims(claims);
  if (cfg.delta_ladder.size() < 3) throw ConfigError("delta_ladder needs at least three entries");
  const auto sg = sweep_grid(cfg);
  std::vector<std::vector<double>> values(claims.size());
  for (double d : cfg.delta_ladder) {
    const auto v = sweep_norms(claims, d, cfg, sg);
    for (std::size_t i = 0; i < claims.size(); ++i) values[i].push_back(v[i]);
  }
  std::vector<RegressionReport> out;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const auto& cl = claims[i];
    RegressionReport r;
    char buf[160];
    std::snprintf(buf, sizeof buf, "|x|^%g e^{it|grad|} A_{1,delta} f in L^%g_t L^%g_x vs delta", cl.alpha, cl.q,
                  cl.p);
    r.claim = buf;
    r.ladder = cfg.delta_ladder;
    r.means = values[i];
    r.variances.assign(r.means.size(), 0.0);
    r.samples = 1;
    r.predicted_slope = 0.5 - inv(std::min(cl.p, cl.q));
    r.tolerance = cfg.tolerance;
    r.side = cl.side;
    fit_log_slope(r.ladder, r.means, r.variances, 1, r.measured_slope, r.standard_error);
    r.decide();
    out.push_back(std::move(r));
  }
  return out;
}

RegressionReport refined_strichartz_delta_sweep(double q, double p, double alpha, const DeltaSweepConfig& cfg) {
  return refined_strichartz_delta_sweep({DeltaClaim{q, p, alpha, Side::Lower}}, cfg).front();
}

double refined_strichartz_norm(double q, double p, double alpha, double delta, const DeltaSweepConfig& cfg) {
  const std::vector<DeltaClaim> claims{DeltaClaim{q, p, alpha, Side::Lower}};
  check_claims(claims);
  DeltaSweepConfig c = cfg;
  c.delta_ladder = {delta};
  return sweep_norms(claims, delta, c, sweep_grid(c)).front();
}

// ---- scenarios -----------------------------------------------------------------------

Scenario::Scenario() {
  solver.horizon = 8.0;
  solver.cfl = 0.25;
  solver.report_stride = 16;
}

Scenario Scenario::refined() const {
  Scenario s = *this;
  s.points *= 2;
  s.name += "-refined";
  s.solver.report_stride *= 2;  // same snapshot times
  return s;
}

Scenario unforced_scenario() {
  Scenario s;
  s.name = "unforced";
  s.kind = ScenarioKind::Bump;
  s.amplitude = 1.0;
  return s;
}

Scenario forced_scenario(std::uint64_t seed) {
  Scenario s;
  s.name = "forced";
  s.kind = ScenarioKind::Forced;
  s.amplitude = 8.0;
  s.forcing_amplitude = 8.0;
  s.seed = seed;
  // unit-shell pieces decay only algebraically in r; the data itself sits near 1e-6 beyond 0.9 R
  s.solver.domain_tol = 1e-5;
  return s;
}

Scenario small_data_scenario() {
  Scenario s;
  s.name = "small";
  s.kind = ScenarioKind::Bump;
  s.amplitude = 0.5;
  return s;
}

Scenario zero_scenario() {
  Scenario s;
  s.name = "zero";
  s.kind = ScenarioKind::Zero;
  s.radius = 16.0;
  s.points = 1024;
  s.solver.horizon = 1.0;
  s.amplitude = 0.0;
  return s;
}

std::optional<Scenario> named_scenario(const std::string& name) {
  if (name == "unforced") return unforced_scenario();
  if (name == "forced") return forced_scenario();
  if (name == "small") return small_data_scenario();
  if (name == "zero") return zero_scenario();
  return std::nullopt;
}

ScenarioData build_scenario(const Scenario& s) {
  const RadialGrid grid = s.grid();
  ScenarioData d{WaveData(grid), std::nullopt};
  switch (s.kind) {
    case ScenarioKind::Zero:
      break;
    case ScenarioKind::Bump:
      for (int j = 1; j <= grid.size(); ++j) d.init.position.values[j - 1] = s.amplitude * std::exp(-grid.r(j) * grid.r(j));
      break;
    case ScenarioKind::Forced: {
      SpectralField prof = shell_compatible_profile(grid, s.gamma, 0.0, s.band_hi);
      prof = (1.0 / sobolev_norm(prof, 1.0, true)) * prof;  // unit H^1-dot before randomization
      SpectralData base(prof, fractional_derivative(prof, 1.0));
      RandomizationParams rp;
      rp.gamma = s.gamma;
      rp.seed = s.seed;
      rp.cutoff = s.cutoff;
      rp.shell_max = static_cast<int>(std::ceil(std::pow(s.band_hi, 1.0 / s.gamma))) + 2;
      const auto [lo, hi] = split_frequency(sample_randomization(base, rp, 0), s.cutoff);
      d.init = to_physical(SpectralData(s.amplitude * lo.f, s.amplitude * lo.g));
      d.forcing = to_physical(SpectralData(s.forcing_amplitude * hi.f, s.forcing_amplitude * hi.g));
      break;
    }
  }
  return d;
}

Trajectory run_scenario(const Scenario& s, const StepObserver& observer) {
  const auto d = build_scenario(s);
  return evolve(d.init, d.forcing ? &*d.forcing : nullptr, s.solver, observer);
}

// ---- identity suites ---------------------------------------------------------------------

bool IdentitySuite::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Check energy_conservation_check(const Trajectory& traj, double tol) {
  const auto e = energy_series(traj);
  const double e0 = e.front();
  double drift = 0.0;
  for (double x : e) drift = std::max(drift, std::abs(x - e0));
  Check c;
  c.name = "energy conservation";
  c.value = e0 > 0.0 ? drift / e0 : drift;
  c.threshold = tol;
  c.pass = c.value <= tol;
  c.detail = "E0 = " + std::to_string(e0);
  return c;
}

ConvergenceStudy energy_increment_convergence(const Scenario& s, int levels) {
  ConvergenceStudy st;
  const auto d = build_scenario(s);
  for (int l = 0; l < levels; ++l) {
    SolverParams p = s.solver;
    p.cfl = s.solver.cfl / std::ldexp(1.0, l);
    p.dt = 0.0;
    p.report_stride = 1 << 30;
    EnergyIncrementTracker tr;
    const auto traj = evolve(d.init, d.forcing ? &*d.forcing : nullptr, p, [&](const StepView& v) { tr(v); });
    const auto rep = tr.report();
    st.dt.push_back(traj.params.dt);
    st.residual.push_back(rep.residual);
    st.scale = std::max(st.scale, rep.scale);
  }
  if (levels >= 2 && st.residual.back() > 0.0 && st.residual.front() > 0.0) {
    double se = 0.0;
    fit_log_slope(st.dt, st.residual, std::vector<double>(st.dt.size(), 0.0), 1, st.order, se);
  }
  return st;
}

std::vector<double> default_tau_ladder(int count) {
  std::vector<double> t;
  for (int i = 0; i < count; ++i) t.push_back(-3.0 + 0.5 * i);
  return t;
}

FluxLadder flux_monotonicity(const Trajectory& traj, const std::vector<double>& taus, double slack) {
  FluxLadder out;
  out.pass = true;
  out.worst_margin = INFINITY;
  const double T = traj.states.back().time;
  const double stride = traj.stride_time();
  for (double tau : taus) {
    double a = std::max(0.0, tau + 0.5);
    a = std::ceil(a / stride - 1e-9) * stride;
    if (a >= T) continue;
    const auto idx = snapshot_range(traj, a, T);
    const auto& sa = traj.states[idx.front()];
    const auto& sb = traj.states[idx.back()];
    const double flux = cone_flux(traj, tau, a, T);
    const double bound = local_energy(sb, sb.time - tau) - local_energy(sa, sa.time - tau);
    out.tau.push_back(tau);
    out.flux.push_back(flux);
    out.bound.push_back(bound);
    const double margin = bound + slack - flux;
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < 0.0) out.pass = false;
  }
  return out;
}

namespace {

Check make_check(std::string name, double value, double threshold, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.pass = value <= threshold;
  c.detail = std::move(detail);
  return c;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

IdentitySuite verify_identities(const Scenario& s, const VerifyOptions& opt) {
  IdentitySuite suite;
  suite.scenario = s.name;
  const auto data = build_scenario(s);
  const WaveData* forcing = data.forcing ? &*data.forcing : nullptr;

  EnergyIncrementTracker et;
  MorawetzTracker mt;
  const auto traj = evolve(data.init, forcing, s.solver, [&](const StepView& v) {
    et(v);
    mt(v);
  });
  const auto er = et.report();
  const auto mr = mt.report();
  const double E = energy_sup(traj, 0.0, traj.states.back().time);

  if (s.kind == ScenarioKind::Zero) {
    double worst = std::max({std::abs(er.lhs), std::abs(er.rhs), std::abs(mr.lhs), std::abs(mr.rhs), E});
    suite.checks.push_back(make_check("zero scenario: every functional vanishes", worst, 0.0));
    return suite;
  }

  if (opt.energy) {
    if (!forcing) {
      suite.checks.push_back(energy_conservation_check(traj, 1e-6));
    } else {
      suite.checks.push_back(make_check("energy increment residual / max(E, 1)", er.residual / er.scale, 1e-4,
                                        fmt("lhs %.6e rhs %.6e", er.lhs, er.rhs)));
    }
  }
  if (opt.energy_convergence && forcing) {
    const auto st = energy_increment_convergence(s, 3);
    Check c;
    c.name = "energy increment O(dt^2) self-convergence";
    c.value = st.order;
    c.threshold = 0.2;
    c.pass = std::abs(st.order - 2.0) <= 0.2;
    c.detail = fmt("order %.3f, residuals %.3e .. %.3e", st.order, st.residual.front(), st.residual.back());
    suite.checks.push_back(c);
  }
  if (opt.morawetz) {
    suite.checks.push_back(make_check("Morawetz residual / max(|lhs|, E)", mr.residual / mr.scale, 1e-3,
                                      fmt("lhs %.6e rhs %.6e", mr.lhs, mr.rhs)));
  }
  if (opt.morawetz_convergence) {
    const Scenario rs = s.refined();
    const auto rd = build_scenario(rs);
    MorawetzTracker rt;
    evolve(rd.init, rd.forcing ? &*rd.forcing : nullptr, rs.solver, [&](const StepView& v) { rt(v); });
    const auto rr = rt.report();
    const double base = mr.residual / mr.scale, fine = rr.residual / rr.scale;
    Check c;
    c.name = "Morawetz self-convergence under h -> h/2";
    c.value = fine / base;
    c.threshold = 1.0;
    c.pass = fine < base;
    c.detail = fmt("relative residual %.3e -> %.3e", base, fine);
    suite.checks.push_back(c);
  }
  if (opt.flux && !forcing) {
    const auto fl = flux_monotonicity(traj, default_tau_ladder(opt.tau_count), 1e-5 * E);
    Check c;
    c.name = "flux bounded by local energy increment";
    c.value = -fl.worst_margin;
    c.threshold = 0.0;
    c.pass = fl.pass && static_cast<int>(fl.tau.size()) == opt.tau_count;
    c.detail = fmt("%g taus, worst margin %.3e", static_cast<double>(fl.tau.size()), fl.worst_margin);
    suite.checks.push_back(c);
  }
  if (opt.interaction_budget && forcing) {
    const auto budget = interaction_flux_budget(traj, *forcing, s.norms, 0.0, traj.states.back().time);
    double worst = INFINITY;
    for (const auto& b : budget) worst = std::min(worst, b.margin());
    Check c;
    c.name = "interaction flux within budget";
    c.value = -worst;
    c.threshold = 0.0;
    c.pass = !budget.empty() && worst >= 0.0;
    c.detail = fmt("%g shell/direction pairs, worst margin %.3e", static_cast<double>(budget.size()), worst);
    suite.checks.push_back(c);
  }
  if (opt.refined) {
    // refined-resolution oracle: the same functionals on a grid twice as fine
    const Scenario rs = s.refined();
    const auto rd = build_scenario(rs);
    EnergyIncrementTracker ret;
    MorawetzTracker rmt;
    evolve(rd.init, rd.forcing ? &*rd.forcing : nullptr, rs.solver, [&](const StepView& v) {
      ret(v);
      rmt(v);
    });
    const auto rm = rmt.report();
    suite.checks.push_back(make_check("refined oracle: Morawetz lhs", std::abs(rm.lhs - mr.lhs) / mr.scale, 1e-3,
                                      fmt("lhs %.8e vs %.8e", mr.lhs, rm.lhs)));
    const auto re = ret.report();
    suite.checks.push_back(make_check("refined oracle: energy increment", std::abs(re.lhs - er.lhs) / er.scale,
                                      1e-4, fmt("lhs %.8e vs %.8e", er.lhs, re.lhs)));
  }
  return suite;
}

// ---- bootstrap ledger ---------------------------------------------------------------------

bool BootstrapLedger::y_decreasing() const {
  for (std::size_t i = 1; i < refinement_y_max.size(); ++i)
    if (!(refinement_y_max[i] < refinement_y_max[i - 1])) return false;
  return !refinement_y_max.empty();
}

BootstrapLedger bootstrap_track(const Trajectory& traj, const WaveData& forcing, int J, const NormParams& params,
                                bool with_flux) {
  if (J < 1) throw std::invalid_argument("bootstrap_track: J must be >= 1");
  BootstrapLedger L;
  const double T = traj.states.back().time;
  const YNormSeries y(forcing, params, 0.0, T);
  auto cut = [&](int j, int n) {
    // snap to the Y time grid so every piece is aggregated on whole samples
    const double h = traj.grid.spacing();
    return std::round(T * j / n / h) * h;
  };
  for (int j = 0; j < J; ++j) {
    LedgerInterval I;
    I.a = cut(j, J);
    I.b = j + 1 == J ? T : cut(j + 1, J);
    I.energy = energy_sup(traj, I.a, I.b);
    I.morawetz = morawetz_term(traj, I.a, I.b);
    if (with_flux) {
      const auto f = interaction_flux_term(traj, forcing, params, I.a, I.b);
      I.flux_out = f.out;
      I.flux_in = f.in;
    }
    I.y_norm = y.over(I.a, I.b).total();
    L.intervals.push_back(I);
  }
  L.z_norm = z_norm(forcing, params);
  for (int j = 0; j + 1 < J; ++j)
    L.ratios.push_back((L.intervals[j + 1].energy + 1.0) / (L.intervals[j].energy + 1.0));
  L.c_tilde = L.ratios.empty() ? 1.0 : *std::max_element(L.ratios.begin(), L.ratios.end());
  for (int j = 0; j + 1 < J; ++j)
    L.margins.push_back(L.c_tilde * (L.intervals[j].energy + 1.0) - (L.intervals[j + 1].energy + 1.0));
  for (int n = 1; n <= J; n *= 2) {
    double m = 0.0;
    for (int j = 0; j < n; ++j) m = std::max(m, y.over(cut(j, n), j + 1 == n ? T : cut(j + 1, n)).total());
    L.refinement_j.push_back(n);
    L.refinement_y_max.push_back(m);
  }
  return L;
}

// ---- scattering ------------------------------------------------------------------------------

SpectralData pull_back(const WaveState& s) {
  return propagate(SpectralData(forward_transform(s.position), forward_transform(s.velocity)), -s.time);
}

bool ScatteringReport::pass(double rel) const {
  return monotone_tail && final_decrement < rel * std::sqrt(energy);
}

ScatteringReport scattering_check(const Trajectory& traj, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("tail_fraction must lie in (0, 1]");
  const double T = traj.states.back().time;
  const auto idx = snapshot_range(traj, (1.0 - tail_fraction) * T, T);
  if (idx.size() < 16)
    throw RangeExceeded("tail holds " + std::to_string(idx.size()) + " snapshots (need >= 16)");
  ScatteringReport r;
  SpectralData prev = pull_back(traj.states[idx.front()]);
  r.times.push_back(traj.states[idx.front()].time);
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const auto& s = traj.states[idx[k]];
    SpectralData cur = pull_back(s);
    const double df = sobolev_norm(cur.f - prev.f, 1.0, true);
    const double dg = l2_norm(cur.g - prev.g);
    r.times.push_back(s.time);
    r.decrements.push_back(std::sqrt(df * df + dg * dg));
    prev = std::move(cur);
  }
  r.energy = energy(traj.states[idx.back()]);
  r.final_decrement = r.decrements.back();
  const std::size_t n = r.decrements.size();
  r.monotone_tail = n >= 4;
  for (std::size_t k = n >= 4 ? n - 3 : 1; k < n; ++k)
    if (!(r.decrements[k] < r.decrements[k - 1])) r.monotone_tail = false;
  return r;
}

}  // namespace rnlw
