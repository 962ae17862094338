#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rnlw/functionals.hpp"

namespace rnlw {

// ---- regressions ------------------------------------------------------------

// Which way a slope claim may fail.
//   TwoSided: |measured - predicted| <= tol
//   Upper:    measured <= predicted + tol   (growth no faster than claimed)
//   Lower:    measured >= predicted - tol   (decay at least as fast as claimed)
enum class Side { TwoSided, Upper, Lower };

struct RegressionReport {
  std::string claim;
  std::vector<double> ladder;  // N or delta
  std::vector<double> means, variances;
  int samples = 0;             // trials per ladder point (1 for deterministic sweeps)
  double measured_slope = 0.0, standard_error = 0.0;
  double predicted_slope = 0.0, tolerance = 0.1;
  Side side = Side::TwoSided;
  bool pass = false;           // per side, plus standard_error <= tolerance / 2
  bool two_sided_pass = false; // |measured - predicted| <= tol, whatever side says

  // sample moments (E X^sigma)^{1/sigma} / sqrt(sigma), per ladder point and sigma
  std::vector<double> sigma_set;
  std::vector<std::vector<double>> moment_ratio;
  double moment_growth = 0.0;  // max over sigma' < sigma of ratio(sigma)/ratio(sigma') - 1
  double moment_drift = 0.0;   // max ratio / min ratio - 1

  void decide();
};

// Least-squares slope of log2 y against log2 x, with the standard error
// propagated from per-point variances of y (n samples each).  n = 1 uses the
// fit residuals instead.
void fit_log_slope(const std::vector<double>& x, const std::vector<double>& mean, const std::vector<double>& var,
                   int n, double& slope, double& stderr_out);

// ---- Monte Carlo Strichartz --------------------------------------------------

// L^q_t([0, t_max]) L^p_x(|x|^alpha) of the free wave, or L^q_tau of the sine profile
struct NormSpec {
  double q = 8.0 / 3.0;
  double p = INFINITY;
  double alpha = 0.375;
  double t_max = 4.0;
};

enum class McKind { Strichartz, Profile };

struct McConfig {
  McKind kind = McKind::Strichartz;
  int trials = 512;
  std::uint64_t seed = 1;
  std::vector<double> shell_ladder{8, 16, 32, 64, 128};
  double gamma = 1.0;
  NormSpec norm;
  std::vector<double> sigma_set{2, 4, 8, 16};
  bool slope_claim = true;
  double tolerance = 0.1;
  Side side = Side::Upper;
  double radius = 32.0;        // domain for the Strichartz kind
  double radial_cut = 0.9;     // sup / integral over r <= radial_cut * R
  double points_per_unit = 64; // time samples, raised to 4N when larger
  void validate() const;       // InsufficientTrials, ladder span
};

// predicted slope s = 3/2 - 1/q - 3/p - alpha - (1/gamma)(1/2 - 1/min(p, q))
double strichartz_exponent(const NormSpec& s, double gamma);
// (1 - 1/gamma)(1/2 - 1/q)
double profile_exponent(double q, double gamma);

RegressionReport mc_strichartz(const McConfig& cfg);
// several norms from one set of samples; cfg.norm is ignored
std::vector<RegressionReport> mc_strichartz(const McConfig& cfg, const std::vector<NormSpec>& norms);

// norm of every trial at every ladder point, [ladder][norm][trial]
std::vector<std::vector<std::vector<double>>> mc_samples(const McConfig& cfg, const std::vector<NormSpec>& norms);

// ---- refined Strichartz ----------------------------------------------------------

// admissible (q, p, alpha) for d = 3, infinities allowed
bool admissible(double q, double p, double alpha);

struct DeltaSweepConfig {
  std::vector<double> delta_ladder{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  double shell = 1.0;           // a: band [a, a (1 + delta))
  double points_per_unit = 64;  // grid spacing 1 / points_per_unit in r and t
  double window_factor = 4.0;   // t in [0, window_factor / min delta]
  double radius_factor = 16.0;  // R = radius_factor / min delta
  double tolerance = 0.1;
};

struct DeltaClaim {
  double q, p, alpha;
  Side side;
};

// |x|^alpha |e^{it|grad|} f| in L^q_t L^p_x for f^ = chi_[a, a(1+delta)), unit L^2
std::vector<RegressionReport> refined_strichartz_delta_sweep(const std::vector<DeltaClaim>& claims,
                                                             const DeltaSweepConfig& cfg);
RegressionReport refined_strichartz_delta_sweep(double q, double p, double alpha, const DeltaSweepConfig& cfg);
// the same norm for a single delta
double refined_strichartz_norm(double q, double p, double alpha, double delta, const DeltaSweepConfig& cfg);

// ---- scenarios and identity suites --------------------------------------------------

enum class ScenarioKind { Zero, Bump, Forced };

struct Scenario {
  std::string name = "unforced";
  ScenarioKind kind = ScenarioKind::Bump;
  double radius = 64.0;
  int points = 8192;
  SolverParams solver;
  double amplitude = 1.0;     // bump: A exp(-r^2); forced: low part scale
  // forced: randomized data A * shell profile on [0, band_hi], split at cutoff
  double forcing_amplitude = 1.0;
  double band_hi = 12.0;
  double cutoff = 4.0;
  double gamma = 1.0;
  std::uint64_t seed = 1;
  NormParams norms;

  Scenario();
  RadialGrid grid() const { return RadialGrid(radius, points); }
  // same scenario with the spatial step halved (points doubled, R fixed)
  Scenario refined() const;
};

Scenario unforced_scenario();
Scenario forced_scenario(std::uint64_t seed = 1);
Scenario small_data_scenario();
Scenario zero_scenario();
std::optional<Scenario> named_scenario(const std::string& name);

struct ScenarioData {
  WaveData init;
  std::optional<WaveData> forcing;
};
ScenarioData build_scenario(const Scenario& s);
Trajectory run_scenario(const Scenario& s, const StepObserver& observer = {});

struct Check {
  std::string name;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // pass iff value <= threshold (or the stated comparison)
  bool pass = false;
  std::string detail;
};

struct IdentitySuite {
  std::string scenario;
  std::vector<Check> checks;
  bool pass() const;
};

struct VerifyOptions {
  bool energy = true;
  bool energy_convergence = true;  // dt, dt/2, dt/4
  bool morawetz = true;
  bool morawetz_convergence = true;  // h and h/2
  bool flux = true;
  bool interaction_budget = true;
  int tau_count = 16;
  bool refined = false;  // run everything on the refined grid as well and compare
};

IdentitySuite verify_identities(const Scenario& s, const VerifyOptions& opt = {});

// individual pieces, usable on their own
Check energy_conservation_check(const Trajectory& traj, double tol = 1e-6);
struct ConvergenceStudy {
  std::vector<double> dt, residual;
  double order = 0.0;
  double scale = 0.0;
};
ConvergenceStudy energy_increment_convergence(const Scenario& s, int levels = 3);
// lhs <= local-energy increment + slack for every tau
struct FluxLadder {
  std::vector<double> tau, flux, bound;
  double worst_margin = 0.0;
  bool pass = false;
};
FluxLadder flux_monotonicity(const Trajectory& traj, const std::vector<double>& taus, double slack);
std::vector<double> default_tau_ladder(int count);

// ---- bootstrap ledger -----------------------------------------------------------------

struct LedgerInterval {
  double a = 0.0, b = 0.0;
  double energy = 0.0;    // sup of the energy on I_j
  double morawetz = 0.0;  // A_j
  double flux_out = 0.0, flux_in = 0.0;
  double y_norm = 0.0;
};

struct BootstrapLedger {
  std::vector<LedgerInterval> intervals;
  double z_norm = 0.0;
  std::vector<double> ratios;   // (E_{j+1} + 1) / (E_j + 1)
  double c_tilde = 0.0;         // max ratio
  std::vector<double> margins;  // c_tilde (E_j + 1) - (E_{j+1} + 1)
  // max_j Y(I_j) for the dyadic refinements J = 1, 2, 4, ..., J
  std::vector<int> refinement_j;
  std::vector<double> refinement_y_max;
  bool y_decreasing() const;
};

BootstrapLedger bootstrap_track(const Trajectory& traj, const WaveData& forcing, int J, const NormParams& params,
                                bool with_flux = true);

// ---- scattering -------------------------------------------------------------------------

struct ScatteringReport {
  std::vector<double> times;       // tail snapshot times
  std::vector<double> decrements;  // |data(t_k) - data(t_{k-1})|_{H^1 dot x L^2}, k >= 1
  double energy = 0.0;
  bool monotone_tail = false;      // strictly decreasing over the last 4
  double final_decrement = 0.0;
  bool pass(double rel = 1e-3) const;
};

// (v, v_t)(t) pulled back by the free flow to time 0
SpectralData pull_back(const WaveState& s);
ScatteringReport scattering_check(const Trajectory& traj, double tail_fraction = 0.5);

// worker count: RNLW_WORKERS or the OpenMP default
int worker_count();

}  // namespace rnlw
