#pragma once

#include <map>
#include <string>
#include <vector>

#include "rnlw/nlw.hpp"

namespace rnlw {

enum class Cone { Out, In };  // weight argument t - |x| or t + |x|

struct NormParams {
  double delta = 0.125;
  double gamma = 1.0;
  std::vector<double> dyadic_range;  // empty: every shell below Nyquist
  std::vector<double> p_set{2.0, 4.0, 24.0};
  int k_ladder_max = 10;             // K = 1 .. 2^k_ladder_max, capped at Nyquist
  double z_window = 8.0;             // T_Z
  void validate() const;
};

struct FunctionalReport {
  double energy_sup = 0.0;
  double morawetz = 0.0;
  double interaction_flux_out = 0.0;
  double interaction_flux_in = 0.0;
  double y_norm = 0.0;
  double z_norm = 0.0;
  std::map<std::string, double> residuals;
};

// ---- energy -----------------------------------------------------------------

// gradient term from the sine coefficients, the rest by nodes
double energy(const SpectralData& state, const RadialField& v, const RadialField& vt);
double energy(const WaveState& s);
double local_energy(const WaveState& s, double radius);
std::vector<double> energy_series(const Trajectory& traj);
double energy_sup(const Trajectory& traj, double a, double b);

// ---- space-time functionals over snapshots ------------------------------------

// indices of snapshots with a <= t <= b
std::vector<std::size_t> snapshot_range(const Trajectory& traj, double a, double b);

double morawetz_term(const Trajectory& traj, double a, double b);
// v at radius r > 0 by cubic interpolation of w = r v
double value_at_radius(const RadialField& v, double r);
double cone_flux(const Trajectory& traj, double tau, double a, double b);

// S_K w = K <K tau>^{-2} * w, kernel averaged over each tau cell
Profile smooth_weight(const Profile& w, double K);
std::vector<double> k_ladder(const RadialGrid& grid, int k_max);

double weighted_potential(const Trajectory& traj, const Profile& w, Cone dir, double a, double b);

struct InteractionFlux {
  double out = 0.0, in = 0.0;
};
InteractionFlux interaction_flux_term(const Trajectory& traj, const WaveData& forcing, const NormParams& params,
                                      double a, double b);

// ---- norms of the forcing -------------------------------------------------------

struct YNormTerms {
  double terms[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  double total() const;
};
YNormTerms y_norm_terms(const WaveData& forcing, const NormParams& params, double a, double b);

// Per-time spatial norms of every Y summand on t_n = n h over [a, b]; any
// grid-aligned subinterval can then be aggregated without recomputation.
class YNormSeries {
 public:
  YNormSeries(const WaveData& forcing, const NormParams& params, double a, double b);
  YNormTerms over(double a, double b) const;

 private:
  double h_;
  long n0_;
  std::vector<double> shells_, shell_coef_;  // N and the printed N power per summand
  // [summand 0..3][shell][time] and [summand 4..7][time]
  std::vector<std::vector<std::vector<double>>> shell_series_;
  std::vector<std::vector<double>> full_series_;
  double delta_;
};
double y_norm(const WaveData& forcing, const NormParams& params, double a, double b);

struct ZNormTerms {
  double profile_tilde = 0.0;   // sum over *, p, N of W_*[|grad| F~_N]
  double profile_grad = 0.0;    // same with the gradient profiles of F_N
  double profile_full = 0.0;    // W_*[F]
  double pointwise = 0.0;       // sum_N N^delta |x|^{1/2} F_N in L^inf L^inf
  double energy_norm = 0.0;     // |F|_{L^inf L^6}
  double total() const { return profile_tilde + profile_grad + profile_full + pointwise + energy_norm; }
};
ZNormTerms z_norm_terms(const WaveData& forcing, const NormParams& params);
double z_norm(const WaveData& forcing, const NormParams& params);

// Littlewood-Paley shells carrying data; the params range if given
std::vector<double> active_shells(const SpectralData& data, const NormParams& params);

// ---- identities -------------------------------------------------------------------

struct IdentityReport {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
  double scale = 0.0;     // tolerance reference (max(|lhs|, E) or max(E, 1))
  std::map<std::string, double> extra;
};

// Accumulate identity terms at every solver step (trapezoid in t).  Feed each
// StepView in order; report() closes the time integrals.
class EnergyIncrementTracker {
 public:
  void operator()(const StepView& s);
  IdentityReport report() const;

 private:
  bool started_ = false;
  double t_prev_ = 0.0, src_prev_ = 0.0, integral_ = 0.0;
  double e0_ = 0.0, e_last_ = 0.0, e_sup_ = 0.0;
};

// radial Morawetz identity
//   (2/3) int int v^6/|x| + 2 pi int v(t,0)^2 dt
//     = -[ int v_t (d_r v + v/|x|) dx ]_a^b - int int N d_r v - int int N v/|x|
class MorawetzTracker {
 public:
  void operator()(const StepView& s);
  IdentityReport report() const;

  struct Terms {
    double potential = 0.0;  // int v^6/|x| dx
    double origin = 0.0;     // v(t,0)^2
    double boundary = 0.0;   // int v_t (d_r v + v/|x|) dx
    double boundary_printed = 0.0;  // int v_t d_r v - 4 v v_t/|x| dx
    double n_radial = 0.0;   // int N d_r v dx
    double n_hardy = 0.0;    // int N v/|x| dx
  };
  static Terms evaluate(const StepView& s);

 private:
  bool started_ = false;
  double t_prev_ = 0.0;
  Terms prev_, first_, last_;
  double pot_ = 0.0, origin_ = 0.0, nr_ = 0.0, nh_ = 0.0, e_sup_ = 0.0;
};

// Same identity from stored snapshots (trapezoid on the report stride).
IdentityReport morawetz_identity_residual(const Trajectory& traj, double a, double b);
IdentityReport energy_increment_residual(const Trajectory& traj, double a, double b);

// Interaction flux inequality with every right-side term computed:
//   lhs = int int w(t -+ |x|) v^6
//   budget = 6 [2 T1 + 2 6^{5/6} T2 + T3 + T4 + 10 T5]
struct FluxBudget {
  double N = 0.0;
  Cone dir = Cone::Out;
  double lhs = 0.0, budget = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0, t5 = 0.0;
  double margin() const { return budget - lhs; }
};
std::vector<FluxBudget> interaction_flux_budget(const Trajectory& traj, const WaveData& forcing,
                                                const NormParams& params, double a, double b);

}  // namespace rnlw
