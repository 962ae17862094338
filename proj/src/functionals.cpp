#include "rnlw/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "rnlw/constants.hpp"
#include "rnlw/errors.hpp"
#include "rnlw/quadrature.hpp"
#include "rnlw/transforms.hpp"

namespace rnlw {

using constants::four_pi;

void NormParams::validate() const {
  if (!(delta > 0.0 && delta <= 0.25)) throw ConfigError("delta must lie in (0, 1/4]");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (k_ladder_max < 0) throw ConfigError("k_ladder_max must be >= 0");
  for (double p : p_set)
    if (!(p >= 1.0)) throw ConfigError("p_set entries must be >= 1");
}

namespace {

// 4 pi int r^2 f dr, plain trapezoid (exact for the discrete inner product)
double ball_sum(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double r = (j + 1) * h;
    s += r * r * f[j];
  }
  return four_pi * h * s;
}

double pow5(double x) { return x * x * x * x * x; }
double pow6(double x) {
  const double x2 = x * x;
  return x2 * x2 * x2;
}

// cone argument t -+ r
double cone_arg(Cone dir, double t, double r) { return dir == Cone::Out ? t - r : t + r; }

}  // namespace

// ---- energy -----------------------------------------------------------------

double energy(const SpectralData& state, const RadialField& v, const RadialField&) {
  const auto& g = state.grid();
  double grad = 0.0, kin = 0.0;
  for (int m = 1; m <= g.size(); ++m) {
    const double a = g.rho(m) * state.f.coefficients[m - 1], b = state.g.coefficients[m - 1];
    grad += a * a;
    kin += b * b;
  }
  std::vector<double> pot(v.values.size());
  for (std::size_t i = 0; i < pot.size(); ++i) pot[i] = pow6(v.values[i]) / 6.0;
  return 0.5 * constants::parseval_factor(g.radius_max) * (grad + kin) + ball_sum(pot, g.spacing());
}

double energy(const WaveState& s) {
  return energy(SpectralData(forward_transform(s.position), forward_transform(s.velocity)), s.position, s.velocity);
}

double local_energy(const WaveState& s, double radius) {
  const auto& g = s.position.grid;
  const int n = g.size();
  const double h = g.spacing();
  if (radius <= 0.0) return 0.0;
  radius = std::min(radius, g.radius_max);

  const auto c = forward_transform(s.position);
  std::vector<double> a(n), wr(n + 2);
  for (int m = 1; m <= n; ++m) a[m - 1] = g.rho(m) * c.coefficients[m - 1];
  fft::cosine_synthesis(std::span<const double>(a), std::span<double>(wr));

  // f = r^2 e(r) at r_k, k = 0..N
  std::vector<double> f(n + 2, 0.0);
  for (int j = 1; j <= n; ++j) {
    const double r = g.r(j), v = s.position.values[j - 1], vt = s.velocity.values[j - 1];
    const double rvr = wr[j] - v;  // r d_r v
    f[j] = 0.5 * rvr * rvr + r * r * (0.5 * vt * vt + pow6(v) / 6.0);
  }
  f[n + 1] = 0.5 * wr[n + 1] * wr[n + 1];
  return four_pi * quad::cumulative_integral(f, h, radius);
}

std::vector<double> energy_series(const Trajectory& traj) {
  std::vector<double> e;
  e.reserve(traj.states.size());
  for (const auto& s : traj.states) e.push_back(energy(s));
  return e;
}

std::vector<std::size_t> snapshot_range(const Trajectory& traj, double a, double b) {
  const double eps = 1e-9 * std::max(1.0, traj.stride_time());
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double t = traj.states[i].time;
    if (t >= a - eps && t <= b + eps) idx.push_back(i);
  }
  return idx;
}

double energy_sup(const Trajectory& traj, double a, double b) {
  double e = 0.0;
  for (auto i : snapshot_range(traj, a, b)) e = std::max(e, energy(traj.states[i]));
  return e;
}

// ---- space-time functionals -----------------------------------------------------

namespace {

template <class F>
double time_integral(const Trajectory& traj, double a, double b, F&& density) {
  const auto idx = snapshot_range(traj, a, b);
  std::vector<double> t, f;
  for (auto i : idx) {
    t.push_back(traj.states[i].time);
    f.push_back(density(traj.states[i]));
  }
  return quad::trapezoid(t, f);
}

}  // namespace

double morawetz_term(const Trajectory& traj, double a, double b) {
  return time_integral(traj, a, b, [](const WaveState& s) { return std::pow(weighted_norm(s.position, -1.0 / 6.0, 6.0), 6.0); });
}

double value_at_radius(const RadialField& v, double r) {
  const auto& g = v.grid;
  if (!(r > 0.0 && r < g.radius_max)) throw RangeExceeded("radius " + std::to_string(r) + " outside (0, R)");
  const int n = g.size();
  // w at k = -1..N+1, odd about 0 and R
  std::vector<double> w(n + 4, 0.0);
  const double h = g.spacing();
  for (int j = 1; j <= n; ++j) w[j + 1] = g.r(j) * v.values[j - 1];
  w[0] = -w[2];
  w[n + 3] = -w[n + 1];
  return quad::lagrange4(w.data(), n + 4, r / h + 1.0) / r;
}

double cone_flux(const Trajectory& traj, double tau, double a, double b) {
  return time_integral(traj, a, b, [&](const WaveState& s) {
    const double rho = s.time - tau;
    const double v = value_at_radius(s.position, rho);
    return pow6(v) / 6.0 * four_pi * rho * rho;
  });
}

Profile smooth_weight(const Profile& w, double K) {
  const long n = static_cast<long>(w.samples.size());
  const double h = w.step;
  std::vector<double> ker(2 * n - 1);
  for (long j = -(n - 1); j <= n - 1; ++j)
    ker[j + n - 1] = std::atan(K * (j + 0.5) * h) - std::atan(K * (j - 0.5) * h);
  const auto full = fft::convolve(w.samples, ker);
  Profile out = w;
  for (long i = 0; i < n; ++i) out.samples[i] = std::max(0.0, full[i + n - 1]);
  return out;
}

std::vector<double> k_ladder(const RadialGrid& grid, int k_max) {
  std::vector<double> K;
  for (int k = 0; k <= k_max; ++k) {
    const double v = std::ldexp(1.0, k);
    if (v > grid.nyquist()) break;
    K.push_back(v);
  }
  return K;
}

double weighted_potential(const Trajectory& traj, const Profile& w, Cone dir, double a, double b) {
  return time_integral(traj, a, b, [&](const WaveState& s) {
    const auto& g = s.position.grid;
    std::vector<double> f(g.size());
    for (int j = 1; j <= g.size(); ++j) f[j - 1] = w(cone_arg(dir, s.time, g.r(j))) * pow6(s.position.values[j - 1]);
    return ball_sum(f, g.spacing());
  });
}

std::vector<double> active_shells(const SpectralData& data, const NormParams& params) {
  if (!params.dyadic_range.empty()) return params.dyadic_range;
  // transform round trips leave ~1e-16 noise on every mode; that is not data
  double top = 0.0;
  for (int m = 1; m <= data.grid().size(); ++m)
    top = std::max({top, std::abs(data.f.coefficients[m - 1]), std::abs(data.g.coefficients[m - 1])});
  const double floor = 1e-12 * top;
  std::vector<double> out;
  for (double N : dyadic_ladder(data.grid())) {
    const auto b = BandSpec::dyadic(N);
    bool any = false;
    for (int m = 1; m <= data.grid().size() && !any; ++m)
      any = band_symbol(b, data.grid().rho(m)) != 0.0 &&
            (std::abs(data.f.coefficients[m - 1]) > floor || std::abs(data.g.coefficients[m - 1]) > floor);
    if (any) out.push_back(N);
  }
  return out;
}

namespace {

SpectralData band(const SpectralData& d, double N) {
  const auto b = BandSpec::dyadic(N);
  return SpectralData(apply_band(d.f, b), apply_band(d.g, b));
}

// data of |grad| F~ = d_t F: (g, -rho^2 f)
SpectralData tilde_gradient_data(const SpectralData& d) {
  return SpectralData(d.g, -1.0 * fractional_derivative(d.f, 2.0));
}

Profile squared(const Profile& p) {
  Profile q = p;
  for (auto& x : q.samples) x *= x;
  return q;
}

double horizon_of(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

}  // namespace

InteractionFlux interaction_flux_term(const Trajectory& traj, const WaveData& forcing, const NormParams& params,
                                      double a, double b) {
  params.validate();
  InteractionFlux out;
  const auto fs = to_spectral(forcing);
  const double T = horizon_of(a, b);
  const auto Ks = k_ladder(fs.grid(), params.k_ladder_max);

  auto sup_over_k = [&](const Profile& w, Cone dir) {
    double s = 0.0;
    for (double K : Ks) s = std::max(s, weighted_potential(traj, smooth_weight(w, K), dir, a, b));
    return s;
  };

  for (double N : active_shells(fs, params)) {
    const auto dn = band(fs, N);
    const double coef = std::pow(N, -1.0 / (6.0 * params.gamma) + 2.0 * params.delta) +
                        std::pow(N, -2.0 + 2.0 * params.delta);
    const auto wt = squared(in_out_decompose(tilde_gradient_data(dn), T).first);
    const auto wg = squared(gradient_profiles(dn, T).first);
    // the two weights coincide analytically; only recompute if they do not numerically
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < wt.samples.size(); ++i) {
      diff = std::max(diff, std::abs(wt.samples[i] - wg.samples[i]));
      scale = std::max(scale, std::abs(wt.samples[i]));
    }
    for (Cone dir : {Cone::Out, Cone::In}) {
      const double st = sup_over_k(wt, dir);
      const double sg = diff <= 1e-12 * scale ? st : sup_over_k(wg, dir);
      (dir == Cone::Out ? out.out : out.in) += coef * (st + sg);
    }
  }
  const auto wf = squared(in_out_decompose(fs, T).first);
  out.out += weighted_potential(traj, wf, Cone::Out, a, b);
  out.in += weighted_potential(traj, wf, Cone::In, a, b);
  return out;
}

// ---- identities -------------------------------------------------------------------

namespace {

double nonlinear_source(const StepView& s) {
  if (!s.forcing) return 0.0;
  const auto& F = s.forcing->values;
  std::vector<double> f(F.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = s.v.values[i];
    f[i] = (pow5(v + F[i]) - pow5(v)) * s.vt.values[i];
  }
  return ball_sum(f, s.v.grid.spacing());
}

}  // namespace

void EnergyIncrementTracker::operator()(const StepView& s) {
  const double e = energy(s.state, s.v, s.vt);
  const double src = nonlinear_source(s);
  if (!started_) {
    started_ = true;
    e0_ = e;
  } else {
    integral_ += 0.5 * (s.time - t_prev_) * (src + src_prev_);
  }
  t_prev_ = s.time;
  src_prev_ = src;
  e_last_ = e;
  e_sup_ = std::max(e_sup_, e);
}

IdentityReport EnergyIncrementTracker::report() const {
  IdentityReport r;
  r.name = "energy_increment";
  r.lhs = e_last_ - e0_;
  r.rhs = -integral_;
  r.residual = std::abs(r.lhs - r.rhs);
  r.scale = std::max(e_sup_, 1.0);
  r.extra["energy_sup"] = e_sup_;
  return r;
}

MorawetzTracker::Terms MorawetzTracker::evaluate(const StepView& s) {
  const auto& g = s.v.grid;
  const int n = g.size();
  const double h = g.spacing();
  const auto wr = radial_derivative(s.state.f);
  const auto w = s.v.reduced();
  std::vector<double> v6(n), bd(n), vrr(n), bp1(n), bp3(n), nr(n), nh(n);
  const double* F = s.forcing ? s.forcing->values.data() : nullptr;
  for (int j = 1; j <= n; ++j) {
    const double r = g.r(j), v = s.v.values[j - 1], vt = s.vt.values[j - 1];
    const double vr_over_r = (wr[j - 1] - v) / (r * r);
    const double N = F ? pow5(v + F[j - 1]) - pow5(v) : 0.0;
    v6[j - 1] = pow6(v);
    bd[j - 1] = vt * wr[j - 1];
    bp3[j - 1] = vt * vr_over_r;
    bp1[j - 1] = -4.0 * v * vt;
    nr[j - 1] = N * vr_over_r;
    nh[j - 1] = N * v;
  }
  Terms t;
  t.potential = four_pi * quad::radial_integral(1.0, v6, h);
  const double v0 = origin_value(w, h);
  t.origin = v0 * v0;
  t.boundary = four_pi * quad::radial_integral(1.0, bd, h);
  t.boundary_printed = four_pi * (quad::radial_integral(3.0, bp3, h) + quad::radial_integral(1.0, bp1, h));
  if (F) {
    t.n_radial = four_pi * quad::radial_integral(3.0, nr, h);
    t.n_hardy = four_pi * quad::radial_integral(1.0, nh, h);
  }
  return t;
}

void MorawetzTracker::operator()(const StepView& s) {
  const auto cur = evaluate(s);
  e_sup_ = std::max(e_sup_, energy(s.state, s.v, s.vt));
  if (!started_) {
    started_ = true;
    first_ = cur;
  } else {
    const double dt = s.time - t_prev_;
    pot_ += 0.5 * dt * (cur.potential + prev_.potential);
    origin_ += 0.5 * dt * (cur.origin + prev_.origin);
    nr_ += 0.5 * dt * (cur.n_radial + prev_.n_radial);
    nh_ += 0.5 * dt * (cur.n_hardy + prev_.n_hardy);
  }
  t_prev_ = s.time;
  prev_ = cur;
  last_ = cur;
}

IdentityReport MorawetzTracker::report() const {
  IdentityReport r;
  r.name = "morawetz";
  r.lhs = (2.0 / 3.0) * pot_ + 2.0 * constants::pi * origin_;
  r.rhs = -(last_.boundary - first_.boundary) - nr_ - nh_;
  r.residual = std::abs(r.lhs - r.rhs);
  r.scale = std::max(std::abs(r.lhs), e_sup_);
  r.extra["potential_term"] = (2.0 / 3.0) * pot_;
  r.extra["origin_term"] = 2.0 * constants::pi * origin_;
  r.extra["boundary_term"] = -(last_.boundary - first_.boundary);
  r.extra["n_radial_term"] = -nr_;
  r.extra["n_hardy_term"] = -nh_;
  // the variant with pi v(t,0)^2 and the "- 4 v v_t/|x|" boundary density
  const double lhs_p = (2.0 / 3.0) * pot_ + constants::pi * origin_;
  const double rhs_p = (last_.boundary_printed - first_.boundary_printed) - nr_ - nh_;
  r.extra["printed_variant_lhs"] = lhs_p;
  r.extra["printed_variant_rhs"] = rhs_p;
  r.extra["printed_variant_residual"] = std::abs(lhs_p - rhs_p);
  r.extra["energy_sup"] = e_sup_;
  return r;
}

namespace {

template <class Tracker>
IdentityReport replay(const Trajectory& traj, double a, double b, Tracker& tr) {
  std::optional<SpectralData> fs;
  if (traj.forcing) fs = to_spectral(*traj.forcing);
  for (auto i : snapshot_range(traj, a, b)) {
    const auto& s = traj.states[i];
    SpectralData st(forward_transform(s.position), forward_transform(s.velocity));
    RadialField F;
    if (fs) F = inverse_transform(propagate(*fs, s.time).f);
    tr(StepView{s.time, st, s.position, s.velocity, fs ? &F : nullptr});
  }
  return tr.report();
}

}  // namespace

IdentityReport morawetz_identity_residual(const Trajectory& traj, double a, double b) {
  MorawetzTracker tr;
  return replay(traj, a, b, tr);
}

IdentityReport energy_increment_residual(const Trajectory& traj, double a, double b) {
  EnergyIncrementTracker tr;
  return replay(traj, a, b, tr);
}

// ---- interaction flux budget ---------------------------------------------------------

std::vector<FluxBudget> interaction_flux_budget(const Trajectory& traj, const WaveData& forcing,
                                                const NormParams& params, double a, double b) {
  const auto fs = to_spectral(forcing);
  const auto& g = traj.grid;
  const int n = g.size();
  const double h = g.spacing();
  const double T = horizon_of(a, b);
  const auto idx = snapshot_range(traj, a, b);

  // forcing on the snapshots
  std::vector<RadialField> F, Ft;
  std::vector<double> times;
  double f_l6 = 0.0;
  for (auto i : idx) {
    const auto p = propagate(fs, traj.states[i].time);
    F.push_back(inverse_transform(p.f));
    Ft.push_back(inverse_transform(p.g));
    times.push_back(traj.states[i].time);
    f_l6 = std::max(f_l6, weighted_norm(F.back(), 0.0, 6.0));
  }
  const double E = energy_sup(traj, a, b);

  // T5 without the |w|_1 factor
  std::vector<double> minor(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& s = traj.states[idx[k]];
    std::vector<double> f(n);
    for (int j = 0; j < n; ++j) {
      const double Fv = std::abs(F[k].values[j]), v = std::abs(s.position.values[j]);
      const double sum = Fv + v;
      f[j] = Fv * Fv * sum * sum * sum * std::abs(s.velocity.values[j]);
    }
    minor[k] = ball_sum(f, h);
  }
  const double minor_int = quad::trapezoid(times, minor);

  std::vector<FluxBudget> out;
  for (double N : active_shells(fs, params)) {
    const auto w = squared(in_out_decompose(tilde_gradient_data(band(fs, N)), T).first);
    const double l1 = profile_norm(w, 1.0);
    // Omega_out(tau) = int_{-inf}^tau w, Omega_in(tau) = int_tau^inf w
    Profile om_out = w, om_in = w;
    double acc = 0.0;
    om_out.samples[0] = 0.0;
    for (std::size_t i = 1; i < w.samples.size(); ++i) {
      acc += 0.5 * w.step * (w.samples[i] + w.samples[i - 1]);
      om_out.samples[i] = acc;
    }
    for (std::size_t i = 0; i < w.samples.size(); ++i) om_in.samples[i] = acc - om_out.samples[i];

    for (Cone dir : {Cone::Out, Cone::In}) {
      const Profile& om = dir == Cone::Out ? om_out : om_in;
      std::vector<double> lhs(idx.size()), t3(idx.size()), t4(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& s = traj.states[idx[k]];
        std::vector<double> fl(n), f3(n), f4(n);
        for (int j = 1; j <= n; ++j) {
          const double tau = cone_arg(dir, s.time, g.r(j));
          const double v = s.position.values[j - 1], v5 = pow5(v), wv = w(tau);
          fl[j - 1] = wv * v5 * v;
          f3[j - 1] = om(tau) * Ft[k].values[j - 1] * v5;
          f4[j - 1] = wv * F[k].values[j - 1] * v5;
        }
        lhs[k] = ball_sum(fl, h);
        t3[k] = ball_sum(f3, h);
        t4[k] = ball_sum(f4, h);
      }
      FluxBudget fb;
      fb.N = N;
      fb.dir = dir;
      fb.lhs = quad::trapezoid(times, lhs);
      fb.t1 = l1 * E;
      fb.t2 = l1 * f_l6 * std::pow(E, 5.0 / 6.0);
      fb.t3 = std::abs(quad::trapezoid(times, t3));
      fb.t4 = std::abs(quad::trapezoid(times, t4));
      fb.t5 = l1 * minor_int;
      fb.budget = 6.0 * (2.0 * fb.t1 + 2.0 * std::pow(6.0, 5.0 / 6.0) * fb.t2 + fb.t3 + fb.t4 + 10.0 * fb.t5);
      out.push_back(fb);
    }
  }
  return out;
}

}  // namespace rnlw
