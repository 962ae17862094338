#include "rnlw/nlw.hpp"

#include <cmath>

#include "rnlw/errors.hpp"

namespace rnlw {

double SolverParams::resolved_dt(const RadialGrid& grid) const {
  return dt > 0.0 ? dt : cfl * grid.spacing();
}

void SolverParams::validate(const RadialGrid& grid) const {
  if (sign != +1) throw SolverParamError("only the defocusing sign (+1) is supported");
  if (!(dt >= 0.0) || !(cfl > 0.0)) throw SolverParamError("dt and cfl must be positive");
  const double ratio = resolved_dt(grid) / grid.spacing();
  if (ratio > 0.5 + 1e-12) throw SolverParamError("dt/h = " + std::to_string(ratio) + " exceeds 1/2");
  if (!(horizon >= 0.0)) throw SolverParamError("horizon must be nonnegative");
  if (report_stride < 1) throw SolverParamError("report_stride must be >= 1");
  if (!(blowup_threshold > 0.0)) throw SolverParamError("blowup_threshold must be positive");
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(states.size());
  for (const auto& s : states) t.push_back(s.time);
  return t;
}

RadialField nonlinearity(const RadialField& v, const RadialField& F, bool full) {
  if (!(v.grid == F.grid)) throw GridError("nonlinearity: grids differ");
  RadialField out(v.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double a = v.values[i], s = a + F.values[i];
    const double s5 = s * s * s * s * s;
    out.values[i] = full ? s5 : s5 - a * a * a * a * a;
  }
  return out;
}

Solver::Solver(const SpectralData& init, std::optional<SpectralData> forcing, const SolverParams& params)
    : grid_(init.grid()), state_(init), forcing_(std::move(forcing)), params_(params) {
  params_.validate(grid_);
  if (forcing_ && !(forcing_->grid() == grid_)) throw GridError("forcing grid differs from state grid");
  dt_ = params_.resolved_dt(grid_);
  keep_modes_ = params_.dealias ? (2 * grid_.size()) / 3 : grid_.size();
  refresh_kick();
}

RadialField Solver::forcing_at(double t) const {
  if (!forcing_) return RadialField(grid_);
  return inverse_transform(propagate(*forcing_, t).f);
}

void Solver::refresh_kick() {
  v_ = inverse_transform(state_.f);
  RadialField minus_n(grid_);
  if (forcing_) {
    f_now_ = forcing_at(time_);
    for (std::size_t i = 0; i < minus_n.values.size(); ++i) {
      const double s = v_.values[i] + f_now_.values[i];
      minus_n.values[i] = -(s * s * s * s * s);
    }
  } else {
    for (std::size_t i = 0; i < minus_n.values.size(); ++i) {
      const double s = v_.values[i];
      minus_n.values[i] = -(s * s * s * s * s);
    }
  }
  kick_ = forward_transform(minus_n).coefficients;
  for (int m = keep_modes_ + 1; m <= grid_.size(); ++m) kick_[m - 1] = 0.0;
}

void Solver::step() {
  auto& c = state_.f.coefficients;
  auto& cd = state_.g.coefficients;
  const double half = 0.5 * dt_;
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += half * kick_[i];
  for (int m = 1; m <= grid_.size(); ++m) {
    const double rho = grid_.rho(m), co = std::cos(rho * dt_), si = std::sin(rho * dt_);
    const double a = c[m - 1], b = cd[m - 1];
    c[m - 1] = a * co + b * si / rho;
    cd[m - 1] = -a * rho * si + b * co;
  }
  ++n_;
  time_ = n_ * dt_;
  refresh_kick();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += half * kick_[i];
}

WaveState Solver::snapshot() const { return WaveState{time_, v_, inverse_transform(state_.g)}; }

void Solver::observe(const StepObserver& obs) const {
  const RadialField vt = inverse_transform(state_.g);
  obs(StepView{time_, state_, v_, vt, forcing_ ? &f_now_ : nullptr});
}

void Solver::check(bool domain) const {
  if (!v_.finite()) throw NonFinite("state at t = " + std::to_string(time_));
  for (double k : kick_)
    if (!std::isfinite(k)) throw NonFinite("nonlinear term at t = " + std::to_string(time_));
  const double l6 = weighted_norm(v_, 0.0, 6.0);
  if (!(l6 <= params_.blowup_threshold))
    throw BlowupDetected("|v|_{L^6} = " + std::to_string(l6) + " at t = " + std::to_string(time_));
  if (domain) check_domain(v_, params_.domain_tol);
}

WaveState step(const WaveState& state, const WaveData* forcing, double dt, bool dealias) {
  SolverParams p;
  p.dt = dt;
  p.dealias = dealias;
  std::optional<SpectralData> fs;
  // shift the forcing so that the solver's clock starts at state.time
  if (forcing) fs = propagate(to_spectral(*forcing), state.time);
  Solver s(SpectralData(forward_transform(state.position), forward_transform(state.velocity)), fs, p);
  s.step();
  s.check(false);
  auto out = s.snapshot();
  out.time = state.time + dt;
  return out;
}

Trajectory evolve(const WaveData& init, const WaveData* forcing, const SolverParams& params,
                  const StepObserver& observer) {
  const auto& grid = init.grid();
  params.validate(grid);
  SolverParams p = params;
  const double dt0 = p.resolved_dt(grid);
  const long steps = std::max(0L, static_cast<long>(std::ceil(p.horizon / dt0 - 1e-9)));
  p.dt = steps > 0 ? p.horizon / steps : dt0;

  std::optional<SpectralData> fs;
  if (forcing) fs = to_spectral(*forcing);
  Solver solver(to_spectral(init), fs, p);

  Trajectory traj;
  traj.grid = grid;
  traj.params = p;
  if (forcing) traj.forcing = *forcing;

  auto record = [&](bool report) {
    solver.check(report && p.check_domain);
    if (observer) solver.observe(observer);
    if (report) traj.states.push_back(solver.snapshot());
  };
  record(true);
  for (long n = 1; n <= steps; ++n) {
    solver.step();
    record(n % p.report_stride == 0 || n == steps);
  }
  return traj;
}

}  // namespace rnlw
