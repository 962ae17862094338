#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rnlw/linear_wave.hpp"

namespace rnlw {

struct SolverParams {
  double dt = 0.0;               // 0: cfl * h
  double horizon = 8.0;
  double cfl = 0.25;             // dt / h, must stay <= 1/2
  double blowup_threshold = 1e3; // on |v|_{L^6}
  int report_stride = 1;
  bool dealias = true;
  int sign = +1;                 // +1 defocusing; anything else is rejected
  bool check_domain = true;
  double domain_tol = 1e-8;

  // resolved step for this grid; throws SolverParamError
  double resolved_dt(const RadialGrid& grid) const;
  void validate(const RadialGrid& grid) const;
};

struct Trajectory {
  RadialGrid grid;
  std::vector<WaveState> states;
  std::optional<WaveData> forcing;
  SolverParams params;  // dt holds the step actually taken

  std::vector<double> times() const;
  // snapshot interval in time units
  double stride_time() const { return params.dt * params.report_stride; }
};

// (v + F)^5 - v^5, or (v + F)^5 with full = true
RadialField nonlinearity(const RadialField& v, const RadialField& F, bool full = false);

// Everything an observer may want at t_n; fields are node values.
struct StepView {
  double time;
  const SpectralData& state;  // (c, c_t) of v
  const RadialField& v;
  const RadialField& vt;
  const RadialField* forcing;  // F(t_n), null when unforced
};
using StepObserver = std::function<void(const StepView&)>;

class Solver {
 public:
  Solver(const SpectralData& init, std::optional<SpectralData> forcing, const SolverParams& params);

  void step();
  double time() const { return time_; }
  long steps_taken() const { return n_; }
  double dt() const { return dt_; }
  const SpectralData& state() const { return state_; }
  WaveState snapshot() const;
  RadialField forcing_at(double t) const;
  void observe(const StepObserver& obs) const;
  // L^6 norm, finiteness and (optionally) tail checks on the current state
  void check(bool domain) const;

 private:
  void refresh_kick();

  RadialGrid grid_;
  SpectralData state_;
  std::optional<SpectralData> forcing_;
  SolverParams params_;
  double dt_;
  double time_ = 0.0;
  long n_ = 0;
  int keep_modes_;
  RadialField v_, f_now_;
  std::vector<double> kick_;  // spectral increment per unit time at the current state
};

// one Strang step of (v, d_t v) at state.time
WaveState step(const WaveState& state, const WaveData* forcing, double dt, bool dealias = true);

Trajectory evolve(const WaveData& init, const WaveData* forcing, const SolverParams& params,
                  const StepObserver& observer = {});

}  // namespace rnlw
