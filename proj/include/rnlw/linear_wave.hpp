#pragma once

#include <utility>
#include <vector>

#include "rnlw/radial_spectral.hpp"
#include "rnlw/randomize.hpp"

namespace rnlw {

struct WaveState {
  double time = 0.0;
  RadialField position;  // v
  RadialField velocity;  // d_t v
};

// Samples on tau_k = tau_min + k * step.
struct Profile {
  double tau_min = 0.0;
  double step = 1.0;
  std::vector<double> samples;

  double tau_max() const { return tau_min + step * (static_cast<double>(samples.size()) - 1.0); }
  double tau(long k) const { return tau_min + step * static_cast<double>(k); }
  // cubic interpolation; RangeExceeded outside [tau_min, tau_max]
  double operator()(double tau) const;
  Profile operator-() const;
};

// exact mode rotation of (f, g) to (F(t), d_t F(t))
SpectralData propagate(const SpectralData& data, double t);
WaveState linear_solution(const WaveData& data, double t);

// (|grad|^{-1} g, -|grad| f)
SpectralData companion_solution(const SpectralData& data);
WaveData companion_solution(const WaveData& data);

// Profile index window for horizon T: [-(T+R)-4h, (T+R)+4h] in steps of h.
std::pair<long, long> profile_window(const RadialGrid& grid, double horizon);

// W_s[c](k h), W_c[c](k h) for k in [k_min, k_max] (periodic mode sums)
Profile profile_sine(const SpectralField& c, long k_min, long k_max);
Profile profile_cosine(const SpectralField& c, long k_min, long k_max);
Profile profile_sine(const SpectralField& c, double horizon);
Profile profile_cosine(const SpectralField& c, double horizon);

// W_in = W_s[f^] - W_c[rho^{-1} g^],  W_out = -W_in
std::pair<Profile, Profile> in_out_decompose(const SpectralData& data, long k_min, long k_max);
std::pair<Profile, Profile> in_out_decompose(const SpectralData& data, double horizon);
std::pair<Profile, Profile> in_out_decompose(const WaveData& data, double horizon);

// F(t, r) = (W_in(t + r) + W_out(t - r)) / r
RadialField reconstruct(const Profile& w_in, const Profile& w_out, double t, const RadialGrid& grid);

// Both equal d_tau W_in = W_c[rho f^] + W_s[g^], so that
//   d_r F = -F/r + (w_out_grad(t - r) + w_in_grad(t + r)) / r
std::pair<Profile, Profile> gradient_profiles(const SpectralData& data, long k_min, long k_max);
std::pair<Profile, Profile> gradient_profiles(const SpectralData& data, double horizon);

// (int |W|^p dtau)^{1/p} by trapezoid over the samples; p = inf gives the max
double profile_norm(const Profile& w, double p);

// Free wave on grid-aligned times t_n = n h, built from its incoming profile:
//   w(t_n, r_j) = W_in[n + j] - W_in[n - j]
class FreeWave {
 public:
  FreeWave(const SpectralData& data, long n_min, long n_max, int j_max);
  // u(t_n, r_j), j = 1..j_max
  void field(long n, double* u) const;
  int j_max() const { return j_max_; }
  double spacing() const { return h_; }

 private:
  Profile w_in_;
  long k0_;
  int j_max_;
  double h_;
};

}  // namespace rnlw
