#include "rnlw/linear_wave.hpp"

#include <cmath>

#include "rnlw/errors.hpp"
#include "rnlw/quadrature.hpp"
#include "rnlw/transforms.hpp"

namespace rnlw {

double Profile::operator()(double tau) const {
  const long n = static_cast<long>(samples.size());
  const double s = (tau - tau_min) / step;
  if (!(s >= -1e-9 && s <= n - 1 + 1e-9))
    throw RangeExceeded("tau = " + std::to_string(tau) + " outside [" + std::to_string(tau_min) + ", " +
                        std::to_string(tau_max()) + "]");
  const double k = std::round(s);
  if (std::abs(s - k) < 1e-9) return samples[static_cast<std::size_t>(k)];
  return quad::lagrange4(samples.data(), static_cast<int>(n), s);
}

Profile Profile::operator-() const {
  Profile p = *this;
  for (auto& x : p.samples) x = -x;
  return p;
}

SpectralData propagate(const SpectralData& data, double t) {
  const auto& grid = data.grid();
  SpectralData out(grid);
  for (int m = 1; m <= grid.size(); ++m) {
    const double rho = grid.rho(m), c = std::cos(rho * t), s = std::sin(rho * t);
    const double f = data.f.coefficients[m - 1], g = data.g.coefficients[m - 1];
    out.f.coefficients[m - 1] = f * c + g * s / rho;
    out.g.coefficients[m - 1] = -f * rho * s + g * c;
  }
  return out;
}

WaveState linear_solution(const WaveData& data, double t) {
  const auto s = propagate(to_spectral(data), t);
  return WaveState{t, inverse_transform(s.f), inverse_transform(s.g)};
}

SpectralData companion_solution(const SpectralData& data) {
  return SpectralData(fractional_derivative(data.g, -1.0), -1.0 * fractional_derivative(data.f, 1.0));
}

WaveData companion_solution(const WaveData& data) { return to_physical(companion_solution(to_spectral(data))); }

std::pair<long, long> profile_window(const RadialGrid& grid, double horizon) {
  const long half = static_cast<long>(std::ceil((horizon + grid.radius_max) / grid.spacing())) + 4;
  return {-half, half};
}

namespace {

// One period of 1/2 sum c_m sin / cos (pi m k / N) for k = 0..N.
std::vector<double> base_period(const SpectralField& c, bool sine) {
  const int n = c.grid.size();
  std::vector<double> base(n + 2, 0.0);
  if (sine) {
    std::vector<double> w(n);
    fft::sine_synthesis(std::span<const double>(c.coefficients), std::span<double>(w));
    for (int k = 1; k <= n; ++k) base[k] = 0.5 * w[k - 1];
  } else {
    fft::cosine_synthesis(std::span<const double>(c.coefficients), std::span<double>(base));
    for (auto& x : base) x *= 0.5;
  }
  return base;
}

Profile tile(const std::vector<double>& base, bool odd, long k_min, long k_max, double h) {
  const long N = static_cast<long>(base.size()) - 1;
  Profile p;
  p.tau_min = k_min * h;
  p.step = h;
  p.samples.resize(static_cast<std::size_t>(k_max - k_min + 1));
  for (long k = k_min; k <= k_max; ++k) {
    long q = ((k % (2 * N)) + 2 * N) % (2 * N);
    double v;
    if (q <= N)
      v = base[q];
    else
      v = odd ? -base[2 * N - q] : base[2 * N - q];
    p.samples[static_cast<std::size_t>(k - k_min)] = v;
  }
  return p;
}

Profile combine(const Profile& a, double sa, const Profile& b, double sb) {
  Profile p = a;
  for (std::size_t i = 0; i < p.samples.size(); ++i) p.samples[i] = sa * a.samples[i] + sb * b.samples[i];
  return p;
}

}  // namespace

Profile profile_sine(const SpectralField& c, long k_min, long k_max) {
  return tile(base_period(c, true), true, k_min, k_max, c.grid.spacing());
}

Profile profile_cosine(const SpectralField& c, long k_min, long k_max) {
  return tile(base_period(c, false), false, k_min, k_max, c.grid.spacing());
}

Profile profile_sine(const SpectralField& c, double horizon) {
  auto [a, b] = profile_window(c.grid, horizon);
  return profile_sine(c, a, b);
}

Profile profile_cosine(const SpectralField& c, double horizon) {
  auto [a, b] = profile_window(c.grid, horizon);
  return profile_cosine(c, a, b);
}

std::pair<Profile, Profile> in_out_decompose(const SpectralData& data, long k_min, long k_max) {
  const auto ws = profile_sine(data.f, k_min, k_max);
  const auto wc = profile_cosine(fractional_derivative(data.g, -1.0), k_min, k_max);
  Profile w_in = combine(ws, 1.0, wc, -1.0);
  return {w_in, -w_in};
}

std::pair<Profile, Profile> in_out_decompose(const SpectralData& data, double horizon) {
  auto [a, b] = profile_window(data.grid(), horizon);
  return in_out_decompose(data, a, b);
}

std::pair<Profile, Profile> in_out_decompose(const WaveData& data, double horizon) {
  return in_out_decompose(to_spectral(data), horizon);
}

RadialField reconstruct(const Profile& w_in, const Profile& w_out, double t, const RadialGrid& grid) {
  RadialField u(grid);
  for (int j = 1; j <= grid.size(); ++j) {
    const double r = grid.r(j);
    u.values[j - 1] = (w_in(t + r) + w_out(t - r)) / r;
  }
  return u;
}

std::pair<Profile, Profile> gradient_profiles(const SpectralData& data, long k_min, long k_max) {
  const auto wc = profile_cosine(fractional_derivative(data.f, 1.0), k_min, k_max);
  const auto ws = profile_sine(data.g, k_min, k_max);
  Profile g = combine(wc, 1.0, ws, 1.0);
  return {g, g};
}

std::pair<Profile, Profile> gradient_profiles(const SpectralData& data, double horizon) {
  auto [a, b] = profile_window(data.grid(), horizon);
  return gradient_profiles(data, a, b);
}

double profile_norm(const Profile& w, double p) {
  if (std::isinf(p)) return max_abs(w.samples);
  const auto& s = w.samples;
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double wt = (i == 0 || i + 1 == s.size()) ? 0.5 : 1.0;
    acc += wt * std::pow(std::abs(s[i]), p);
  }
  return std::pow(acc * w.step, 1.0 / p);
}

FreeWave::FreeWave(const SpectralData& data, long n_min, long n_max, int j_max)
    : j_max_(j_max), h_(data.grid().spacing()) {
  k0_ = n_min - j_max;
  w_in_ = in_out_decompose(data, k0_, n_max + j_max).first;
}

void FreeWave::field(long n, double* u) const {
  const double* W = w_in_.samples.data();
  const long base = n - k0_;
  for (int j = 1; j <= j_max_; ++j) u[j - 1] = (W[base + j] - W[base - j]) / (j * h_);
}

}  // namespace rnlw
