#include "rnlw/randomize.hpp"

#include <cmath>
#include <vector>

#include "rnlw/constants.hpp"
#include "rnlw/errors.hpp"

namespace rnlw {

void RandomizationParams::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (shell_max < 1) throw ConfigError("shell_max must be >= 1");
  if (!(cutoff > 0.0)) throw ConfigError("cutoff must be positive");
}

WaveData::WaveData(RadialField f, RadialField g) : position(std::move(f)), velocity(std::move(g)) {
  if (!(position.grid == velocity.grid)) throw GridError("position and velocity grids differ");
}

SpectralData to_spectral(const WaveData& d) {
  return SpectralData(forward_transform(d.position), forward_transform(d.velocity));
}

WaveData to_physical(const SpectralData& d) {
  return WaveData(inverse_transform(d.f), inverse_transform(d.g));
}

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_open(std::uint64_t bits) {  // (0, 1]
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double counter_gaussian(std::uint64_t seed, std::uint64_t trial, std::uint64_t k, std::uint64_t component) {
  std::uint64_t key = mix(seed);
  key = mix(key ^ trial);
  key = mix(key ^ (k * 4 + component));
  const double u1 = unit_open(mix(key ^ 0x243f6a8885a308d3ULL));
  const double u2 = unit_open(mix(key ^ 0x13198a2e03707344ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * constants::pi * u2);
}

long shell_index(double rho, double gamma) {
  if (rho <= 0.0) return 0;
  long k = static_cast<long>(std::floor(std::pow(rho, 1.0 / gamma)));
  while (std::pow(static_cast<double>(k + 1), gamma) <= rho) ++k;
  while (k > 0 && std::pow(static_cast<double>(k), gamma) > rho) --k;
  return k;
}

SpectralData sample_randomization(const SpectralData& data, const RandomizationParams& p, std::uint64_t trial,
                                  const GaussianSource& source) {
  p.validate();
  const auto& grid = data.grid();
  const double top = std::pow(static_cast<double>(p.shell_max), p.gamma);
  double total = 0.0, lost = 0.0;
  for (int m = 1; m <= grid.size(); ++m) {
    const double e = data.f.coefficients[m - 1] * data.f.coefficients[m - 1] +
                     data.g.coefficients[m - 1] * data.g.coefficients[m - 1];
    total += e;
    if (grid.rho(m) >= top) lost += e;
  }
  if (total > 0.0 && lost > 1e-8 * total)
    throw TruncationLoss("relative mass " + std::to_string(lost / total) + " above K_max^gamma");

  std::vector<double> gf(p.shell_max), gg(p.shell_max);
  for (int k = 0; k < p.shell_max; ++k) {
    gf[k] = source(p.seed, trial, k, 0);
    gg[k] = source(p.seed, trial, k, 1);
  }
  SpectralData out(grid);
  for (int m = 1; m <= grid.size(); ++m) {
    const long k = shell_index(grid.rho(m), p.gamma);
    if (k >= p.shell_max) continue;
    out.f.coefficients[m - 1] = gf[k] * data.f.coefficients[m - 1];
    out.g.coefficients[m - 1] = gg[k] * data.g.coefficients[m - 1];
  }
  return out;
}

WaveData sample_randomization(const WaveData& data, const RandomizationParams& p, std::uint64_t trial,
                              const GaussianSource& source) {
  return to_physical(sample_randomization(to_spectral(data), p, trial, source));
}

std::pair<SpectralData, SpectralData> split_frequency(const SpectralData& data, double N0) {
  const auto lo = BandSpec::sharp_low(N0);
  const auto hi = BandSpec::sharp_high(N0);
  return {SpectralData(apply_band(data.f, lo), apply_band(data.g, lo)),
          SpectralData(apply_band(data.f, hi), apply_band(data.g, hi))};
}

std::pair<WaveData, WaveData> split_frequency(const WaveData& data, double N0) {
  auto [lo, hi] = split_frequency(to_spectral(data), N0);
  return {to_physical(lo), to_physical(hi)};
}

namespace {

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  return psi(x) / (psi(x) + psi(1.0 - x));
}

}  // namespace

SpectralField shell_compatible_profile(const RadialGrid& grid, double gamma, double lo, double hi) {
  SpectralField c(grid);
  const double taper = std::min(1.0, 0.25 * (hi - lo));
  for (int m = 1; m <= grid.size(); ++m) {
    const double rho = grid.rho(m);
    if (rho <= lo || rho >= hi) continue;
    const double env = smooth_step((rho - lo) / taper) * smooth_step((hi - rho) / taper);
    const double s = std::sin(constants::pi * std::pow(rho, 1.0 / gamma));
    c.coefficients[m - 1] = env * std::pow(s, 6);
  }
  return c;
}

SpectralField normalized(const SpectralField& c) {
  const double n = l2_norm(c);
  return n > 0.0 ? (1.0 / n) * c : c;
}

}  // namespace rnlw
