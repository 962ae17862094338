#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "rnlw/radial_spectral.hpp"

namespace rnlw {

struct RandomizationParams {
  double gamma = 1.0;
  int shell_max = 64;     // K_max
  std::uint64_t seed = 1;
  double cutoff = 64.0;   // N0
  void validate() const;
};

struct WaveData {
  RadialField position;  // f
  RadialField velocity;  // g

  WaveData() = default;
  WaveData(RadialField f, RadialField g);
  explicit WaveData(const RadialGrid& grid) : position(grid), velocity(grid) {}
  const RadialGrid& grid() const { return position.grid; }
};

// Same pair held as sine coefficients; most of the library works on this.
struct SpectralData {
  SpectralField f, g;
  SpectralData() = default;
  SpectralData(SpectralField f_, SpectralField g_) : f(std::move(f_)), g(std::move(g_)) {}
  explicit SpectralData(const RadialGrid& grid) : f(grid), g(grid) {}
  const RadialGrid& grid() const { return f.grid; }
};

SpectralData to_spectral(const WaveData& d);
WaveData to_physical(const SpectralData& d);

// counter-based standard normal; pure function of its key
double counter_gaussian(std::uint64_t seed, std::uint64_t trial, std::uint64_t k, std::uint64_t component);

using GaussianSource = std::function<double(std::uint64_t seed, std::uint64_t trial, std::uint64_t k,
                                            std::uint64_t component)>;

// k with k^gamma <= rho < (k+1)^gamma
long shell_index(double rho, double gamma);

SpectralData sample_randomization(const SpectralData& data, const RandomizationParams& p, std::uint64_t trial,
                                  const GaussianSource& source = counter_gaussian);
WaveData sample_randomization(const WaveData& data, const RandomizationParams& p, std::uint64_t trial,
                              const GaussianSource& source = counter_gaussian);

std::pair<SpectralData, SpectralData> split_frequency(const SpectralData& data, double N0);
std::pair<WaveData, WaveData> split_frequency(const WaveData& data, double N0);

// Smooth spectral profile whose zeros sit on every shell edge k^gamma:
//   c(rho) ~ envelope(rho) sin^6(pi rho^{1/gamma}),  envelope smooth on [lo, hi]
// The sixth-order zeros keep each annular piece spatially localized.
SpectralField shell_compatible_profile(const RadialGrid& grid, double gamma, double lo, double hi);

// rescale to unit L^2(R^3) norm
SpectralField normalized(const SpectralField& c);

}  // namespace rnlw
