#include "rnlw/radial_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rnlw/constants.hpp"
#include "rnlw/errors.hpp"
#include "rnlw/quadrature.hpp"
#include "rnlw/transforms.hpp"

namespace rnlw {

RadialGrid::RadialGrid(double R, int n) : radius_max(R), point_count(n) {
  if (!(R > 0.0) || !std::isfinite(R)) throw GridError("radius must be positive");
  if (n < 8 || (n & (n - 1)) != 0) throw GridError("point count must be a power of two >= 8");
}

double RadialGrid::rho(int m) const { return m * constants::pi / radius_max; }
double RadialGrid::nyquist() const { return rho(point_count - 1); }

RadialField::RadialField(const RadialGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != g.size()) throw GridError("field size does not match grid");
}

std::vector<double> RadialField::reduced() const {
  std::vector<double> w(values.size());
  const double h = grid.spacing();
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = (j + 1) * h * values[j];
  return w;
}

RadialField RadialField::from_reduced(const RadialGrid& g, const std::vector<double>& w) {
  RadialField u(g);
  const double h = g.spacing();
  for (std::size_t j = 0; j < w.size(); ++j) u.values[j] = w[j] / ((j + 1) * h);
  return u;
}

bool RadialField::finite() const {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

SpectralField::SpectralField(const RadialGrid& g, std::vector<double> c) : grid(g), coefficients(std::move(c)) {
  if (static_cast<int>(coefficients.size()) != g.size()) throw GridError("coefficient count does not match grid");
}

BandSpec BandSpec::annulus(double a1, double a2) {
  BandSpec b;
  b.kind = Kind::Annulus;
  b.a1 = a1;
  b.a2 = a2;
  return b;
}
BandSpec BandSpec::dyadic(double L) {
  BandSpec b;
  b.kind = Kind::Dyadic;
  b.L = L;
  return b;
}
BandSpec BandSpec::sharp_low(double N0) {
  BandSpec b;
  b.kind = Kind::SharpLow;
  b.N0 = N0;
  return b;
}
BandSpec BandSpec::sharp_high(double N0) {
  BandSpec b;
  b.kind = Kind::SharpHigh;
  b.N0 = N0;
  return b;
}

SpectralField forward_transform(const RadialField& u) {
  SpectralField c(u.grid);
  const auto w = u.reduced();
  fft::sine_analysis(std::span<const double>(w), std::span<double>(c.coefficients));
  return c;
}

RadialField inverse_transform(const SpectralField& c) {
  std::vector<double> w(c.coefficients.size());
  fft::sine_synthesis(std::span<const double>(c.coefficients), std::span<double>(w));
  return RadialField::from_reduced(c.grid, w);
}

double lp_bump(double x) {
  x = std::abs(x);
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = psi(2.0 - x), b = psi(x - 1.0);
  return a / (a + b);
}

double band_symbol(const BandSpec& b, double rho) {
  switch (b.kind) {
    case BandSpec::Kind::Annulus:
      return (rho >= b.a1 && rho < b.a2) ? 1.0 : 0.0;
    case BandSpec::Kind::Dyadic:
      if (b.L <= 1.0) return lp_bump(rho);
      return lp_bump(rho / b.L) - lp_bump(2.0 * rho / b.L);
    case BandSpec::Kind::SharpLow:
      return rho <= b.N0 ? 1.0 : 0.0;
    case BandSpec::Kind::SharpHigh:
      return rho > b.N0 ? 1.0 : 0.0;
  }
  return 0.0;
}

SpectralField apply_band(const SpectralField& c, const BandSpec& b) {
  SpectralField out(c.grid);
  for (int m = 1; m <= c.grid.size(); ++m)
    out.coefficients[m - 1] = band_symbol(b, c.grid.rho(m)) * c.coefficients[m - 1];
  return out;
}

std::vector<double> dyadic_ladder(const RadialGrid& g) {
  std::vector<double> L{1.0};
  while (L.back() < g.nyquist()) L.push_back(2.0 * L.back());
  return L;
}

SpectralField fractional_derivative(const SpectralField& c, double s) {
  SpectralField out(c.grid);
  for (int m = 1; m <= c.grid.size(); ++m)
    out.coefficients[m - 1] = std::pow(c.grid.rho(m), s) * c.coefficients[m - 1];
  return out;
}

double weighted_norm_samples(const double* u, int n, double h, double alpha, double p) {
  if (std::isinf(p)) {
    if (alpha < 0.0) throw DivergentWeight("alpha must be >= 0 for p = inf");
    double m = 0.0;
    for (int j = 1; j <= n; ++j) m = std::max(m, std::pow(j * h, alpha) * std::abs(u[j - 1]));
    return m;
  }
  if (p < 1.0) throw DivergentWeight("p must be >= 1");
  const double beta = alpha * p + 2.0;
  if (beta <= -1.0) throw DivergentWeight("alpha p + 2 <= -1, not integrable at the origin");
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) g[j] = std::pow(std::abs(u[j]), p);
  const double I = constants::four_pi * quad::radial_integral(beta, g.data(), n, h);
  return std::pow(std::max(I, 0.0), 1.0 / p);
}

double weighted_norm(const RadialField& u, double alpha, double p) {
  return weighted_norm_samples(u.values.data(), u.grid.size(), u.grid.spacing(), alpha, p);
}

double sobolev_norm(const SpectralField& c, double s, bool homogeneous) {
  double acc = 0.0;
  for (int m = 1; m <= c.grid.size(); ++m) {
    const double rho = c.grid.rho(m);
    const double wgt = homogeneous ? std::pow(rho, 2.0 * s) : std::pow(1.0 + rho * rho, s);
    acc += wgt * c.coefficients[m - 1] * c.coefficients[m - 1];
  }
  return std::sqrt(constants::parseval_factor(c.grid.radius_max) * acc);
}

double l2_norm(const SpectralField& c) { return sobolev_norm(c, 0.0, true); }

double origin_value(const std::vector<double>& w, double h) {
  return (48.0 * w[0] - 36.0 * w[1] + 16.0 * w[2] - 3.0 * w[3]) / (12.0 * h);
}

std::vector<double> radial_derivative(const SpectralField& c) {
  const int n = c.grid.size();
  std::vector<double> a(n), y(n + 2);
  for (int m = 1; m <= n; ++m) a[m - 1] = c.grid.rho(m) * c.coefficients[m - 1];
  fft::cosine_synthesis(std::span<const double>(a), std::span<double>(y));
  return std::vector<double>(y.begin() + 1, y.begin() + 1 + n);
}

double tail_fraction(const RadialField& u, double frac) {
  const auto w = u.reduced();
  double tot = 0.0, tail = 0.0;
  for (int j = 1; j <= u.grid.size(); ++j) {
    const double x = w[j - 1] * w[j - 1];
    tot += x;
    if (u.grid.r(j) > frac * u.grid.radius_max) tail += x;
  }
  return tot > 0.0 ? std::sqrt(tail / tot) : 0.0;
}

void check_domain(const RadialField& u, double tol) {
  const double f = tail_fraction(u);
  if (f >= tol) throw DomainOverflow("tail mass fraction " + std::to_string(f) + " beyond 0.9 R");
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  SpectralField out(a.grid);
  for (std::size_t i = 0; i < out.coefficients.size(); ++i) out.coefficients[i] = a.coefficients[i] + b.coefficients[i];
  return out;
}
SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  SpectralField out(a.grid);
  for (std::size_t i = 0; i < out.coefficients.size(); ++i) out.coefficients[i] = a.coefficients[i] - b.coefficients[i];
  return out;
}
SpectralField operator*(double s, const SpectralField& a) {
  SpectralField out(a.grid);
  for (std::size_t i = 0; i < out.coefficients.size(); ++i) out.coefficients[i] = s * a.coefficients[i];
  return out;
}
RadialField operator+(const RadialField& a, const RadialField& b) {
  RadialField out(a.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] + b.values[i];
  return out;
}
RadialField operator-(const RadialField& a, const RadialField& b) {
  RadialField out(a.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace rnlw
