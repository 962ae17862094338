#pragma once

#include <cstdint>
#include <vector>

namespace rnlw {

struct RadialGrid {
  double radius_max = 0.0;  // R
  int point_count = 0;      // N_r, power of two

  RadialGrid() = default;
  RadialGrid(double R, int n);  // throws GridError

  double spacing() const { return radius_max / point_count; }
  int size() const { return point_count - 1; }            // interior nodes = modes
  double r(int j) const { return j * spacing(); }          // j = 1..N-1
  double rho(int m) const;                                 // m = 1..N-1
  double nyquist() const;
  bool operator==(const RadialGrid& o) const {
    return radius_max == o.radius_max && point_count == o.point_count;
  }
};

// u(r_j) stored at index j-1.
struct RadialField {
  RadialGrid grid;
  std::vector<double> values;

  RadialField() = default;
  explicit RadialField(const RadialGrid& g) : grid(g), values(g.size(), 0.0) {}
  RadialField(const RadialGrid& g, std::vector<double> v);

  std::vector<double> reduced() const;  // w_j = r_j u_j
  static RadialField from_reduced(const RadialGrid& g, const std::vector<double>& w);
  bool finite() const;
};

// c_m stored at index m-1; see constants.hpp for the normalization.
struct SpectralField {
  RadialGrid grid;
  std::vector<double> coefficients;

  SpectralField() = default;
  explicit SpectralField(const RadialGrid& g) : grid(g), coefficients(g.size(), 0.0) {}
  SpectralField(const RadialGrid& g, std::vector<double> c);
};

struct BandSpec {
  enum class Kind { Annulus, Dyadic, SharpLow, SharpHigh };
  Kind kind = Kind::Annulus;
  double a1 = 0.0, a2 = 0.0;  // annulus [a1, a2)
  double L = 1.0;             // dyadic shell
  double N0 = 64.0;           // cutoff

  static BandSpec annulus(double a1, double a2);
  static BandSpec dyadic(double L);
  static BandSpec sharp_low(double N0);
  static BandSpec sharp_high(double N0);
};

SpectralField forward_transform(const RadialField& u);
RadialField inverse_transform(const SpectralField& c);

// smooth bump: 1 on [0,1], 0 on [2,inf)
double lp_bump(double x);
double band_symbol(const BandSpec& b, double rho);
SpectralField apply_band(const SpectralField& c, const BandSpec& b);
// dyadic shells L = 1, 2, 4, ... needed to cover the grid's frequencies
std::vector<double> dyadic_ladder(const RadialGrid& g);

SpectralField fractional_derivative(const SpectralField& c, double s);

double weighted_norm(const RadialField& u, double alpha, double p);
// same, on raw u samples u_1..u_n of a grid with spacing h (n may be a prefix)
double weighted_norm_samples(const double* u, int n, double h, double alpha, double p);

double sobolev_norm(const SpectralField& c, double s, bool homogeneous);
double l2_norm(const SpectralField& c);

// d_r w at r = 0, fourth order one-sided, w_0 = 0 implied
double origin_value(const std::vector<double>& w, double h);

// d_r w at the nodes, spectrally
std::vector<double> radial_derivative(const SpectralField& c);

// |u|_{L^2(r > frac R)} / |u|_{L^2}
double tail_fraction(const RadialField& u, double frac = 0.9);
void check_domain(const RadialField& u, double tol = 1e-8);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);
RadialField operator+(const RadialField& a, const RadialField& b);
RadialField operator-(const RadialField& a, const RadialField& b);

double max_abs(const std::vector<double>& v);

}  // namespace rnlw
