#pragma once

// Normalization table. Everything spectral in this library goes through here.
//
// Grid: r_j = j h, h = R/N, j = 1..N-1.  Reduced field w = r u.
// Modes: rho_m = m pi / R, m = 1..N-1.
//
//   forward    c_m = (2/N) sum_j w_j sin(pi m j / N)
//   inverse    w_j = sum_m c_m sin(pi m j / N)
//
// Radial Fourier transform on R^3 with the (2 pi)^{-3/2} convention,
//   u^(rho) = sqrt(2/pi) / rho * int_0^inf sin(r rho) u(r) r dr,
// relates to the sine coefficients by
//   c_m = (2/R) sqrt(pi/2) rho_m u^(rho_m)            (kCoeffPerFourier)
//
//   |u|^2_{L^2(R^3)}  = 4 pi h sum_j w_j^2 = 4 pi (R/2) sum_m c_m^2
//   |u|^2_{H^s dot}   = 4 pi (R/2) sum_m rho_m^{2s} c_m^2
//   |grad u|^2_{L^2}  = 4 pi int_0^R (w_r)^2 dr
//
// Profiles (one period, tau in [-R, R)):
//   W_s[c](tau) = 1/2 sum_m c_m sin(rho_m tau)
//   W_c[c](tau) = 1/2 sum_m c_m cos(rho_m tau)
// which is exactly the Riemann sum of (2 pi)^{-1/2} int sin(tau rho) h(rho) rho drho.
//   int |W_s[c]|^2 dtau over a period = (R/4) sum c_m^2 = |f|^2_{L^2} / (8 pi)
//
// Smoothing kernel K <K tau>^{-2} has mass pi.

#include <cmath>
#include <numbers>

namespace rnlw::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi = 4.0 * std::numbers::pi;

// c_m / (rho_m u^(rho_m)), multiplied by R.
inline double coeff_per_fourier(double R) { return (2.0 / R) * std::sqrt(pi / 2.0); }

// L^2(R^3) mass per unit sum_m c_m^2.
inline double parseval_factor(double R) { return four_pi * R / 2.0; }

inline constexpr double profile_factor = 0.5;
inline constexpr double profile_plancherel = 1.0 / (8.0 * std::numbers::pi);
inline constexpr double smoothing_kernel_mass = std::numbers::pi;

}  // namespace rnlw::constants
