#pragma once

#include <vector>

namespace rnlw::quad {

// int_0^inf r^beta g(r) dr from g_j = g(j h), j = 1..n, g even and smooth.
// Trapezoid plus the generalized Euler-Maclaurin (Navot) origin terms, which
// vanish for even integer beta >= 2.
double radial_integral(double beta, const double* g, int n, double h);
inline double radial_integral(double beta, const std::vector<double>& g, double h) {
  return radial_integral(beta, g.data(), static_cast<int>(g.size()), h);
}

// g(0) and g''(0) of an even function from its first four node samples
void even_origin_fit(const double* g, double h, double& g0, double& g2);

// int_0^x f(r) dr for f sampled at r_j = j h, j = 0..n (f[0] = f(0)); f is even
// about 0.  Corrected trapezoid over whole cells, cubic on the partial cell.
double cumulative_integral(const std::vector<double>& f, double h, double x);

// 4-point Lagrange value of samples y_k = y(k h) (k = 0..n-1) at s = x/h.
double lagrange4(const double* y, int n, double s);

// Trapezoid in time over possibly nonuniform nodes.
double trapezoid(const std::vector<double>& t, const std::vector<double>& f);

}  // namespace rnlw::quad
