#include "rnlw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rnlw::quad {

void even_origin_fit(const double* g, double h, double& g0, double& g2) {
  // g = a0 + a1 x + a2 x^2 + a3 x^3 in x = r^2, nodes x = 1, 4, 9, 16 (units h^2)
  const double x[4] = {1.0, 4.0, 9.0, 16.0};
  g0 = 0.0;
  double d1 = 0.0;  // dg/dx at x = 0
  for (int i = 0; i < 4; ++i) {
    double denom = 1.0, num0 = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != i) {
        denom *= x[i] - x[k];
        num0 *= -x[k];
      }
    // derivative of prod_{k != i} (x - x_k) at 0
    double dnum = 0.0;
    for (int l = 0; l < 4; ++l) {
      if (l == i) continue;
      double p = 1.0;
      for (int k = 0; k < 4; ++k)
        if (k != i && k != l) p *= -x[k];
      dnum += p;
    }
    g0 += g[i] * num0 / denom;
    d1 += g[i] * dnum / denom;
  }
  g2 = 2.0 * d1 / (h * h);
}

double radial_integral(double beta, const double* g, int n, double h) {
  double s = 0.0;
  const double rb = std::round(beta);
  if (std::abs(beta - rb) < 1e-14 && rb >= 0.0 && rb <= 8.0) {
    const int k = static_cast<int>(rb);
    for (int j = 1; j <= n; ++j) {
      double w = 1.0;
      for (int i = 0; i < k; ++i) w *= j * h;
      s += w * g[j - 1];
    }
  } else {
    for (int j = 1; j <= n; ++j) s += std::pow(j * h, beta) * g[j - 1];
  }
  s *= h;
  // r^beta g is smooth and even only for even beta >= 2; beta = 0 keeps the endpoint term
  const bool even_int = std::abs(beta - rb) < 1e-14 && rb >= 2.0 && static_cast<long>(rb) % 2 == 0;
  if (even_int || n < 4) return s;
  double g0, g2;
  even_origin_fit(g, h, g0, g2);
  s -= std::riemann_zeta(-beta) * std::pow(h, beta + 1.0) * g0;
  s -= std::riemann_zeta(-beta - 2.0) * std::pow(h, beta + 3.0) * 0.5 * g2;
  return s;
}

namespace {

double cubic_local(double fm1, double f0, double f1, double f2, double t) {
  return -fm1 * t * (t - 1) * (t - 2) / 6.0 + f0 * (t + 1) * (t - 1) * (t - 2) / 2.0 -
         f1 * (t + 1) * t * (t - 2) / 2.0 + f2 * (t + 1) * t * (t - 1) / 6.0;
}

}  // namespace

double lagrange4(const double* y, int n, double s) {
  if (n < 4) throw std::invalid_argument("lagrange4 needs 4 samples");
  int i = static_cast<int>(std::floor(s));
  i = std::clamp(i, 1, n - 3);
  const double t = s - i;
  return cubic_local(y[i - 1], y[i], y[i + 1], y[i + 2], t);
}

double cumulative_integral(const std::vector<double>& f, double h, double x) {
  const int n = static_cast<int>(f.size()) - 1;
  if (x <= 0.0) return 0.0;
  if (x > n * h * (1 + 1e-14)) throw std::out_of_range("cumulative_integral: x beyond grid");
  int k = std::min(static_cast<int>(std::floor(x / h)), n);
  auto at = [&](int j) { return f[std::abs(j)]; };  // even extension
  double s = 0.0;
  if (k > 0) {
    for (int j = 1; j < k; ++j) s += f[j];
    s += 0.5 * (f[0] + f[k]);
    const double d1 = at(k) - at(k - 1);
    const double d2 = at(k) - 2 * at(k - 1) + at(k - 2);
    const double d3 = at(k) - 3 * at(k - 1) + 3 * at(k - 2) - at(k - 3);
    s -= d1 / 12.0 + d2 / 24.0 + 19.0 * d3 / 720.0;
    s *= h;
  }
  const double frac = x / h - k;
  if (frac > 0.0) {
    int i = std::min(k, n - 2);
    const double t0 = k - i;  // offset of the cell start inside the stencil
    const double a = t0, b = t0 + frac;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a) / std::sqrt(3.0);
    auto p = [&](double t) { return cubic_local(at(i - 1), at(i), at(i + 1), at(i + 2), t); };
    s += h * (b - a) * 0.5 * (p(mid - half) + p(mid + half));
  }
  return s;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

}  // namespace rnlw::quad
