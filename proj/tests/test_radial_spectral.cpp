#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "rnlw/constants.hpp"
#include "rnlw/errors.hpp"
#include "rnlw/quadrature.hpp"
#include "rnlw/radial_spectral.hpp"
#include "rnlw/transforms.hpp"

using namespace rnlw;

namespace {

const double kPi = constants::pi;

RadialField sample(const RadialGrid& g, auto&& u) {
  RadialField f(g);
  for (int j = 1; j <= g.size(); ++j) f.values[j - 1] = u(g.r(j));
  return f;
}

RadialField gaussian(const RadialGrid& g) {
  return sample(g, [](double r) { return std::exp(-r * r); });
}

double rel_sup(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e = std::max(e, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return e / s;
}

}  // namespace

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(RadialGrid(0.0, 64), GridError);
  CHECK_THROWS_AS(RadialGrid(-1.0, 64), GridError);
  CHECK_THROWS_AS(RadialGrid(8.0, 100), GridError);
  CHECK_THROWS_AS(RadialGrid(8.0, 4), GridError);
  RadialGrid g(8.0, 64);
  CHECK(g.size() == 63);
  CHECK(g.spacing() == doctest::Approx(0.125));
  CHECK(g.rho(3) == doctest::Approx(3 * kPi / 8));
  CHECK_THROWS_AS(RadialField(g, std::vector<double>(10)), GridError);
}

TEST_CASE("raw sine transforms invert and match the direct sums") {
  const int n = 63;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<double> w(n);
  for (auto& x : w) x = nd(rng);
  const auto c = fft::sine_analysis(w);
  const int N = n + 1;
  for (int m : {1, 17, 63}) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += w[j - 1] * std::sin(kPi * m * j / N);
    CHECK(c[m - 1] == doctest::Approx(2.0 * s / N).epsilon(1e-12));
  }
  CHECK(rel_sup(fft::sine_synthesis(c), w) < 1e-13);
}

TEST_CASE("convolution matches the direct sum") {
  std::vector<double> a{1, 2, -1, 0.5}, b{3, -2, 4};
  const auto c = fft::convolve(a, b);
  REQUIRE(c.size() == 6);
  for (std::size_t k = 0; k < c.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (k >= i && k - i < b.size()) s += a[i] * b[k - i];
    CHECK(c[k] == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("round trip holds for random fields at several sizes") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int n : {16, 256, 4096}) {
    RadialGrid g(10.0, n);
    RadialField u(g);
    for (auto& x : u.values) x = nd(rng);
    const auto back = inverse_transform(forward_transform(u));
    CHECK(rel_sup(back.values, u.values) < 1e-12);
  }
}

TEST_CASE("Gaussian coefficients match the closed-form Fourier transform") {
  // exp(-r^2) has u^(rho) = 2^{-3/2} exp(-rho^2/4)
  RadialGrid g(32.0, 2048);
  const auto c = forward_transform(gaussian(g));
  std::vector<double> exact(g.size());
  for (int m = 1; m <= g.size(); ++m) {
    const double rho = g.rho(m);
    exact[m - 1] = constants::coeff_per_fourier(g.radius_max) * rho * std::pow(2.0, -1.5) * std::exp(-rho * rho / 4);
  }
  CHECK(rel_sup(c.coefficients, exact) < 1e-12);
}

TEST_CASE("oscillating profile matches Gauss-Kronrod quadrature") {
  auto u = [](double r) { return std::exp(-r * r / 2) * std::cos(2 * r); };
  RadialGrid g(40.0, 4096);
  const auto c = forward_transform(sample(g, u));
  double worst = 0.0, sup = 0.0;
  for (int m = 1; m <= g.size(); m += 37) {
    const double rho = g.rho(m);
    if (rho > 12) break;
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double r) { return std::sin(r * rho) * u(r) * r; }, 0.0, 12.0, 15, 1e-14);
    const double uhat = std::sqrt(2.0 / kPi) / rho * I;
    const double ref = constants::coeff_per_fourier(g.radius_max) * rho * uhat;
    worst = std::max(worst, std::abs(c.coefficients[m - 1] - ref));
    sup = std::max(sup, std::abs(ref));
  }
  CHECK(worst / sup < 1e-10);
}

TEST_CASE("Parseval and Sobolev norms of the Gaussian") {
  RadialGrid g(32.0, 4096);
  const auto u = gaussian(g);
  const auto c = forward_transform(u);
  // |u|_2^2 = (pi/2) sqrt(pi/2), |grad u|_2^2 = (3 pi/2) sqrt(pi/2)
  const double l2sq = (kPi / 2) * std::sqrt(kPi / 2);
  CHECK(l2_norm(c) * l2_norm(c) == doctest::Approx(l2sq).epsilon(1e-12));
  CHECK(sobolev_norm(c, 0.0, true) == doctest::Approx(l2_norm(c)).epsilon(1e-14));
  const double h1 = sobolev_norm(c, 1.0, true);
  CHECK(h1 * h1 == doctest::Approx(1.5 * kPi * std::sqrt(kPi / 2)).epsilon(1e-12));
  // node-side Parseval
  double s = 0.0;
  for (double w : u.reduced()) s += w * w;
  CHECK(constants::four_pi * g.spacing() * s == doctest::Approx(l2sq).epsilon(1e-12));
  // inhomogeneous norm dominates the homogeneous one
  CHECK(sobolev_norm(c, 1.0, false) > h1);
}

TEST_CASE("fractional derivatives compose and reproduce the Laplacian") {
  RadialGrid g(32.0, 4096);
  const auto c = forward_transform(gaussian(g));
  const auto back = fractional_derivative(fractional_derivative(c, 0.7), -0.7);
  CHECK(rel_sup(back.coefficients, c.coefficients) < 1e-13);
  // -Laplace exp(-r^2) = (6 - 4 r^2) exp(-r^2)
  const auto lap = forward_transform(sample(g, [](double r) { return (6 - 4 * r * r) * std::exp(-r * r); }));
  CHECK(rel_sup(fractional_derivative(c, 2.0).coefficients, lap.coefficients) < 1e-11);
}

TEST_CASE("band projections") {
  RadialGrid g(16.0, 512);
  SUBCASE("bump shape") {
    CHECK(lp_bump(0.3) == 1.0);
    CHECK(lp_bump(1.0) == 1.0);
    CHECK(lp_bump(2.0) == 0.0);
    CHECK(lp_bump(-0.5) == 1.0);
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 0.01) {
      CHECK(lp_bump(x) <= prev + 1e-15);
      prev = lp_bump(x);
    }
  }
  SUBCASE("dyadic shells form a partition of unity") {
    const auto L = dyadic_ladder(g);
    CHECK(L.back() >= g.nyquist());
    for (int m = 1; m <= g.size(); ++m) {
      double s = 0.0;
      for (double l : L) s += band_symbol(BandSpec::dyadic(l), g.rho(m));
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("sharp split is exact and disjoint") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    SpectralField c(g);
    for (auto& x : c.coefficients) x = nd(rng);
    const auto lo = apply_band(c, BandSpec::sharp_low(4.0));
    const auto hi = apply_band(c, BandSpec::sharp_high(4.0));
    CHECK(rel_sup((lo + hi).coefficients, c.coefficients) == 0.0);
    for (int m = 1; m <= g.size(); ++m) CHECK(lo.coefficients[m - 1] * hi.coefficients[m - 1] == 0.0);
  }
  SUBCASE("annulus is half open") {
    const double r3 = g.rho(3);
    const auto b = BandSpec::annulus(r3, g.rho(5));
    CHECK(band_symbol(b, r3) == 1.0);
    CHECK(band_symbol(b, g.rho(4)) == 1.0);
    CHECK(band_symbol(b, g.rho(5)) == 0.0);
  }
}

TEST_CASE("weighted norms against closed forms") {
  RadialGrid g(16.0, 4096);
  const auto u = gaussian(g);
  // |u|_6^6 = (pi/6) sqrt(pi/6)
  CHECK(std::pow(weighted_norm(u, 0.0, 6.0), 6) == doctest::Approx((kPi / 6) * std::sqrt(kPi / 6)).epsilon(1e-10));
  // |x| u in L^2: 4 pi int r^4 e^{-2r^2} = (3 pi / 8) sqrt(pi/2)
  const double w1 = weighted_norm(u, 1.0, 2.0);
  CHECK(w1 * w1 == doctest::Approx(0.375 * kPi * std::sqrt(kPi / 2)).epsilon(1e-10));
  // sup r e^{-r^2} = e^{-1/2} / sqrt 2
  CHECK(weighted_norm(u, 1.0, INFINITY) == doctest::Approx(std::exp(-0.5) / std::sqrt(2.0)).epsilon(1e-5));
  // odd power of r in the integrand: |x|^{-1/2} u in L^2, 4 pi int r e^{-2 r^2} = pi
  const double wm = weighted_norm(u, -0.5, 2.0);
  CHECK(wm * wm == doctest::Approx(kPi).epsilon(1e-9));
  CHECK_THROWS_AS(weighted_norm(u, -2.0, 2.0), DivergentWeight);
  CHECK_THROWS_AS(weighted_norm(u, -1.0, INFINITY), DivergentWeight);
  CHECK_THROWS_AS(weighted_norm(u, 0.0, 0.5), DivergentWeight);
}

TEST_CASE("weighted norms scale correctly (property)") {
  RadialGrid g(16.0, 2048);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(0.1, 3.0);
  const auto u = gaussian(g);
  for (int trial = 0; trial < 8; ++trial) {
    const double lambda = ud(rng), p = 1.0 + ud(rng), alpha = ud(rng) - 0.5;
    RadialField v = u;
    for (auto& x : v.values) x *= lambda;
    CHECK(weighted_norm(v, alpha, p) == doctest::Approx(lambda * weighted_norm(u, alpha, p)).epsilon(1e-12));
  }
}

TEST_CASE("origin value and spectral radial derivative") {
  RadialGrid g(16.0, 2048);
  const auto u = gaussian(g);
  // fourth order: error drops about 16x per halving
  const double e1 = std::abs(origin_value(u.reduced(), g.spacing()) - 1.0);
  RadialGrid g2(16.0, 4096);
  const double e2 = std::abs(origin_value(gaussian(g2).reduced(), g2.spacing()) - 1.0);
  CHECK(e1 < 1e-7);
  CHECK(e1 / e2 > 12.0);
  const auto dw = radial_derivative(forward_transform(u));
  std::vector<double> exact(g.size());
  for (int j = 1; j <= g.size(); ++j) {
    const double r = g.r(j);
    exact[j - 1] = (1 - 2 * r * r) * std::exp(-r * r);
  }
  CHECK(rel_sup(dw, exact) < 1e-11);
}

TEST_CASE("domain checks see mass near the boundary") {
  RadialGrid g(16.0, 1024);
  CHECK(tail_fraction(gaussian(g)) < 1e-30);
  CHECK_NOTHROW(check_domain(gaussian(g)));
  const auto edge = sample(g, [](double r) { return std::exp(-(r - 15) * (r - 15)); });
  CHECK(tail_fraction(edge) > 0.5);
  CHECK_THROWS_AS(check_domain(edge), DomainOverflow);
}

TEST_CASE("radial quadrature with origin corrections") {
  const double h = 0.01;
  const int n = 1200;
  std::vector<double> g(n);
  for (int j = 1; j <= n; ++j) g[j - 1] = std::exp(-(j * h) * (j * h));
  // int r^beta e^{-r^2} dr = Gamma((beta+1)/2) / 2
  for (double beta : {0.0, 0.5, 1.0, 2.0, 3.0, 4.5}) {
    const double exact = boost::math::tgamma((beta + 1) / 2) / 2;
    CHECK(quad::radial_integral(beta, g, h) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("quadrature helpers") {
  const double h = 0.01;
  std::vector<double> f(801);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::exp(-(j * h) * (j * h));
  // int_0^x e^{-r^2} = sqrt(pi)/2 erf(x)
  for (double x : {0.013, 0.5, 1.2345, 3.0})
    CHECK(quad::cumulative_integral(f, h, x) == doctest::Approx(std::sqrt(kPi) / 2 * std::erf(x)).epsilon(1e-9));

  std::vector<double> cub(20);
  for (int k = 0; k < 20; ++k) cub[k] = 1 - 2.0 * k + 0.5 * k * k - 0.1 * k * k * k;
  for (double s : {3.3, 7.77, 12.01}) CHECK(quad::lagrange4(cub.data(), 20, s) == doctest::Approx(1 - 2 * s + 0.5 * s * s - 0.1 * s * s * s));

  CHECK(quad::trapezoid({0.0, 0.5, 2.0}, {1.0, 2.0, 5.0}) == doctest::Approx(0.75 + 5.25));

  double g0, g2;
  std::vector<double> e(4);
  for (int j = 1; j <= 4; ++j) e[j - 1] = std::cos(j * h);
  quad::even_origin_fit(e.data(), h, g0, g2);
  CHECK(g0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g2 == doctest::Approx(-1.0).epsilon(1e-4));
}
