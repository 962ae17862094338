#include <doctest.h>

#include <cmath>
#include <random>

#include "rnlw/constants.hpp"
#include "rnlw/errors.hpp"
#include "rnlw/linear_wave.hpp"

using namespace rnlw;

namespace {

RadialField sample(const RadialGrid& g, auto&& u) {
  RadialField f(g);
  for (int j = 1; j <= g.size(); ++j) f.values[j - 1] = u(g.r(j));
  return f;
}

double rel_sup(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e = std::max(e, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return e / s;
}

double free_energy(const SpectralData& d) {
  const double a = sobolev_norm(d.f, 1.0, true), b = l2_norm(d.g);
  return 0.5 * (a * a + b * b);
}

SpectralData smooth_data(const RadialGrid& g) {
  auto f = sample(g, [](double r) { return std::exp(-r * r) * (1 + r); });
  auto v = sample(g, [](double r) { return r * r * std::exp(-2 * r * r); });
  return SpectralData(forward_transform(f), forward_transform(v));
}

}  // namespace

TEST_CASE("d'Alembert closed forms") {
  RadialGrid g(32.0, 2048);
  const double t = 3.0;
  SUBCASE("position data") {
    WaveData d(sample(g, [](double r) { return std::exp(-r * r); }), RadialField(g));
    const auto s = linear_solution(d, t);
    auto exact = sample(g, [&](double r) {
      return ((r + t) * std::exp(-(r + t) * (r + t)) + (r - t) * std::exp(-(r - t) * (r - t))) / (2 * r);
    });
    CHECK(s.time == t);
    CHECK(rel_sup(s.position.values, exact.values) < 1e-11);
  }
  SUBCASE("velocity data") {
    WaveData d(RadialField(g), sample(g, [](double r) { return std::exp(-r * r); }));
    const auto s = linear_solution(d, t);
    auto exact = sample(g, [&](double r) { return (std::exp(-(r - t) * (r - t)) - std::exp(-(r + t) * (r + t))) / (4 * r); });
    auto exact_t = sample(g, [&](double r) {
      return ((r - t) * std::exp(-(r - t) * (r - t)) + (r + t) * std::exp(-(r + t) * (r + t))) / (2 * r);
    });
    CHECK(rel_sup(s.position.values, exact.values) < 1e-11);
    CHECK(rel_sup(s.velocity.values, exact_t.values) < 1e-10);
  }
}

TEST_CASE("propagator is a group and conserves energy (property)") {
  RadialGrid g(32.0, 1024);
  const auto d = smooth_data(g);
  const double e0 = free_energy(d);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ud(-5.0, 5.0);
  for (int i = 0; i < 6; ++i) {
    const double t1 = ud(rng), t2 = ud(rng);
    const auto a = propagate(propagate(d, t1), t2), b = propagate(d, t1 + t2);
    CHECK(rel_sup(a.f.coefficients, b.f.coefficients) < 1e-12);
    CHECK(rel_sup(a.g.coefficients, b.g.coefficients) < 1e-12);
    CHECK(free_energy(propagate(d, t1)) == doctest::Approx(e0).epsilon(1e-13));
  }
  const auto z = propagate(d, 0.0);
  CHECK(z.f.coefficients == d.f.coefficients);
}

TEST_CASE("companion solution squares to minus the identity") {
  RadialGrid g(32.0, 1024);
  const auto d = smooth_data(g);
  const auto cc = companion_solution(companion_solution(d));
  for (int m = 0; m < g.size(); ++m) {
    CHECK(cc.f.coefficients[m] == doctest::Approx(-d.f.coefficients[m]).epsilon(1e-12).scale(1e-300));
    CHECK(cc.g.coefficients[m] == doctest::Approx(-d.g.coefficients[m]).epsilon(1e-12).scale(1e-300));
  }
  // companion of a solution is again a solution: commutes with the flow
  const auto a = propagate(companion_solution(d), 1.7), b = companion_solution(propagate(d, 1.7));
  CHECK(rel_sup(a.f.coefficients, b.f.coefficients) < 1e-12);
}

TEST_CASE("profile Plancherel over one period") {
  RadialGrid g(16.0, 256);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  SpectralField c(g);
  double s2 = 0.0;
  for (auto& x : c.coefficients) {
    x = nd(rng);
    s2 += x * x;
  }
  const long n = g.point_count;
  for (bool sine : {true, false}) {
    const auto w = sine ? profile_sine(c, -n, n - 1) : profile_cosine(c, -n, n - 1);
    double I = 0.0;
    for (double x : w.samples) I += x * x;
    I *= w.step;
    // sine: (R/4) sum c^2.  cosine picks up the same sum over one period.
    CHECK(I == doctest::Approx(0.25 * g.radius_max * s2).epsilon(1e-12));
  }
}

TEST_CASE("profile values are the mode sums") {
  RadialGrid g(8.0, 64);
  SpectralField c(g);
  c.coefficients[2] = 1.5;
  c.coefficients[9] = -0.25;
  const auto w = profile_sine(c, -10, 10);
  const auto v = profile_cosine(c, -10, 10);
  for (long k = -10; k <= 10; ++k) {
    const double tau = k * g.spacing();
    const double s = 0.5 * (1.5 * std::sin(g.rho(3) * tau) - 0.25 * std::sin(g.rho(10) * tau));
    const double cs = 0.5 * (1.5 * std::cos(g.rho(3) * tau) - 0.25 * std::cos(g.rho(10) * tau));
    CHECK(w(tau) == doctest::Approx(s).epsilon(1e-13).scale(1.0));
    CHECK(v(tau) == doctest::Approx(cs).epsilon(1e-13).scale(1.0));
  }
  CHECK(w.tau_min == doctest::Approx(-10 * g.spacing()));
  CHECK_THROWS_AS(w(20.0), RangeExceeded);
  // interpolation between nodes is close for a smooth profile
  const double mid = 0.5 * g.spacing();
  const double exact = 0.5 * (1.5 * std::sin(g.rho(3) * mid) - 0.25 * std::sin(g.rho(10) * mid));
  CHECK(w(mid) == doctest::Approx(exact).epsilon(1e-3).scale(1.0));
}

TEST_CASE("in/out reconstruction matches the propagator") {
  RadialGrid g(32.0, 2048);
  const auto d = smooth_data(g);
  const auto wd = to_physical(d);
  const auto [w_in, w_out] = in_out_decompose(d, 6.0);
  for (long k = 0; k < static_cast<long>(w_in.samples.size()); k += 97)
    CHECK(w_out.samples[static_cast<std::size_t>(k)] == -w_in.samples[static_cast<std::size_t>(k)]);
  for (double t : {0.0, 1.0, 2.5, 6.0}) {
    const auto rec = reconstruct(w_in, w_out, t, g);
    CHECK(rel_sup(rec.values, linear_solution(wd, t).position.values) < 1e-10);
  }
  // window covers [-(T + R), T + R]
  const auto [a, b] = profile_window(g, 6.0);
  CHECK(a * g.spacing() <= -(6.0 + g.radius_max));
  CHECK(b * g.spacing() >= 6.0 + g.radius_max);
}

TEST_CASE("gradient profiles give the radial derivative") {
  RadialGrid g(32.0, 2048);
  const auto d = smooth_data(g);
  const auto wd = to_physical(d);
  const auto [gin, gout] = gradient_profiles(d, 4.0);
  for (double t : {0.5, 3.0}) {
    const auto F = linear_solution(wd, t).position;
    const auto wr = radial_derivative(forward_transform(F));  // d_r (r F)
    std::vector<double> lhs(g.size()), rhs(g.size());
    for (int j = 1; j <= g.size(); ++j) {
      const double r = g.r(j);
      if (t + r > gin.tau_max()) break;
      // d_r F = (w_r - F) / r
      lhs[j - 1] = (wr[j - 1] - F.values[j - 1]) / r;
      rhs[j - 1] = (-F.values[j - 1] + gout(t - r) + gin(t + r)) / r;
    }
    CHECK(rel_sup(lhs, rhs) < 1e-8);
  }
}

TEST_CASE("profile norms") {
  Profile w;
  w.tau_min = 0.0;
  w.step = 0.001;
  for (int k = 0; k <= 1000; ++k) w.samples.push_back(std::sin(constants::pi * k * w.step));
  CHECK(profile_norm(w, INFINITY) == doctest::Approx(1.0));
  // int_0^1 sin^2(pi x) = 1/2
  CHECK(profile_norm(w, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  const auto neg = -w;
  CHECK(profile_norm(neg, 4.0) == profile_norm(w, 4.0));
}

TEST_CASE("free wave on the space-time lattice") {
  RadialGrid g(16.0, 512);
  const auto d = smooth_data(g);
  const auto wd = to_physical(d);
  const int jmax = 400;
  FreeWave fw(d, 0, 64, jmax);
  CHECK(fw.spacing() == g.spacing());
  std::vector<double> u(jmax);
  for (long n : {0L, 7L, 64L}) {
    fw.field(n, u.data());
    const auto ex = linear_solution(wd, n * g.spacing()).position.values;
    CHECK(rel_sup(u, std::vector<double>(ex.begin(), ex.begin() + jmax)) < 1e-10);
  }
}
