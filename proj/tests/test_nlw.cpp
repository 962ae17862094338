#include <doctest.h>

#include <cmath>

#include "rnlw/errors.hpp"
#include "rnlw/functionals.hpp"
#include "rnlw/linear_wave.hpp"
#include "rnlw/nlw.hpp"

using namespace rnlw;

namespace {

RadialField sample(const RadialGrid& g, auto&& u) {
  RadialField f(g);
  for (int j = 1; j <= g.size(); ++j) f.values[j - 1] = u(g.r(j));
  return f;
}

WaveData bump(const RadialGrid& g, double a) {
  return WaveData(sample(g, [a](double r) { return a * std::exp(-r * r); }),
                  sample(g, [a](double r) { return 0.5 * a * r * std::exp(-r * r); }));
}

double rel_sup(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e = std::max(e, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return s > 0.0 ? e / s : e;
}

SolverParams params(double horizon, double cfl = 0.25, int stride = 1) {
  SolverParams p;
  p.horizon = horizon;
  p.cfl = cfl;
  p.report_stride = stride;
  return p;
}

}  // namespace

TEST_CASE("parameter checks refuse before stepping") {
  RadialGrid g(16.0, 256);
  const auto d = bump(g, 1.0);
  auto p = params(1.0, 0.6);
  CHECK_THROWS_AS(p.validate(g), SolverParamError);
  CHECK_THROWS_AS(evolve(d, nullptr, p), SolverParamError);
  p = params(1.0);
  p.sign = -1;
  CHECK_THROWS_AS(evolve(d, nullptr, p), SolverParamError);
  p = params(1.0);
  p.report_stride = 0;
  CHECK_THROWS_AS(p.validate(g), SolverParamError);
  p = params(1.0);
  p.dt = 0.01;
  CHECK(p.resolved_dt(g) == 0.01);
  p.dt = 0.5 * g.spacing();
  CHECK_NOTHROW(p.validate(g));
}

TEST_CASE("nonlinearity") {
  RadialGrid g(4.0, 16);
  const auto v = sample(g, [](double r) { return std::cos(r); });
  const auto F = sample(g, [](double r) { return 0.3 * r; });
  const auto dn = nonlinearity(v, F), full = nonlinearity(v, F, true);
  for (int j = 0; j < g.size(); ++j) {
    const double a = v.values[j], b = F.values[j];
    CHECK(full.values[j] == doctest::Approx(std::pow(a + b, 5)));
    CHECK(dn.values[j] == doctest::Approx(std::pow(a + b, 5) - std::pow(a, 5)).scale(1e-12));
  }
  const auto zero = nonlinearity(v, RadialField(g));
  for (double x : zero.values) CHECK(x == 0.0);
}

TEST_CASE("zero data stays zero") {
  RadialGrid g(16.0, 256);
  const auto traj = evolve(WaveData(g), nullptr, params(1.0, 0.25, 8));
  for (const auto& s : traj.states)
    for (double x : s.position.values) CHECK(x == 0.0);
}

TEST_CASE("snapshot bookkeeping") {
  RadialGrid g(16.0, 256);
  const auto traj = evolve(bump(g, 0.5), nullptr, params(1.0, 0.25, 4));
  const double dt = 0.25 * g.spacing();
  CHECK(traj.params.dt == doctest::Approx(dt));
  CHECK(traj.states.front().time == 0.0);
  CHECK(traj.states.back().time == doctest::Approx(1.0));
  CHECK(traj.stride_time() == doctest::Approx(4 * dt));
  CHECK(traj.states.size() == static_cast<std::size_t>(std::lround(1.0 / (4 * dt))) + 1);
  int calls = 0;
  evolve(bump(g, 0.5), nullptr, params(1.0, 0.25, 4), [&](const StepView&) { ++calls; });
  CHECK(calls == std::lround(1.0 / dt) + 1);
}

TEST_CASE("tiny data follows the free wave") {
  RadialGrid g(32.0, 1024);
  const auto d = bump(g, 1e-3);
  const auto traj = evolve(d, nullptr, params(3.0));
  const auto lin = linear_solution(d, traj.states.back().time);
  // the quintic term is O(A^4) relative
  CHECK(rel_sup(traj.states.back().position.values, lin.position.values) < 1e-10);
}

TEST_CASE("energy is conserved and time reversal closes") {
  RadialGrid g(32.0, 2048);
  const auto d = bump(g, 1.0);
  auto drift_at = [&](double cfl) {
    const auto e = energy_series(evolve(d, nullptr, params(4.0, cfl, 16)));
    double drift = 0.0;
    for (double x : e) drift = std::max(drift, std::abs(x - e.front()));
    return drift / e.front();
  };
  const double d1 = drift_at(0.25), d2 = drift_at(0.125);
  CHECK(d1 < 1e-5);
  // splitting error in the energy is O(dt^2)
  CHECK(std::log2(d1 / d2) == doctest::Approx(2.0).epsilon(0.15));
  const auto traj = evolve(d, nullptr, params(4.0, 0.25, 16));

  // symmetric splitting: run back from the end with reversed velocity
  const auto& end = traj.states.back();
  RadialField back_v = end.velocity;
  for (auto& x : back_v.values) x = -x;
  const auto rev = evolve(WaveData(end.position, back_v), nullptr, params(4.0, 0.25, 16));
  CHECK(rel_sup(rev.states.back().position.values, d.position.values) < 1e-9);
}

TEST_CASE("critical scaling is exact on matched grids (property)") {
  // v_l(t, r) = l^{1/2} v(l t, l r) solves the same equation
  const double l = 2.0;
  RadialGrid g(32.0, 1024), gl(32.0 / l, 1024);
  const auto d = bump(g, 1.2);
  WaveData dl(gl);
  for (int j = 0; j < g.size(); ++j) {
    dl.position.values[j] = std::sqrt(l) * d.position.values[j];
    dl.velocity.values[j] = std::pow(l, 1.5) * d.velocity.values[j];
  }
  const auto a = evolve(d, nullptr, params(2.0, 0.25, 64));
  const auto b = evolve(dl, nullptr, params(2.0 / l, 0.25, 64));
  REQUIRE(a.states.size() == b.states.size());
  std::vector<double> scaled(g.size());
  for (int j = 0; j < g.size(); ++j) scaled[j] = std::sqrt(l) * a.states.back().position.values[j];
  CHECK(rel_sup(b.states.back().position.values, scaled) < 1e-12);
}

TEST_CASE("second-order convergence in time") {
  RadialGrid g(16.0, 512);
  const auto d = bump(g, 1.5);
  std::vector<double> err;
  const auto ref = evolve(d, nullptr, params(1.0, 1.0 / 64, 1 << 20)).states.back().position.values;
  for (double cfl : {0.5, 0.25, 0.125})
    err.push_back(rel_sup(evolve(d, nullptr, params(1.0, cfl, 1 << 20)).states.back().position.values, ref));
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(err[1] / err[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("zero forcing is the unforced equation") {
  RadialGrid g(16.0, 256);
  const auto d = bump(g, 1.0);
  const WaveData zero(g);
  const auto a = evolve(d, nullptr, params(1.0, 0.25, 8));
  const auto b = evolve(d, &zero, params(1.0, 0.25, 8));
  CHECK(rel_sup(b.states.back().position.values, a.states.back().position.values) < 1e-14);
  CHECK(b.forcing.has_value());
}

TEST_CASE("single step agrees with the driver") {
  RadialGrid g(16.0, 256);
  const auto d = bump(g, 1.0);
  const double dt = 0.25 * g.spacing();
  const auto s = step(WaveState{0.0, d.position, d.velocity}, nullptr, dt);
  auto p = params(dt);
  const auto traj = evolve(d, nullptr, p);
  CHECK(s.time == doctest::Approx(dt));
  CHECK(rel_sup(s.position.values, traj.states.back().position.values) < 1e-13);
}

TEST_CASE("guards") {
  RadialGrid g(16.0, 256);
  SUBCASE("blow-up threshold") {
    auto p = params(1.0);
    p.blowup_threshold = 1e-6;
    CHECK_THROWS_AS(evolve(bump(g, 1.0), nullptr, p), BlowupDetected);
  }
  SUBCASE("mass reaching the boundary") {
    WaveData d(sample(g, [](double r) { return std::exp(-(r - 13) * (r - 13)); }), RadialField(g));
    CHECK_THROWS_AS(evolve(d, nullptr, params(2.0)), DomainOverflow);
    auto p = params(2.0);
    p.check_domain = false;
    CHECK_NOTHROW(evolve(d, nullptr, p));
  }
}
