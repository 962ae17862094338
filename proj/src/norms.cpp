#include <algorithm>
#include <cmath>

#include "rnlw/constants.hpp"
#include "rnlw/functionals.hpp"
#include "rnlw/quadrature.hpp"
#include "rnlw/weighted_lp.hpp"

namespace rnlw {

double abs_pow(double x, double p) {
  const double ax = std::abs(x);
  if (p == std::floor(p) && p >= 0.0 && p <= 24.0) {
    double r = 1.0;
    for (int k = 0; k < static_cast<int>(p); ++k) r *= ax;
    return r;
  }
  return std::pow(ax, p);
}

WeightedLp::WeightedLp(int n, double h, double alpha, double p) : n_(n), h_(h), p_(p), w_(n) {
  if (std::isinf(p)) {
    for (int j = 1; j <= n; ++j) w_[j - 1] = std::pow(j * h, alpha);
    return;
  }
  beta_ = alpha * p + 2.0;
  for (int j = 1; j <= n; ++j) w_[j - 1] = std::pow(j * h, beta_);
}

double WeightedLp::power(const double* u) const {
  if (std::isinf(p_)) {
    double m = 0.0;
    for (int j = 0; j < n_; ++j) m = std::max(m, w_[j] * std::abs(u[j]));
    return m;
  }
  double s = 0.0;
  if (p_ == 6.0) {
    for (int j = 0; j < n_; ++j) {
      const double x2 = u[j] * u[j];
      s += w_[j] * x2 * x2 * x2;
    }
  } else {
    for (int j = 0; j < n_; ++j) s += w_[j] * abs_pow(u[j], p_);
  }
  s *= h_;
  const double rb = std::round(beta_);
  const bool even_int = std::abs(beta_ - rb) < 1e-14 && static_cast<long>(rb) % 2 == 0;
  if (!even_int && n_ >= 4) {
    double g[4];
    for (int j = 0; j < 4; ++j) g[j] = abs_pow(u[j], p_);
    double g0, g2;
    quad::even_origin_fit(g, h_, g0, g2);
    s -= std::riemann_zeta(-beta_) * std::pow(h_, beta_ + 1.0) * g0;
    s -= std::riemann_zeta(-beta_ - 2.0) * std::pow(h_, beta_ + 3.0) * 0.5 * g2;
  }
  return std::max(constants::four_pi * s, 0.0);
}

double WeightedLp::operator()(const double* u) const {
  const double s = power(u);
  return std::isinf(p_) ? s : std::pow(s, 1.0 / p_);
}

namespace {

// (int_a^b f^q dt)^{1/q} by trapezoid on a uniform grid
double time_lq(const std::vector<double>& f, long i0, long i1, double h, double q) {
  if (i1 <= i0) return 0.0;
  double s = 0.0;
  for (long i = i0; i <= i1; ++i) {
    const double wt = (i == i0 || i == i1) ? 0.5 : 1.0;
    s += wt * abs_pow(f[i], q);
  }
  return std::pow(s * h, 1.0 / q);
}

SpectralData band(const SpectralData& d, double N) {
  const auto b = BandSpec::dyadic(N);
  return SpectralData(apply_band(d.f, b), apply_band(d.g, b));
}

SpectralData tilde_gradient_data(const SpectralData& d) {
  return SpectralData(d.g, -1.0 * fractional_derivative(d.f, 2.0));
}

SpectralData gradient_data(const SpectralData& d) {
  return SpectralData(fractional_derivative(d.f, 1.0), fractional_derivative(d.g, 1.0));
}

long to_index(double t, double h) { return static_cast<long>(std::llround(t / h)); }

struct Summand {
  double alpha, p, q;
};

}  // namespace

double YNormTerms::total() const {
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

YNormSeries::YNormSeries(const WaveData& forcing, const NormParams& params, double a, double b) {
  params.validate();
  const auto fs = to_spectral(forcing);
  const auto& grid = fs.grid();
  const int n = grid.size();
  h_ = grid.spacing();
  delta_ = params.delta;
  n0_ = to_index(a, h_);
  const long n1 = to_index(b, h_);
  const long nt = n1 - n0_ + 1;
  const double d = params.delta, g = params.gamma;

  const Summand sh[4] = {{3.0 / 8.0, INFINITY, 8.0 / 3.0},
                         {(3.0 + 2.0 * d) / 8.0, 2.0 / d, 8.0 / (3.0 - 2.0 * d)},
                         {-1.0 / 6.0, 6.0, 6.0},
                         {2.0 / 3.0, 12.0, 12.0}};
  const Summand fu[4] = {{0.25, INFINITY, 4.0}, {0.0, 10.0, 5.0}, {-1.0 / 6.0, 6.0, 6.0}, {2.0 / 3.0, 12.0, 12.0}};

  std::vector<double> u(n);
  shells_ = active_shells(fs, params);
  shell_series_.assign(4, std::vector<std::vector<double>>(shells_.size(), std::vector<double>(nt)));
  for (std::size_t k = 0; k < shells_.size(); ++k) {
    const auto dn = band(fs, shells_[k]);
    const FreeWave tilde(tilde_gradient_data(dn), n0_, n1, n);
    const FreeWave grad(gradient_data(dn), n0_, n1, n);
    for (int s = 0; s < 4; ++s) {
      const WeightedLp norm(n, h_, sh[s].alpha, sh[s].p);
      const FreeWave& src = (s == 0 || s == 3) ? tilde : grad;
      for (long i = 0; i < nt; ++i) {
        src.field(n0_ + i, u.data());
        shell_series_[s][k][i] = norm(u.data());
      }
    }
  }
  shell_coef_ = {-0.75 + 1.0 / (24.0 * g) + d, -0.75 + 1.0 / (24.0 * g) + 2.5 * d, -1.0 + d, -1.0 + d};

  full_series_.assign(4, std::vector<double>(nt));
  const FreeWave full(fs, n0_, n1, n);
  for (int s = 0; s < 4; ++s) {
    const WeightedLp norm(n, h_, fu[s].alpha, fu[s].p);
    for (long i = 0; i < nt; ++i) {
      full.field(n0_ + i, u.data());
      full_series_[s][i] = norm(u.data());
    }
  }
}

YNormTerms YNormSeries::over(double a, double b) const {
  const long i0 = to_index(a, h_) - n0_, i1 = to_index(b, h_) - n0_;
  const double d = delta_;
  const double q_sh[4] = {8.0 / 3.0, 8.0 / (3.0 - 2.0 * d), 6.0, 12.0};
  const double q_fu[4] = {4.0, 5.0, 6.0, 12.0};
  YNormTerms y;
  for (int s = 0; s < 4; ++s) {
    double acc = 0.0;
    for (std::size_t k = 0; k < shells_.size(); ++k) {
      const double v = std::pow(shells_[k], shell_coef_[s]) * time_lq(shell_series_[s][k], i0, i1, h_, q_sh[s]);
      acc += std::pow(v, q_sh[s]);
    }
    y.terms[s] = std::pow(acc, 1.0 / q_sh[s]);
    y.terms[4 + s] = time_lq(full_series_[s], i0, i1, h_, q_fu[s]);
  }
  return y;
}

YNormTerms y_norm_terms(const WaveData& forcing, const NormParams& params, double a, double b) {
  return YNormSeries(forcing, params, a, b).over(a, b);
}

double y_norm(const WaveData& forcing, const NormParams& params, double a, double b) {
  return y_norm_terms(forcing, params, a, b).total();
}

ZNormTerms z_norm_terms(const WaveData& forcing, const NormParams& params) {
  params.validate();
  const auto fs = to_spectral(forcing);
  const auto& grid = fs.grid();
  const int n = grid.size();
  const double h = grid.spacing(), d = params.delta, g = params.gamma;
  // one full period of the profiles
  const long k0 = -grid.point_count, k1 = grid.point_count;
  ZNormTerms z;

  auto profile_sum = [&](const Profile& w) {
    double s = 0.0;
    for (double p : params.p_set) s += profile_norm(w, p);
    return 2.0 * s;  // out and in share |W|
  };

  const long t0 = -to_index(params.z_window, h), t1 = -t0;
  const WeightedLp sup_half(n, h, 0.5, INFINITY);
  const WeightedLp l6(n, h, 0.0, 6.0);
  std::vector<double> u(n);
  for (double N : active_shells(fs, params)) {
    const auto dn = band(fs, N);
    const double coef = std::pow(N, -1.0 / (12.0 * g) + 2.0 * d) + std::pow(N, -1.0 + d);
    z.profile_tilde += coef * profile_sum(in_out_decompose(tilde_gradient_data(dn), k0, k1).first);
    z.profile_grad += coef * profile_sum(gradient_profiles(dn, k0, k1).first);
    const FreeWave fw(dn, t0, t1, n);
    double m = 0.0;
    for (long i = t0; i <= t1; ++i) {
      fw.field(i, u.data());
      m = std::max(m, sup_half(u.data()));
    }
    z.pointwise += std::pow(N, d) * m;
  }
  z.profile_full = profile_sum(in_out_decompose(fs, k0, k1).first);
  const FreeWave full(fs, t0, t1, n);
  for (long i = t0; i <= t1; ++i) {
    full.field(i, u.data());
    z.energy_norm = std::max(z.energy_norm, l6(u.data()));
  }
  return z;
}

double z_norm(const WaveData& forcing, const NormParams& params) { return z_norm_terms(forcing, params).total(); }

}  // namespace rnlw
