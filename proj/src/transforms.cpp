#include "rnlw/transforms.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace rnlw::fft {
namespace {

enum class Kind { Rodft00, Redft00, R2c, C2r };

std::mutex plan_mutex;
std::map<std::pair<Kind, int>, fftw_plan> plans;

fftw_plan get_plan(Kind kind, int n) {
  std::lock_guard lock(plan_mutex);
  auto key = std::make_pair(kind, n);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan p = nullptr;
  switch (kind) {
    case Kind::Rodft00:
    case Kind::Redft00: {
      double* in = fftw_alloc_real(n);
      double* out = fftw_alloc_real(n);
      p = fftw_plan_r2r_1d(n, in, out, kind == Kind::Rodft00 ? FFTW_RODFT00 : FFTW_REDFT00, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
    case Kind::R2c: {
      double* in = fftw_alloc_real(n);
      fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
      p = fftw_plan_dft_r2c_1d(n, in, out, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
    case Kind::C2r: {
      fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
      double* out = fftw_alloc_real(n);
      p = fftw_plan_dft_c2r_1d(n, in, out, flags);
      fftw_free(in);
      fftw_free(out);
      break;
    }
  }
  if (!p) throw std::runtime_error("fftw planning failed");
  plans.emplace(key, p);
  return p;
}

}  // namespace

void sine_analysis(std::span<const double> w, std::span<double> c) {
  const int n = static_cast<int>(w.size());
  if (c.size() != w.size()) throw std::invalid_argument("sine_analysis: size mismatch");
  fftw_execute_r2r(get_plan(Kind::Rodft00, n), const_cast<double*>(w.data()), c.data());
  const double scale = 1.0 / (n + 1);  // RODFT00 carries a factor 2
  for (auto& x : c) x *= scale;
}

void sine_synthesis(std::span<const double> c, std::span<double> w) {
  const int n = static_cast<int>(c.size());
  if (c.size() != w.size()) throw std::invalid_argument("sine_synthesis: size mismatch");
  fftw_execute_r2r(get_plan(Kind::Rodft00, n), const_cast<double*>(c.data()), w.data());
  for (auto& x : w) x *= 0.5;
}

void cosine_synthesis(std::span<const double> c, std::span<double> y) {
  const int n = static_cast<int>(c.size());
  if (y.size() != c.size() + 2) throw std::invalid_argument("cosine_synthesis: size mismatch");
  // REDFT00 on N+1 points: Y_k = X_0 + (-1)^k X_N + 2 sum_{j=1}^{N-1} X_j cos(pi j k/N)
  std::vector<double> x(n + 2, 0.0);
  for (int m = 0; m < n; ++m) x[m + 1] = c[m];
  fftw_execute_r2r(get_plan(Kind::Redft00, n + 2), x.data(), y.data());
  for (auto& v : y) v *= 0.5;
}

std::vector<double> sine_analysis(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  sine_analysis(std::span<const double>(w), std::span<double>(c));
  return c;
}

std::vector<double> sine_synthesis(const std::vector<double>& c) {
  std::vector<double> w(c.size());
  sine_synthesis(std::span<const double>(c), std::span<double>(w));
  return w;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = a.size() + b.size() - 1;
  int n = 1;
  while (static_cast<std::size_t>(n) < len) n <<= 1;
  const int nc = n / 2 + 1;
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  auto* fa = fftw_alloc_complex(nc);
  auto* fb = fftw_alloc_complex(nc);
  fftw_execute_dft_r2c(get_plan(Kind::R2c, n), pa.data(), fa);
  fftw_execute_dft_r2c(get_plan(Kind::R2c, n), pb.data(), fb);
  for (int k = 0; k < nc; ++k) {
    const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re / n;
    fa[k][1] = im / n;
  }
  fftw_execute_dft_c2r(get_plan(Kind::C2r, n), fa, pa.data());
  fftw_free(fa);
  fftw_free(fb);
  pa.resize(len);
  return pa;
}

}  // namespace rnlw::fft
