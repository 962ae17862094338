#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Thin FFTW wrappers. Plans are created once per size under a lock and then
// executed through the new-array interface, which is thread safe.

namespace rnlw::fft {

// n = N - 1 samples in, n coefficients out.  c_m = (2/N) sum_j w_j sin(pi m j/N)
void sine_analysis(std::span<const double> w, std::span<double> c);
// w_j = sum_m c_m sin(pi m j / N)
void sine_synthesis(std::span<const double> c, std::span<double> w);
// y_k = sum_{m=1}^{N-1} c_m cos(pi m k / N) for k = 0..N  (out has N+1 entries)
void cosine_synthesis(std::span<const double> c, std::span<double> y);

std::vector<double> sine_analysis(const std::vector<double>& w);
std::vector<double> sine_synthesis(const std::vector<double>& c);

// Linear (non-circular) convolution of a with b, result length a.size()+b.size()-1.
std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rnlw::fft
