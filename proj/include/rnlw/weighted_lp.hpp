#pragma once

#include <vector>

namespace rnlw {

// |r^alpha u|_{L^p(R^3)} over r_j = j h, j = 1..n, with the weights computed once.
// Same quadrature (and origin corrections) as weighted_norm; p = inf is the weighted sup.
class WeightedLp {
 public:
  WeightedLp(int n, double h, double alpha, double p);
  double operator()(const double* u) const;
  // the p-th power before the root (the sup for p = inf)
  double power(const double* u) const;
  double p() const { return p_; }

 private:
  int n_;
  double h_, p_, beta_ = 0.0;
  std::vector<double> w_;
};

// |x|^p for integer p up to 24 by repeated products, pow otherwise
double abs_pow(double x, double p);

}  // namespace rnlw
