#pragma once

#include <vector>

namespace fraclab {

// Lanczos approximation, g = 7, with reflection for x < 1/2.
double gamma_fn(double x);

// Gamma(1-s) / (2^{2s-1} Gamma(s))
double extension_constant(double s);

// 2^{2s} Gamma(1/2+s) / (sqrt(pi) |Gamma(-s)|)
double pv_constant(double s);

struct FractionalOrders {
  int m = 0;
  std::vector<double> s;
  std::vector<double> a;
  std::vector<double> d;

  double s_min() const;
  double s_max() const;
  bool equal_orders() const;
};

FractionalOrders make_orders(const std::vector<double>& s);

}  // namespace fraclab
