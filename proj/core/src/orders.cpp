#include "fraclab/orders.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {
constexpr double lanczos_g = 7.0;
constexpr double lanczos_p[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace

double gamma_fn(double x) {
  using std::numbers::pi;
  if (x < 0.5) return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
  x -= 1.0;
  double acc = lanczos_p[0];
  for (int k = 1; k < 9; ++k) acc += lanczos_p[k] / (x + k);
  const double t = x + lanczos_g + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

double extension_constant(double s) {
  return gamma_fn(1.0 - s) / (std::pow(2.0, 2.0 * s - 1.0) * gamma_fn(s));
}

double pv_constant(double s) {
  return std::pow(2.0, 2.0 * s) * gamma_fn(0.5 + s) /
         (std::sqrt(std::numbers::pi) * std::abs(gamma_fn(-s)));
}

double FractionalOrders::s_min() const { return *std::min_element(s.begin(), s.end()); }
double FractionalOrders::s_max() const { return *std::max_element(s.begin(), s.end()); }
bool FractionalOrders::equal_orders() const { return s_min() == s_max(); }

FractionalOrders make_orders(const std::vector<double>& s) {
  require(!s.empty(), ErrorKind::invalid_argument, "orders: empty order vector");
  FractionalOrders o;
  o.m = static_cast<int>(s.size());
  o.s = s;
  for (double si : s) {
    require(std::isfinite(si) && si > 0.0 && si < 1.0, ErrorKind::invalid_argument,
            "orders: s must lie in (0,1)");
    o.a.push_back(1.0 - 2.0 * si);
    o.d.push_back(si == 0.5 ? 1.0 : extension_constant(si));
  }
  return o;
}

}  // namespace fraclab
