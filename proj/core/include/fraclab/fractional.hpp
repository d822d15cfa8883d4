#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/solver.hpp"

namespace fraclab {

enum class TailKind { constant, decay };

// Uniform line samples; outside the sampled range u continues either as the
// end value (constant) or as limit + (u_end - limit) |x_end| / |x| (decay).
struct LineFunction {
  double x0 = 0.0;
  double h = 1.0;
  std::vector<double> u;
  TailKind tail = TailKind::constant;
  double alpha = 0.0;  // limit as x -> +inf
  double beta = 0.0;   // limit as x -> -inf

  int size() const { return static_cast<int>(u.size()); }
  double x(int k) const { return x0 + h * k; }
  double x_end() const { return x(size() - 1); }
  double sample(double xv) const;  // linear interpolation inside the range

  std::string to_csv() const;
  static LineFunction from_csv(const std::string& text);
};

struct PvResult {
  int first = 0;  // node index of values[0]
  std::vector<double> values;
  double tail_bound = 0.0;  // max over nodes of |decay tail - constant tail|
};

double frac_lap_pv_at(const LineFunction& u, double s, int k, double* tail_bound = nullptr);
PvResult frac_lap_pv(const LineFunction& u, double s);

void fft_inplace(std::vector<double>& re, std::vector<double>& im, bool inverse);
std::vector<double> frac_lap_spectral(const std::vector<double>& u, double period, double s);

struct CrossValidation {
  double pv_vs_spectral = 0.0;  // nan when the grid is not periodic
  double pv_vs_dtn = 0.0;
  std::vector<double> x, pv, spectral, flux;  // on the common window
};

// Compares P.V. quadrature of u with the spectral symbol (periodic grids) and
// d_s P.V. with dtn(harmonic_extension(u)) on the common interior window.
CrossValidation cross_validate(const LineFunction& u, double s,
                               std::shared_ptr<const HalfSpaceGrid> grid,
                               const ExtensionBC& bc = {});

}  // namespace fraclab
