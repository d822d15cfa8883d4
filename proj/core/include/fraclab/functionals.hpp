#pragma once

#include <array>
#include <vector>

#include "fraclab/field.hpp"
#include "fraclab/nonlinearity.hpp"

namespace fraclab {

struct Gradients {
  std::vector<std::vector<double>> dx;   // per component, boundary axis 1
  std::vector<std::vector<double>> dx2;  // per component, boundary axis 2 (2-D boundary only)
  std::vector<std::vector<double>> q;    // per component, y^a dv/dy
};
Gradients gradients(const FieldSet& v);

// sum_i (1/2d_i) int_{C_R} y^{a_i} |grad v_i|^2 - int_{B_R} H(v(.,0))
double energy(const FieldSet& v, const NonlinearitySpec& H, double R);

struct EnergyProfile {
  std::vector<double> R, E;
  double exponent = 0.0;     // slope of log E against log R, upper half of the range
  double coefficient = 0.0;  // exp(intercept)
  double fit_residual = 0.0;
  double log_coefficient = 0.0;      // A in E = A log R + B
  double log_ratio_variation = 0.0;  // (max - min) / min of E / log R, upper half
  bool excluded_nonpositive = false;
};
EnergyProfile energy_scan(const FieldSet& v, const NonlinearitySpec& H,
                          const std::vector<double>& R);

// fiber truncation at Y: none (exact for a Neumann top) or a power-law tail
enum class FiberTail { none, power_law };

struct FiberIntegrals {
  double x = 0.0;  // int y^a (dv/dx)^2
  double y = 0.0;  // int y^a (dv/dy)^2
};
FiberIntegrals fiber_integrals(const FieldSet& v, const Gradients& gr, int comp, int column,
                               FiberTail tail);

struct HamiltonianProfile {
  std::vector<double> x, w, gap, residual_corrected, residual_printed;
  double window = 0.6;
  double sup_corrected = 0.0;  // over |x| <= window L
  double sup_printed = 0.0;
  double sup_w = 0.0;
  double derivative_relation = 0.0;  // sup |d/dx (w + d_s H(v))|
  double balance = 0.0;              // |H(v(L,0)) - H(v(-L,0))|
};
HamiltonianProfile hamiltonian_profile(const FieldSet& v, const NonlinearitySpec& H,
                                       const std::vector<double>& alpha, FiberTail tail,
                                       double window = 0.6);

struct RadialHamiltonian {
  std::vector<double> r, curve, curve_printed, curve_alt;
  double max_upward_slope = 0.0;
  double max_upward_slope_printed = 0.0;
  double scale = 0.0;
  double identity_imbalance = 0.0;      // with 2 d_s H, relative, over r >= 5h
  double identity_imbalance_alt = 0.0;  // with (2/d_s) H
};
RadialHamiltonian radial_hamiltonian(const FieldSet& v, const NonlinearitySpec& H,
                                     FiberTail tail);

struct MonotonicityCurve {
  std::vector<double> R, I, slope;
  double min_slope = 0.0;
  double max_abs_I = 0.0;
  bool applicable = false;  // H <= 0 certified on the trace range
  double certificate_worst = 0.0;
};
MonotonicityCurve monotonicity_curve(const FieldSet& v, const NonlinearitySpec& H,
                                     const std::vector<double>& R);

struct MonotonicityBalance {
  double lhs = 0.0, rhs = 0.0, imbalance = 0.0;  // imbalance relative to max(|lhs|, |rhs|)
};
MonotonicityBalance monotonicity_balance(const FieldSet& v, const NonlinearitySpec& H, double R,
                                         double dR);

struct PohozaevTerms {
  double sphere_normal = 0.0;    // R sum (1/d_i) int y^a (d_nu v_i)^2
  double sphere_gradient = 0.0;  // -(R/2) sum (1/d_i) int y^a |grad v_i|^2
  double bulk = 0.0;             // sum (1/d_i) (n - 2 s_i)/2 int_{B_R^+} y^a |grad v_i|^2
  double potential_bulk = 0.0;   // -n int_{B_R} H
  double potential_sphere = 0.0; // R int_{dB_R} H
  double residual = 0.0;
  double dominant = 0.0;
};
PohozaevTerms pohozaev_residual(const FieldSet& v, const NonlinearitySpec& H, double R);

struct RadialStructure {
  double grad_at_zero = 0.0;
  double potential_gap = 0.0;  // H(v(0,0)) - H(0)
  double hessian_sum = 0.0;
  std::vector<bool> monotone_decreasing;
  double far_field = 0.0;
  double gap_lower_bound = 0.0;  // sum (1/2d_i) int y^a (dv_i/dy)^2 (0, y) dy
};
RadialStructure radial_structure_checks(const FieldSet& v, const NonlinearitySpec& H);

struct DecayReport {
  std::vector<double> grad_x_bound, grad_y_bound, flux_bound, fiber_tail;
  std::vector<double> x;
  std::vector<std::vector<double>> fiber_energy;  // per component, per x node
  bool tail_decreasing = true;
};
DecayReport decay_checks(const FieldSet& v, FiberTail tail = FiberTail::none);

struct SymmetryReport {
  std::vector<std::array<double, 2>> direction;
  std::vector<double> anisotropy;
  std::vector<bool> defined;
};
SymmetryReport symmetry_diagnostic(const FieldSet& v);

}  // namespace fraclab
