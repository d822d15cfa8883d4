#pragma once

#include <string>
#include <vector>

#include "fraclab/field.hpp"
#include "fraclab/nonlinearity.hpp"

namespace fraclab {

// An m-tuple of test functions on the grid nodes, with a family label.
struct TestFunction {
  std::string id;
  std::vector<std::vector<double>> zeta;  // [component][node]
};

struct StabilityReport {
  double quadratic_gap = 0.0;  // min over the family of RHS - LHS
  std::string family;          // id of the minimizing test function
  std::vector<double> gaps;    // one per test function, in family order
  double smallest_eigenvalue = 0.0;
  std::vector<double> eigenvalues;  // lowest Ritz values
  bool eigenvector_sign_consistent = false;
  bool eigen_converged = false;
  int eigen_iterations = 0;
  double shift = 0.0;
  FieldSet eigenvector;  // minimizer, boundary-normalized
};

// sum_i int y^{a_i} |grad zeta_i|^2 - sum_ij int_{y=0} sqrt(d_i d_j) H_ij(v) zeta_i zeta_j
double quadratic_gap(const FieldSet& v, const NonlinearitySpec& H, const TestFunction& t);

// smooth radial cutoff: 1 for |z| <= rho/2, 0 for |z| >= rho
std::vector<double> cutoff(const HalfSpaceGrid& g, double rho);
// dyadic radii rho_max 2^{-k}, k = 0..count-1, rho_max = 0.9 min(L, Y)
std::vector<double> cutoff_scales(const HalfSpaceGrid& g, int count = 5);

// Default family: plain bumps theta_i eta_k / sqrt(d_i) and the translation
// mode d_x v_i eta_k / sqrt(d_i) at each scale.
std::vector<TestFunction> default_family(const FieldSet& v, const std::vector<int>& theta = {});

StabilityReport stability_gap(const FieldSet& v, const NonlinearitySpec& H,
                              const std::vector<TestFunction>& tests);

// Inequality with zeta_i = |d_x v_i| eta_i for a slab with boundary dimension 1:
// sum (1/d_i) int y^a |d_x v_i|^2 |grad eta_i|^2
//   - sum_{i != j} int_{y=0} (|d_x v_i||d_x v_j| eta_i eta_j - d_x v_i d_x v_j eta_i^2) H_ij.
// Minimum over all assignments of the cutoff scales to components.
struct PoincareReport {
  double slack = 0.0;
  std::vector<int> scales;  // minimizing scale index per component
  int tested = 0;
};
PoincareReport poincare_reduction(const FieldSet& v, const NonlinearitySpec& H,
                                  const std::vector<double>& scales);

// Smallest values of [sum int y^a |grad phi|^2 - boundary Hessian form] / sum int_{y=0} |phi|^2
// with phi vanishing on the lateral and top truncation boundaries. Block shifted
// inverse iteration (3 vectors) with Rayleigh-Ritz; non-convergence is reported.
StabilityReport linearized_spectrum(const FieldSet& v, const NonlinearitySpec& H,
                                    int max_iterations = 500, double tol = 1e-11);

std::string to_json_text(const StabilityReport& r);

struct SigmaReport {
  std::vector<double> interior;  // sup residual of div(y^a phi^2 grad sigma) per component
  std::vector<double> boundary;  // sup residual of the boundary relation per component
  std::vector<double> scale;     // sup of the individual flux terms, per component
  std::vector<double> variance;  // variance of sigma over free nodes
  FieldSet sigma;
};

// sigma_i = (grad v_i . e) / phi_i; phi_i must not vanish at any node.
SigmaReport sigma_residual(const FieldSet& v, const NonlinearitySpec& H, const FieldSet& phi,
                           const std::vector<double>& direction = {1.0});
SigmaReport sigma_residual(const FieldSet& v, const NonlinearitySpec& H, const FieldSet& phi,
                           const FieldSet& psi);

enum class GrowthKind { log, power };
struct GrowthTag {
  GrowthKind kind = GrowthKind::log;
  double p = 0.0;
  std::string str() const;
};
GrowthTag parse_growth(const std::string& text);  // "log" or "power(p)"
// throws class_violation unless F is nondecreasing with int_2^inf dr / (r F(r)) = inf
void require_growth_class(const GrowthTag& F);

struct GrowthCurve {
  std::vector<double> R, value;
  double sup = 0.0;
  bool hypothesis_satisfied = false;
};
// R -> (1 / (R^2 F(R))) int_{C_R} sum y^{a_i} phi_i^2 sigma_i^2
GrowthCurve liouville_growth(const FieldSet& sigma, const FieldSet& phi, const GrowthTag& F,
                             const std::vector<double>& R);

struct BoundedEnergy {
  std::vector<double> exponent;   // fitted per component, NaN when the integrals vanish
  std::vector<double> predicted;  // n - 2 s_i
  std::vector<double> slack;      // predicted + margin - fitted (inf when trivially bounded)
  std::vector<std::vector<double>> integrals;
  std::vector<double> R;
  bool applicable = false;  // grad H >= 0 certified on the realized range
  double certificate_worst = 0.0;
};
BoundedEnergy bounded_energy_check(const FieldSet& v, const NonlinearitySpec& H,
                                   const std::vector<double>& R, double margin = 0.1);

enum class DichotomyTag { flat, one_signed, mixed };
std::string to_string(DichotomyTag t);
std::vector<DichotomyTag> dichotomy_check(const FieldSet& v);

// sum_ij h_ij sigma_i f(sigma_j - sigma_i) and -sum_{i<j} h_ij (sigma_j - sigma_i) f(sigma_j - sigma_i)
enum class OddFunction { identity, cube };
struct KTerm {
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
};
KTerm k_term(const std::vector<double>& sigma, const std::vector<std::vector<double>>& h,
             OddFunction f);

}  // namespace fraclab
