#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/field.hpp"
#include "fraclab/nonlinearity.hpp"
#include "fraclab/operator.hpp"

namespace fraclab {

enum class LateralBC { dirichlet, neumann, periodic };
enum class TopBC { neumann, dirichlet };

struct BoundaryData {
  LateralBC lateral = LateralBC::dirichlet;
  TopBC top = TopBC::neumann;
  std::vector<double> alpha;  // state as x -> +inf (radial: value at r = L)
  std::vector<double> beta;   // state as x -> -inf
  // Dirichlet values on every node, per component; overrides alpha/beta when present
  std::optional<std::vector<std::vector<double>>> values;

  static BoundaryData states(std::vector<double> alpha, std::vector<double> beta,
                             TopBC top = TopBC::neumann);
  static BoundaryData prescribed(const FieldSet& f, TopBC top);
  static BoundaryData periodic(TopBC top = TopBC::neumann);
};

enum class LinearSolver { automatic, direct, cg };

struct SolverOptions {
  double newton_tol = 1e-10;
  int newton_max = 60;
  double krylov_tol = 1e-12;
  int krylov_max = 10000;
  bool damping = true;
  LinearSolver linear = LinearSolver::automatic;
};

enum class SolveStatus { converged, iteration_cap, jacobian_breakdown, line_search_failure };

struct SolveReport {
  int outer_iterations = 0;
  std::vector<double> residual_history;  // scaled sup-norm residual per iterate
  std::vector<double> energy_history;    // discrete energy per iterate
  bool converged = false;
  long linear_iterations_total = 0;
  int indefinite_steps = 0;  // steps taken on an indefinite Jacobian
  int fallback_steps = 0;    // pseudo-transient (shifted) steps
  SolveStatus status = SolveStatus::iteration_cap;
};

std::string to_string(SolveStatus s);

// Discrete energy sum_i (1/2d_i) <A_i v_i, v_i> - sum_bottom |cell| H(v).
double discrete_energy(const FieldSet& v, const NonlinearitySpec& H);

// Sup-norm of the diagonally scaled nonlinear residual over free nodes.
double residual_sup(const FieldSet& v, const NonlinearitySpec& H, const BoundaryData& bc);

std::pair<FieldSet, SolveReport> solve_coupled(std::shared_ptr<const HalfSpaceGrid> grid,
                                               std::shared_ptr<const FractionalOrders> orders,
                                               const NonlinearitySpec& H, const BoundaryData& bc,
                                               const FieldSet& initial,
                                               const SolverOptions& opt = {});

std::pair<FieldSet, SolveReport> solve_radial(std::shared_ptr<const HalfSpaceGrid> grid,
                                              std::shared_ptr<const FractionalOrders> orders,
                                              const NonlinearitySpec& H, const BoundaryData& bc,
                                              const FieldSet& initial,
                                              const SolverOptions& opt = {});

struct ExtensionBC {
  LateralBC lateral = LateralBC::neumann;
  TopBC top = TopBC::neumann;
  std::optional<std::vector<double>> values;  // far-field Dirichlet values on every node
};

FieldSet harmonic_extension(const std::vector<double>& trace, double s,
                            std::shared_ptr<const HalfSpaceGrid> grid, const ExtensionBC& bc = {});

// -lim y^a dv/dy from the fit v = v0 + c y^{1-a} + e y^2 on the first three rows
std::vector<std::vector<double>> dtn(const FieldSet& v);

// sum of boundary reactions of a linear extension (conservation check)
double boundary_flux_balance(const FieldSet& v, const ExtensionBC& bc);

// initial and far-field profiles between states beta (x < 0) and alpha (x > 0)
FieldSet tanh_profile(std::shared_ptr<const HalfSpaceGrid> grid,
                      std::shared_ptr<const FractionalOrders> orders,
                      const std::vector<double>& alpha, const std::vector<double>& beta);
// exact half-Laplacian layer extension mid + half (2/pi) atan(x/(1+y))
FieldSet pn_exact_field(std::shared_ptr<const HalfSpaceGrid> grid,
                        std::shared_ptr<const FractionalOrders> orders,
                        const std::vector<double>& alpha, const std::vector<double>& beta);
// homogeneous extension of a step: mid + half sign(x) I_{x^2/(x^2+y^2)}(1/2, s)
FieldSet step_field(std::shared_ptr<const HalfSpaceGrid> grid,
                    std::shared_ptr<const FractionalOrders> orders,
                    const std::vector<double>& alpha, const std::vector<double>& beta);
// far-field value plus a Cauchy bump A / (1 + (x/w)^2)
FieldSet bump_profile(std::shared_ptr<const HalfSpaceGrid> grid,
                      std::shared_ptr<const FractionalOrders> orders,
                      const std::vector<double>& base, double amplitude, double width);
// 1-D field v(t, y) placed on a boundary-dimension-2 grid along direction (cos th, sin th)
FieldSet rotate_layer(const FieldSet& line, std::shared_ptr<const HalfSpaceGrid> grid2,
                      double theta);

}  // namespace fraclab
