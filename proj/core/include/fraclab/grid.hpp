#pragma once

#include <vector>

namespace fraclab {

struct HalfSpaceGrid {
  int boundary_dim = 1;
  double L = 0.0;
  int nx = 0;
  double Y = 0.0;
  int ny = 0;
  double grading = 1.0;
  bool radial = false;
  int ambient_n = 1;

  double h = 0.0;
  std::vector<double> x;  // slab: [-L, L]; radial: r in [0, L]
  std::vector<double> y;  // ny + 1 graded nodes

  int row_size() const { return boundary_dim == 1 ? nx : nx * nx; }
  int boundary_node_count() const { return row_size(); }
  int node_count() const { return row_size() * (ny + 1); }
  int index(int i, int j) const { return j * nx + i; }
  int index(int i1, int i2, int j) const { return (j * nx + i2) * nx + i1; }
  // spatial dimension n of the boundary measure
  int measure_dim() const { return radial ? ambient_n : boundary_dim; }

  // lumped dual measure of each boundary node (includes omega r^{n-1} in radial mode)
  std::vector<double> row_measure() const;
  // coefficient multiplying (v_{i+1} - v_i)^2 per unit y-weight, 1-D direction
  double x_face_factor(int i) const;
  // 1-D lumped dual measure of x node i (slab or radial)
  double x_measure(int i) const;
  // hat-function moments int y^a phi_j dy, per node j
  std::vector<double> y_hat_moments(double a) const;
  // 1 / int_{y_j}^{y_{j+1}} y^{-a} dy, per cell j
  std::vector<double> y_face_kappa(double a) const;
  int y_cell(double yv) const;
};

HalfSpaceGrid build_grid(double L, int nx, double Y, int ny, double grading, bool radial = false,
                         int ambient_n = 1, int boundary_dim = 1);

// surface area of the unit sphere in R^n
double sphere_area(int n);

// int_{y0}^{y1} y^{a+k} dy
double power_moment(double y0, double y1, double a, int k);
// int y^a (y1-y)/(y1-y0), int y^a (y-y0)/(y1-y0) over [y0, y1]
void hat_moments(double y0, double y1, double a, double& lower, double& upper);

enum class RegionKind { full, cylinder, half_ball, boundary, fiber };

struct Region {
  RegionKind kind = RegionKind::full;
  double R = 0.0;
  int fiber = 0;  // row-node index for fiber regions

  static Region full_domain() { return {RegionKind::full, 0.0, 0}; }
  static Region cylinder(double R) { return {RegionKind::cylinder, R, 0}; }
  static Region half_ball(double R) { return {RegionKind::half_ball, R, 0}; }
  static Region boundary(double R = -1.0) { return {RegionKind::boundary, R, 0}; }
  static Region column(int row_node) { return {RegionKind::fiber, 0.0, row_node}; }
};

std::vector<double> region_weights(const HalfSpaceGrid& g, double a, const Region& region);

double weighted_integral(const std::vector<double>& f, double a, const Region& region,
                         const HalfSpaceGrid& g);

struct RestrictedSamples {
  std::vector<double> samples;
  std::vector<double> weights;
};

RestrictedSamples restrict_to_radius(const std::vector<double>& f, double R, RegionKind kind,
                                     double a, const HalfSpaceGrid& g);

// bilinear interpolation of a node field (boundary dimension 1)
double interpolate(const HalfSpaceGrid& g, const std::vector<double>& f, double xv, double yv);

}  // namespace fraclab
