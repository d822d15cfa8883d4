#include "fraclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/error.hpp"
#include "fraclab/orders.hpp"

namespace fraclab {

HalfSpaceGrid build_grid(double L, int nx, double Y, int ny, double grading, bool radial,
                         int ambient_n, int boundary_dim) {
  require(L > 0 && Y > 0, ErrorKind::invalid_argument, "grid: L and Y must be positive");
  require(nx >= 3 && nx % 2 == 1, ErrorKind::invalid_argument, "grid: Nx must be odd and >= 3");
  require(ny >= 2, ErrorKind::invalid_argument, "grid: Ny must be >= 2");
  require(grading >= 1.0, ErrorKind::invalid_argument, "grid: grading must be >= 1");
  require(boundary_dim == 1 || boundary_dim == 2, ErrorKind::invalid_argument,
          "grid: boundary dimension must be 1 or 2");
  require(ambient_n >= 1, ErrorKind::invalid_argument, "grid: ambient n must be >= 1");
  require(!(radial && boundary_dim != 1), ErrorKind::invalid_argument,
          "grid: radial mode requires boundary dimension 1");
  HalfSpaceGrid g;
  g.boundary_dim = boundary_dim;
  g.L = L;
  g.nx = nx;
  g.Y = Y;
  g.ny = ny;
  g.grading = grading;
  g.radial = radial;
  g.ambient_n = radial ? ambient_n : boundary_dim;
  const double x0 = radial ? 0.0 : -L;
  g.h = (L - x0) / (nx - 1);
  g.x.resize(nx);
  for (int i = 0; i < nx; ++i) g.x[i] = x0 + g.h * i;
  if (!radial) g.x[(nx - 1) / 2] = 0.0;
  g.x[nx - 1] = L;
  g.y.resize(ny + 1);
  for (int j = 0; j <= ny; ++j)
    g.y[j] = grading == 1.0 ? Y * j / ny : Y * std::pow(static_cast<double>(j) / ny, grading);
  g.y[ny] = Y;
  return g;
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma_fn(0.5 * n);
}

double power_moment(double y0, double y1, double a, int k) {
  const double p = a + k + 1.0;
  return (std::pow(y1, p) - std::pow(y0, p)) / p;
}

void hat_moments(double y0, double y1, double a, double& lower, double& upper) {
  const double dy = y1 - y0;
  if (y0 == 0.0 || dy > 0.5 * y0) {
    const double m0 = power_moment(y0, y1, a, 0);
    const double m1 = power_moment(y0, y1, a, 1);
    lower = (y1 * m0 - m1) / dy;
    upper = (m1 - y0 * m0) / dy;
    return;
  }
  // thin cell away from 0: smooth integrand, Gauss-Legendre avoids cancellation
  static const double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
  static const double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};
  lower = upper = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      const double t = 0.5 * (1.0 + sgn * gx[k]);
      const double w = 0.5 * dy * gw[k] * std::pow(y0 + dy * t, a);
      lower += w * (1.0 - t);
      upper += w * t;
    }
}

double HalfSpaceGrid::x_measure(int i) const {
  if (!radial) return (i == 0 || i == nx - 1) ? 0.5 * h : h;
  const double n = ambient_n;
  const double lo = i == 0 ? 0.0 : x[i] - 0.5 * h;
  const double hi = i == nx - 1 ? x[i] : x[i] + 0.5 * h;
  return sphere_area(ambient_n) * (std::pow(hi, n) - std::pow(lo, n)) / n;
}

std::vector<double> HalfSpaceGrid::row_measure() const {
  std::vector<double> m1(nx);
  for (int i = 0; i < nx; ++i) m1[i] = x_measure(i);
  if (boundary_dim == 1) return m1;
  std::vector<double> m(nx * nx);
  for (int i2 = 0; i2 < nx; ++i2)
    for (int i1 = 0; i1 < nx; ++i1) m[i2 * nx + i1] = m1[i1] * m1[i2];
  return m;
}

double HalfSpaceGrid::x_face_factor(int i) const {
  if (!radial) return 1.0 / h;
  const double rf = x[i] + 0.5 * h;
  return sphere_area(ambient_n) * std::pow(rf, ambient_n - 1) / h;
}

std::vector<double> HalfSpaceGrid::y_hat_moments(double a) const {
  std::vector<double> w(ny + 1, 0.0);
  for (int j = 0; j < ny; ++j) {
    double lo, hi;
    hat_moments(y[j], y[j + 1], a, lo, hi);
    w[j] += lo;
    w[j + 1] += hi;
  }
  return w;
}

std::vector<double> HalfSpaceGrid::y_face_kappa(double a) const {
  std::vector<double> k(ny);
  for (int j = 0; j < ny; ++j) k[j] = 1.0 / power_moment(y[j], y[j + 1], -a, 0);
  return k;
}

int HalfSpaceGrid::y_cell(double yv) const {
  auto it = std::upper_bound(y.begin(), y.end(), yv);
  int j = static_cast<int>(it - y.begin()) - 1;
  return std::clamp(j, 0, ny - 1);
}

namespace {

double overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo)) / (b - a);
}

// corner weights of 1-D x cell i: part attributed to node i and node i+1
void x_corner(const HalfSpaceGrid& g, int i, double& lo, double& hi) {
  if (!g.radial) {
    lo = hi = 0.5 * g.h;
    return;
  }
  const double n = g.ambient_n, om = sphere_area(g.ambient_n);
  const double a = g.x[i], m = g.x[i] + 0.5 * g.h, b = g.x[i + 1];
  lo = om * (std::pow(m, n) - std::pow(a, n)) / n;
  hi = om * (std::pow(b, n) - std::pow(m, n)) / n;
}

constexpr int subsamples = 16;

// fraction of the box [lo,hi] (dim 1..3) with |X| < R
double ball_fraction(const double* lo, const double* hi, int dim, double R) {
  double near = 0.0, far = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double c = std::clamp(0.0, lo[k], hi[k]);
    near += c * c;
    far += std::max(lo[k] * lo[k], hi[k] * hi[k]);
  }
  const double R2 = R * R;
  if (near >= R2) return 0.0;
  if (far <= R2) return 1.0;
  const int ns = dim == 3 ? 8 : subsamples;
  long inside = 0, total = 0;
  double p[3];
  for (int a = 0; a < ns; ++a) {
    p[0] = lo[0] + (hi[0] - lo[0]) * (a + 0.5) / ns;
    for (int b = 0; b < (dim > 1 ? ns : 1); ++b) {
      if (dim > 1) p[1] = lo[1] + (hi[1] - lo[1]) * (b + 0.5) / ns;
      for (int c = 0; c < (dim > 2 ? ns : 1); ++c) {
        if (dim > 2) p[2] = lo[2] + (hi[2] - lo[2]) * (c + 0.5) / ns;
        double r2 = 0.0;
        for (int k = 0; k < dim; ++k) r2 += p[k] * p[k];
        inside += r2 < R2;
        ++total;
      }
    }
  }
  return static_cast<double>(inside) / total;
}

double x_interval_fraction(const HalfSpaceGrid& g, int i, double R) {
  if (R < 0) return 1.0;
  return overlap(g.x[i], g.x[i + 1], -R, R);
}

}  // namespace

std::vector<double> region_weights(const HalfSpaceGrid& g, double a, const Region& region) {
  require(a > -1.0 && a < 1.0, ErrorKind::invalid_argument, "quadrature: a must lie in (-1,1)");
  const double ext = std::min(g.L, g.Y);
  if (region.kind == RegionKind::cylinder || region.kind == RegionKind::half_ball)
    require(region.R >= 0 && region.R <= ext * (1 + 1e-12), ErrorKind::invalid_argument,
            "quadrature: R exceeds the grid extent");
  if (region.kind == RegionKind::boundary)
    require(region.R <= g.L * (1 + 1e-12), ErrorKind::invalid_argument,
            "quadrature: R exceeds the grid extent");
  std::vector<double> w(g.node_count(), 0.0);
  const int rs = g.row_size();

  if (region.kind == RegionKind::fiber) {
    require(region.fiber >= 0 && region.fiber < rs, ErrorKind::invalid_argument,
            "quadrature: fiber index out of range");
    const auto wy = g.y_hat_moments(a);
    for (int j = 0; j <= g.ny; ++j) w[j * rs + region.fiber] = wy[j];
    return w;
  }

  std::vector<double> cxl(g.nx - 1), cxh(g.nx - 1);
  for (int i = 0; i + 1 < g.nx; ++i) x_corner(g, i, cxl[i], cxh[i]);
  std::vector<double> wyl(g.ny), wyh(g.ny);
  for (int j = 0; j < g.ny; ++j) hat_moments(g.y[j], g.y[j + 1], a, wyl[j], wyh[j]);
  const double R = region.R;

  if (g.boundary_dim == 1) {
    if (region.kind == RegionKind::boundary) {
      for (int i = 0; i + 1 < g.nx; ++i) {
        const double f = x_interval_fraction(g, i, R);
        w[i] += f * cxl[i];
        w[i + 1] += f * cxh[i];
      }
      return w;
    }
    for (int j = 0; j < g.ny; ++j) {
      const double fy = region.kind == RegionKind::cylinder ? overlap(g.y[j], g.y[j + 1], 0, R) : 1.0;
      if (fy == 0.0) continue;
      for (int i = 0; i + 1 < g.nx; ++i) {
        double f = 1.0;
        if (region.kind == RegionKind::cylinder) {
          f = fy * overlap(g.x[i], g.x[i + 1], -R, R);
        } else if (region.kind == RegionKind::half_ball) {
          const double lo[2] = {g.x[i], g.y[j]}, hi[2] = {g.x[i + 1], g.y[j + 1]};
          f = ball_fraction(lo, hi, 2, R);
        }
        if (f == 0.0) continue;
        w[g.index(i, j)] += f * cxl[i] * wyl[j];
        w[g.index(i + 1, j)] += f * cxh[i] * wyl[j];
        w[g.index(i, j + 1)] += f * cxl[i] * wyh[j];
        w[g.index(i + 1, j + 1)] += f * cxh[i] * wyh[j];
      }
    }
    return w;
  }

  // boundary dimension 2
  auto disc = [&](int i1, int i2) {
    if (R < 0 || region.kind == RegionKind::full) return 1.0;
    const double lo[2] = {g.x[i1], g.x[i2]}, hi[2] = {g.x[i1 + 1], g.x[i2 + 1]};
    return ball_fraction(lo, hi, 2, R);
  };
  const int jmax = region.kind == RegionKind::boundary ? 1 : g.ny;
  for (int j = 0; j < jmax; ++j) {
    double fy = 1.0;
    if (region.kind == RegionKind::cylinder) fy = overlap(g.y[j], g.y[j + 1], 0, R);
    if (fy == 0.0) continue;
    for (int i2 = 0; i2 + 1 < g.nx; ++i2)
      for (int i1 = 0; i1 + 1 < g.nx; ++i1) {
        double f;
        if (region.kind == RegionKind::half_ball) {
          const double lo[3] = {g.x[i1], g.x[i2], g.y[j]},
                       hi[3] = {g.x[i1 + 1], g.x[i2 + 1], g.y[j + 1]};
          f = ball_fraction(lo, hi, 3, R);
        } else {
          f = fy * disc(i1, i2);
        }
        if (f == 0.0) continue;
        const double cx[2][2] = {{cxl[i1] * cxl[i2], cxh[i1] * cxl[i2]},
                                 {cxl[i1] * cxh[i2], cxh[i1] * cxh[i2]}};
        if (region.kind == RegionKind::boundary) {
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) w[g.index(i1 + c, i2 + b, 0)] += f * cx[b][c];
          continue;
        }
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c) {
            w[g.index(i1 + c, i2 + b, j)] += f * cx[b][c] * wyl[j];
            w[g.index(i1 + c, i2 + b, j + 1)] += f * cx[b][c] * wyh[j];
          }
      }
  }
  return w;
}

double weighted_integral(const std::vector<double>& f, double a, const Region& region,
                         const HalfSpaceGrid& g) {
  require(static_cast<int>(f.size()) == g.node_count(), ErrorKind::grid_mismatch,
          "quadrature: sample count differs from node count");
  const auto w = region_weights(g, a, region);
  double s = 0.0;
  for (size_t p = 0; p < w.size(); ++p)
    if (w[p] != 0.0) s += w[p] * f[p];
  return s;
}

RestrictedSamples restrict_to_radius(const std::vector<double>& f, double R, RegionKind kind,
                                     double a, const HalfSpaceGrid& g) {
  require(kind == RegionKind::cylinder || kind == RegionKind::half_ball,
          ErrorKind::invalid_argument, "restrict: region must be C_R or B_R^+");
  require(static_cast<int>(f.size()) == g.node_count(), ErrorKind::grid_mismatch,
          "restrict: sample count differs from node count");
  RestrictedSamples r;
  r.weights = region_weights(g, a, Region{kind, R, 0});
  r.samples = f;
  for (size_t p = 0; p < f.size(); ++p)
    if (r.weights[p] == 0.0) r.samples[p] = 0.0;
  return r;
}

double interpolate(const HalfSpaceGrid& g, const std::vector<double>& f, double xv, double yv) {
  const double t = (xv - g.x[0]) / g.h;
  const int i = std::clamp(static_cast<int>(std::floor(t)), 0, g.nx - 2);
  const double tx = std::clamp(t - i, 0.0, 1.0);
  const int j = g.y_cell(yv);
  const double ty = std::clamp((yv - g.y[j]) / (g.y[j + 1] - g.y[j]), 0.0, 1.0);
  const double f00 = f[g.index(i, j)], f10 = f[g.index(i + 1, j)];
  const double f01 = f[g.index(i, j + 1)], f11 = f[g.index(i + 1, j + 1)];
  return (1 - ty) * ((1 - tx) * f00 + tx * f10) + ty * ((1 - tx) * f01 + tx * f11);
}

}  // namespace fraclab
