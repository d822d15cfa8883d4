#include "fraclab/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "fraclab/error.hpp"
#include "fraclab/io.hpp"

namespace fraclab {

double LineFunction::sample(double xv) const {
  const double t = (xv - x0) / h;
  require(t >= -1e-9 && t <= size() - 1 + 1e-9, ErrorKind::invalid_argument,
          "line function: sample outside the range");
  const int k = std::clamp(static_cast<int>(std::floor(t)), 0, size() - 2);
  const double f = t - k;
  return (1 - f) * u[k] + f * u[k + 1];
}

std::string LineFunction::to_csv() const {
  CsvTable t;
  t.comments.push_back(tail == TailKind::constant
                           ? "tail constant"
                           : "tail decay " + format_double(alpha) + " " + format_double(beta));
  t.columns = {"x", "u"};
  for (int k = 0; k < size(); ++k) t.rows.push_back({x(k), u[k]});
  return t.str();
}

LineFunction LineFunction::from_csv(const std::string& text) {
  const auto t = CsvTable::parse(text);
  require(t.columns.size() == 2 && t.rows.size() >= 3, ErrorKind::malformed_input,
          "line function csv: need two columns and three rows");
  LineFunction f;
  for (const auto& c : t.comments) {
    std::istringstream in(c);
    std::string key, kind, a, b;
    in >> key >> kind;
    if (key != "tail") continue;
    if (kind == "decay") {
      in >> a >> b;
      f.tail = TailKind::decay;
      f.alpha = parse_double(a);
      f.beta = parse_double(b);
    }
  }
  f.x0 = t.rows.front()[0];
  f.h = (t.rows.back()[0] - f.x0) / (t.rows.size() - 1);
  for (const auto& r : t.rows) f.u.push_back(r[1]);
  return f;
}

namespace {

double power_integral(double e, double z0, double z1) {
  if (e == -1.0) return std::log(z1 / z0);
  return (std::pow(z1, e + 1) - std::pow(z0, e + 1)) / (e + 1);
}

// int_{z0}^{z1} (f0 + (f1-f0)(z-z0)/(z1-z0)) z^{-1-2s} dz
double linear_against_kernel(double f0, double f1, double z0, double z1, double s) {
  const double slope = (f1 - f0) / (z1 - z0);
  return (f0 - slope * z0) * power_integral(-1 - 2 * s, z0, z1) +
         slope * power_integral(-2 * s, z0, z1);
}

// int_{zend}^inf xend / (xr + z) z^{-1-2s} dz, with xr + zend = xend > 0
double decay_tail_integral(double xr, double zend, double xend, double s) {
  static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
  static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                               0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                               0.0622535239386479, 0.0271524594117541};
  // z = zend / t, then t = w^{1/(2s+1)}
  const double p = 1.0 / (2 * s + 1);
  const int panels = 16;
  double acc = 0.0;
  for (int q = 0; q < panels; ++q) {
    const double a = double(q) / panels, b = double(q + 1) / panels;
    for (int k = 0; k < 8; ++k)
      for (int sg = -1; sg <= 1; sg += 2) {
        const double w = 0.5 * (a + b) + sg * 0.5 * (b - a) * gx[k];
        acc += 0.5 * (b - a) * gw[k] * xend / (xr * std::pow(w, p) + zend);
      }
  }
  return std::pow(zend, -2 * s) * p * acc;
}

}  // namespace

double frac_lap_pv_at(const LineFunction& f, double s, int k, double* tail_bound) {
  require(s > 0 && s < 1, ErrorKind::invalid_argument, "pv: s must lie in (0,1)");
  const int N = f.size();
  require(N >= 5, ErrorKind::invalid_argument, "pv: too few samples");
  const int margin = static_cast<int>(std::ceil(0.1 * (N - 1)));
  require(k >= margin && k <= N - 1 - margin, ErrorKind::unreliable_point,
          "pv: node too close to the domain edge");
  const auto& u = f.u;
  const double h = f.h, x = f.x(k), uk = u[k];
  const int ms = std::min(k, N - 1 - k);
  // D(z) = 2u(x) - u(x+z) - u(x-z), minus q z^2 with q from the second difference
  const double q = (2 * uk - u[k + 1] - u[k - 1]) / (h * h);
  double I = q * std::pow(h, 2 - 2 * s) / (2 - 2 * s);
  I += q * power_integral(1 - 2 * s, h, ms * h);
  double prev = 0.0;
  for (int j = 1; j < ms; ++j) {
    const double z1 = (j + 1) * h;
    const double next = 2 * uk - u[k + j + 1] - u[k - j - 1] - q * z1 * z1;
    I += linear_against_kernel(prev, next, j * h, z1, s);
    prev = next;
  }
  // one-sided sampled parts beyond the symmetric range
  for (int j = ms; j < N - 1 - k; ++j)
    I += linear_against_kernel(uk - u[k + j], uk - u[k + j + 1], j * h, (j + 1) * h, s);
  for (int j = ms; j < k; ++j)
    I += linear_against_kernel(uk - u[k - j], uk - u[k - j - 1], j * h, (j + 1) * h, s);
  // tails
  const double zr = f.x_end() - x, zl = x - f.x0;
  const double cr = (uk - u[N - 1]) * std::pow(zr, -2 * s) / (2 * s);
  const double cl = (uk - u[0]) * std::pow(zl, -2 * s) / (2 * s);
  double tr = cr, tl = cl;
  if (f.tail == TailKind::decay) {
    require(f.x_end() > 0 && f.x0 < 0, ErrorKind::invalid_argument,
            "pv: decay tails need a domain straddling 0");
    tr = (uk - f.alpha) * std::pow(zr, -2 * s) / (2 * s) -
         (u[N - 1] - f.alpha) * decay_tail_integral(x, zr, f.x_end(), s);
    tl = (uk - f.beta) * std::pow(zl, -2 * s) / (2 * s) -
         (u[0] - f.beta) * decay_tail_integral(-x, zl, -f.x0, s);
  }
  if (tail_bound) *tail_bound = pv_constant(s) * (std::abs(tr - cr) + std::abs(tl - cl));
  return pv_constant(s) * (I + tr + tl);
}

PvResult frac_lap_pv(const LineFunction& f, double s) {
  const int N = f.size();
  const int margin = static_cast<int>(std::ceil(0.1 * (N - 1)));
  PvResult r;
  r.first = margin;
  for (int k = margin; k <= N - 1 - margin; ++k) {
    double tb = 0.0;
    r.values.push_back(frac_lap_pv_at(f, s, k, &tb));
    r.tail_bound = std::max(r.tail_bound, tb);
  }
  return r;
}

void fft_inplace(std::vector<double>& re, std::vector<double>& im, bool inverse) {
  const size_t n = re.size();
  require(n > 0 && (n & (n - 1)) == 0 && im.size() == n, ErrorKind::invalid_argument,
          "fft: length must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2 * std::numbers::pi / len * (inverse ? 1 : -1);
    for (size_t i = 0; i < n; i += len)
      for (size_t k = 0; k < len / 2; ++k) {
        const double wr = std::cos(ang * k), wi = std::sin(ang * k);
        const size_t a = i + k, b = i + k + len / 2;
        const double xr = re[b] * wr - im[b] * wi, xi = re[b] * wi + im[b] * wr;
        re[b] = re[a] - xr;
        im[b] = im[a] - xi;
        re[a] += xr;
        im[a] += xi;
      }
  }
  if (inverse)
    for (size_t i = 0; i < n; ++i) {
      re[i] /= n;
      im[i] /= n;
    }
}

std::vector<double> frac_lap_spectral(const std::vector<double>& u, double period, double s) {
  require(s > 0 && s < 1, ErrorKind::invalid_argument, "spectral: s must lie in (0,1)");
  require(period > 0, ErrorKind::invalid_argument, "spectral: period must be positive");
  std::vector<double> re = u, im(u.size(), 0.0);
  fft_inplace(re, im, false);
  const long n = static_cast<long>(u.size());
  for (long k = 0; k < n; ++k) {
    const long kk = k <= n / 2 ? k : k - n;
    const double sym = std::pow(std::abs(2 * std::numbers::pi * kk / period), 2 * s);
    re[k] *= sym;
    im[k] *= sym;
  }
  fft_inplace(re, im, true);
  return re;
}

CrossValidation cross_validate(const LineFunction& u, double s,
                               std::shared_ptr<const HalfSpaceGrid> grid, const ExtensionBC& bc) {
  const auto& g = *grid;
  require(g.boundary_dim == 1 && !g.radial, ErrorKind::grid_mismatch,
          "cross-validate: needs a 1-D slab grid");
  const auto pv = frac_lap_pv(u, s);
  const double pv_lo = u.x(pv.first), pv_hi = u.x(pv.first + int(pv.values.size()) - 1);
  auto pv_at = [&](double xv) {
    const double t = (xv - pv_lo) / u.h;
    const int k = std::clamp(static_cast<int>(std::floor(t)), 0, int(pv.values.size()) - 2);
    const double f = t - k;
    return (1 - f) * pv.values[k] + f * pv.values[k + 1];
  };
  std::vector<double> trace(g.nx);
  for (int i = 0; i < g.nx; ++i) trace[i] = u.sample(g.x[i]);
  const auto ext = harmonic_extension(trace, s, grid, bc);
  const auto flux = dtn(ext)[0];
  const double d = make_orders({s}).d[0];
  const bool periodic = bc.lateral == LateralBC::periodic;
  std::vector<double> spec;
  if (periodic) {
    spec = frac_lap_spectral(std::vector<double>(trace.begin(), trace.end() - 1), 2 * g.L, s);
    spec.push_back(spec.front());
  }
  CrossValidation cv;
  cv.pv_vs_spectral = periodic ? 0.0 : NAN;
  const double win = periodic ? g.L : 0.6 * g.L;
  for (int i = 0; i < g.nx; ++i) {
    const double xv = g.x[i];
    if (std::abs(xv) > win * (1 + 1e-12) || xv < pv_lo || xv > pv_hi) continue;
    const double p = pv_at(xv);
    cv.x.push_back(xv);
    cv.pv.push_back(p);
    cv.flux.push_back(flux[i]);
    cv.pv_vs_dtn = std::max(cv.pv_vs_dtn, std::abs(d * p - flux[i]));
    if (periodic) {
      cv.spectral.push_back(spec[i]);
      cv.pv_vs_spectral = std::max(cv.pv_vs_spectral, std::abs(p - spec[i]));
    }
  }
  return cv;
}

}  // namespace fraclab
