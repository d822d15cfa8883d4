#include "fraclab/field.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "fraclab/error.hpp"
#include "fraclab/io.hpp"

namespace fraclab {

static_assert(std::endian::native == std::endian::little, "snapshot layout assumes little-endian");

std::vector<double> FieldSet::trace(int comp) const {
  return {values[comp].begin(), values[comp].begin() + grid->row_size()};
}

FieldSet make_field(std::shared_ptr<const HalfSpaceGrid> grid,
                    std::shared_ptr<const FractionalOrders> orders, double value) {
  FieldSet f;
  f.values.assign(orders->m, std::vector<double>(grid->node_count(), value));
  f.grid = std::move(grid);
  f.orders = std::move(orders);
  return f;
}

std::vector<double> x_derivative(const HalfSpaceGrid& g, const std::vector<double>& v, int axis) {
  std::vector<double> d(v.size());
  const int nx = g.nx, rs = g.row_size();
  const int stride = axis == 0 ? 1 : nx;
  const double ih = 1.0 / g.h, ih2 = 0.5 / g.h;
  for (int p = 0; p < g.node_count(); ++p) {
    const int q = p % rs;
    const int i = axis == 0 ? q % nx : q / nx;
    if (i == 0) {
      d[p] = g.radial ? 0.0 : (v[p + stride] - v[p]) * ih;
    } else if (i == nx - 1) {
      d[p] = (v[p] - v[p - stride]) * ih;
    } else {
      d[p] = (v[p + stride] - v[p - stride]) * ih2;
    }
  }
  return d;
}

std::vector<double> x_derivative_trace(const HalfSpaceGrid& g, const std::vector<double>& v) {
  auto d = x_derivative(g, v);
  d.resize(g.row_size());
  return d;
}

std::vector<double> weighted_flux(const HalfSpaceGrid& g, const std::vector<double>& v, double a) {
  const auto kappa = g.y_face_kappa(a);
  const int rs = g.row_size(), ny = g.ny;
  std::vector<double> mid(ny);
  for (int j = 0; j < ny; ++j) mid[j] = 0.5 * (g.y[j] + g.y[j + 1]);
  std::vector<double> q(v.size());
  std::vector<double> f(ny);
  for (int c = 0; c < rs; ++c) {
    for (int j = 0; j < ny; ++j) f[j] = kappa[j] * (v[(j + 1) * rs + c] - v[j * rs + c]);
    q[c] = f[0];
    for (int j = 1; j < ny; ++j) {
      const double t = (g.y[j] - mid[j - 1]) / (mid[j] - mid[j - 1]);
      q[j * rs + c] = f[j - 1] + t * (f[j] - f[j - 1]);
    }
    const double t = (g.y[ny] - mid[ny - 2]) / (mid[ny - 1] - mid[ny - 2]);
    q[ny * rs + c] = f[ny - 2] + t * (f[ny - 1] - f[ny - 2]);
  }
  return q;
}

namespace {

template <class T>
void put(std::string& out, T x) {
  char b[sizeof(T)];
  std::memcpy(b, &x, sizeof(T));
  out.append(b, sizeof(T));
}

template <class T>
T get(const std::string& in, size_t& pos) {
  require(pos + sizeof(T) <= in.size(), ErrorKind::malformed_input, "snapshot: truncated");
  T x;
  std::memcpy(&x, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return x;
}

}  // namespace

std::string encode_snapshot(const FieldSet& v) {
  const auto& g = *v.grid;
  const std::uint32_t version = g.boundary_dim == 1 ? 1 : 2;
  std::string out = "FLAB";
  put<std::uint32_t>(out, version);
  put<std::uint32_t>(out, v.m());
  put<std::uint32_t>(out, g.nx);
  put<std::uint32_t>(out, g.ny);
  put<std::uint32_t>(out, g.radial ? 1 : 0);
  put<std::uint32_t>(out, g.ambient_n);
  for (double s : v.orders->s) put<double>(out, s);
  if (version == 2) put<std::uint32_t>(out, g.boundary_dim);
  for (const auto& comp : v.values)
    for (double x : comp) put<double>(out, x);
  return out;
}

void write_snapshot(const std::string& path, const FieldSet& v) {
  write_file(path, encode_snapshot(v));
}

Snapshot decode_snapshot(const std::string& in) {
  require(in.size() >= 4 && in.compare(0, 4, "FLAB") == 0, ErrorKind::malformed_input,
          "snapshot: bad magic");
  size_t pos = 4;
  Snapshot s;
  const auto version = get<std::uint32_t>(in, pos);
  require(version == 1 || version == 2, ErrorKind::malformed_input, "snapshot: unknown version");
  s.m = get<std::uint32_t>(in, pos);
  s.nx = get<std::uint32_t>(in, pos);
  s.ny = get<std::uint32_t>(in, pos);
  s.radial = get<std::uint32_t>(in, pos) != 0;
  s.ambient_n = get<std::uint32_t>(in, pos);
  for (int i = 0; i < s.m; ++i) s.orders.push_back(get<double>(in, pos));
  if (version == 2) s.boundary_dim = get<std::uint32_t>(in, pos);
  const size_t row = s.boundary_dim == 1 ? s.nx : size_t(s.nx) * s.nx;
  const size_t count = row * (s.ny + 1);
  s.values.resize(s.m);
  for (auto& comp : s.values) {
    comp.resize(count);
    for (auto& x : comp) x = get<double>(in, pos);
  }
  require(pos == in.size(), ErrorKind::malformed_input, "snapshot: trailing bytes");
  return s;
}

Snapshot read_snapshot(const std::string& path) { return decode_snapshot(read_file(path)); }

}  // namespace fraclab
