#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/orders.hpp"

namespace fraclab {

struct FieldSet {
  std::shared_ptr<const HalfSpaceGrid> grid;
  std::shared_ptr<const FractionalOrders> orders;
  std::vector<std::vector<double>> values;  // [component][node], node = j*row + i

  int m() const { return static_cast<int>(values.size()); }
  double at(int comp, int i, int j) const { return values[comp][grid->index(i, j)]; }
  std::vector<double> trace(int comp) const;
};

FieldSet make_field(std::shared_ptr<const HalfSpaceGrid> grid,
                    std::shared_ptr<const FractionalOrders> orders, double value = 0.0);

// x-derivative at every node; centered inside, one-sided at lateral ends, zero at r = 0
std::vector<double> x_derivative(const HalfSpaceGrid& g, const std::vector<double>& v,
                                 int axis = 0);
std::vector<double> x_derivative_trace(const HalfSpaceGrid& g, const std::vector<double>& v);
// q = y^a dv/dy at every node, from exact cell fluxes of the y^{1-a} mode
std::vector<double> weighted_flux(const HalfSpaceGrid& g, const std::vector<double>& v, double a);

// Binary snapshot: "FLAB", u32 version, u32 m, Nx, Ny, radial, ambient_n, f64 orders[m],
// f64 values per component in node order. Version 2 appends u32 boundary_dim.
std::string encode_snapshot(const FieldSet& v);
void write_snapshot(const std::string& path, const FieldSet& v);

struct Snapshot {
  int m = 0, nx = 0, ny = 0, ambient_n = 1, boundary_dim = 1;
  bool radial = false;
  std::vector<double> orders;
  std::vector<std::vector<double>> values;
};
Snapshot decode_snapshot(const std::string& bytes);
Snapshot read_snapshot(const std::string& path);

}  // namespace fraclab
