#pragma once

#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

struct Edge {
  int p, q;
  double c;
};

// Finite-volume form of div(y^a grad .): sum over faces c_pq (v_p - v_q)^2.
// x-faces carry the y^a hat moment of the node row, y-faces the exact
// harmonic-mean coefficient 1 / int y^{-a} of the cell.
struct WeightedOperator {
  double a = 0.0;
  int nodes = 0;
  std::vector<Edge> edges;

  // (A v)_p = sum_q c_pq (v_p - v_q): the negative discrete divergence
  std::vector<double> apply(const std::vector<double>& v) const;
  double form(const std::vector<double>& v) const;  // sum c (v_p - v_q)^2
  double bilinear(const std::vector<double>& u, const std::vector<double>& v) const;
  std::vector<double> diagonal() const;
};

WeightedOperator assemble_operator(const HalfSpaceGrid& g, double a);

}  // namespace fraclab
