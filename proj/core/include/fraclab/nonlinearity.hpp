#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fraclab {

struct FieldSet;
struct FractionalOrders;

enum class TermKind { monomial, cosine };

// monomial: c * prod u_i^{e_i};  cosine: c * cos(pi * sum k_i u_i)
struct Term {
  double coefficient = 0.0;
  TermKind kind = TermKind::monomial;
  std::vector<int> ints;
};

struct HEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

struct NonlinearitySpec {
  int m = 0;
  std::vector<Term> terms;
  std::string description;

  void add(const Term& t);
  double value(const double* u) const;
  void gradient(const double* u, double* g) const;
  HEval eval(const Eigen::VectorXd& u) const;
};

HEval eval_nonlinearity(const NonlinearitySpec& H, const std::vector<double>& u);

// "<coeff> <kind> <m ints>"
Term parse_term(const std::string& text, int m);
std::string format_term(const Term& t);

struct Box {
  std::vector<double> lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

// Tensor sampling when samples^m is small, a Halton point set otherwise.
std::vector<Eigen::VectorXd> sample_box(const Box& box, int samples_per_axis);

constexpr double orientability_tolerance = 1e-12;

struct OrientabilityReport {
  bool orientable = false;
  std::vector<int> theta;
  double worst_violation = 0.0;
  long samples = 0;
};

OrientabilityReport check_orientability(const NonlinearitySpec& H, const Box& box,
                                        int samples_per_axis = 17, int theta1 = +1);

struct SignCertificate {
  bool holds = false;
  double worst = 0.0;  // most violating sampled value
  long samples = 0;
};

SignCertificate certify_nonpositive(const NonlinearitySpec& H, const Box& box,
                                    int samples_per_axis = 17);
SignCertificate certify_gradient_nonnegative(const NonlinearitySpec& H, const Box& box,
                                             int samples_per_axis = 17);

struct HMonotoneReport {
  std::vector<bool> monotone;
  double pair_slack = 0.0;
};

HMonotoneReport check_H_monotone(const FieldSet& v, const NonlinearitySpec& H,
                                 const FractionalOrders& orders);

// Realized range of the boundary trace of each component.
Box trace_range(const FieldSet& v);

}  // namespace fraclab
