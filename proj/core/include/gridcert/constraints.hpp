#pragma once

#include <limits>
#include <string>
#include <vector>

#include "gridcert/grid_model.hpp"

namespace gridcert {

/// f(x) = constant + linear.x + x.quadratic.x over x = (Re v; Im v).
struct QuadraticForm {
  double constant = 0.0;
  Vec linear;
  Mat quadratic;

  double eval(const Vec& x) const {
    return constant + linear.dot(x) + x.dot(quadratic * x);
  }
  double eval_at(const CVec& v) const;
  int dim() const { return static_cast<int>(linear.size()); }
};

/// bound^2 - |u0 + coeffs^T v|^2 as a quadratic form in (Re v; Im v).
QuadraticForm bound_minus_abs2(Complex u0, const CVec& coeffs, double bound);

enum class ConstraintKind { VLow, VUp, IBranchSec, IBranchAux, INodeAux };

std::string to_string(ConstraintKind k);

struct Constraint {
  ConstraintKind kind;
  int owner_bus = -1;     // PQ bus (1-based as in the grid) for V/node kinds
  int branch_from = -1;   // directed pair for branch kinds
  int branch_to = -1;
  QuadraticForm form;
};

/// Ordered constraint list; items [0, split) form the V-tilde block when the
/// set was assembled with auxiliary forms first.
struct ConstraintSet {
  std::vector<Constraint> items;
  int split = 0;

  int size() const { return static_cast<int>(items.size()); }
};

struct SecuritySpec {
  Vec v_min;   // per PQ bus
  Vec v_max;   // per PQ bus
  Vec i_max;   // per directed branch row, aligned with GridModel::branch_rows

  static SecuritySpec uniform(const GridModel& model, double v_min,
                              double v_max, double i_max);
  void validate(const GridModel& model) const;
};

struct AuxBounds {
  double beta = 1.0;
  Vec i_branch;     // per directed branch row: beta * i_max
  Vec i_node_ref;   // per PQ bus
  double lambda = 0.0;
  Vec i_node;       // per PQ bus: lambda * i_node_ref

  static AuxBounds make(const GridModel& model, const SecuritySpec& security,
                        double beta, const Vec& i_node_ref, double lambda);
};

ConstraintSet security_forms(const GridModel& model, const SecuritySpec& spec);
ConstraintSet aux_forms(const GridModel& model, const AuxBounds& aux);

struct ConstraintEvaluation {
  Vec margins;
  double min_margin = std::numeric_limits<double>::infinity();
};

ConstraintEvaluation eval_constraints(const ConstraintSet& cs, const CVec& v);

inline constexpr double kMembershipTol = 1e-8;

Vec voltage_to_x(const CVec& v);
CVec x_to_voltage(const Vec& x);

}  // namespace gridcert
