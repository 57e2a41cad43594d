#pragma once

#include <vector>

#include "gridcert/grid_model.hpp"

namespace gridcert {

struct NewtonOptions {
  int max_iter = 50;
  double residual_tol = 1e-10;
  bool damping = true;
};

struct LoadFlowResult {
  bool converged = false;
  CVec v;
  int iterations = 0;
  double residual = 0.0;
};

/// s = diag(v) * conj(Y_LL) * (conj(v) - conj(w)).
CVec eval_F(const GridModel& model, const CVec& v);

/// Rectangular Jacobian of F. Rows (Re s_1..Re s_N, Im s_1..Im s_N),
/// columns (Re v_1..Re v_N, Im v_1..Im v_N).
Mat jacobian(const GridModel& model, const CVec& v);

LoadFlowResult solve_load_flow(const GridModel& model, const CVec& s,
                               const CVec& v_start,
                               const NewtonOptions& opts = {});

/// Newton started from the zero-load voltage w.
LoadFlowResult high_voltage_solution(const GridModel& model, const CVec& s,
                                     const NewtonOptions& opts = {});

struct NonSingularity {
  bool nonsingular = false;
  double min_singular_value = 0.0;
};

NonSingularity is_nonsingular(const GridModel& model, const CVec& v,
                              double sigma_tol = 1e-7);

/// Necessary condition for J_F(v) to be singular: exists m with
/// sum_n |(Y_LL^-1)_{m,n} i_n| >= |v_m|, i = Y_LL (v - w). Evaluated with a
/// small numerical slack on the inequality since singular points sit exactly
/// on equality for some grids.
bool singularity_necessary_condition(const GridModel& model, const CVec& v,
                                     double slack = 1e-9);

struct ContinuationResult {
  bool path_lost = false;
  double last_good_t = 0.0;
  std::vector<double> t;
  std::vector<CVec> states;
};

/// Trace load-flow solutions along the piecewise-linear injection path through
/// `waypoints` (t uniform across segments), Newton-correcting from the
/// previous solution. Stops with path_lost on Newton failure or a continuity
/// jump.
ContinuationResult continuation_trace(const GridModel& model,
                                      const std::vector<CVec>& waypoints,
                                      const CVec& v0, int steps_per_segment,
                                      const NewtonOptions& opts = {},
                                      double continuity_bound = 0.5);

}  // namespace gridcert
