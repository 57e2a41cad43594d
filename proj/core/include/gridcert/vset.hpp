#pragma once

#include "gridcert/conic.hpp"
#include "gridcert/constraints.hpp"

namespace gridcert {

/// Non-singularity probe P1(m, n, psi, phi): a point of the auxiliary set
/// whose m-th voltage magnitude is dominated by the signed current component
/// at bus n. Joint infeasibility over all 4N^2 instances certifies the
/// auxiliary set non-singular.
ConicProblem formulate_P1(const GridModel& model, const AuxBounds& aux, int m,
                          int n, int psi, int phi);

struct P1Check {
  bool all_infeasible = false;
  // first failing instance when not all infeasible
  int m = -1, n = -1, psi = 0, phi = 0;
  bool backend_unknown = false;  // conservative failure, reported distinctly
  std::string reason;
};

P1Check check_P1_all(const GridModel& model, const AuxBounds& aux,
                     const SolveOptions& opts = {});

struct LambdaSchedule {
  enum class Mode { Ratio, Step };
  double start = 0.1;
  Mode mode = Mode::Ratio;
  double value = 1.2;  // ratio (> 1) or step (> 0)
  double cap = 1.0;    // p.u. bound on lambda
};

struct CalibrationResult {
  bool ok = false;
  double lambda_star = 0.0;
  AuxBounds aux;        // populated with lambda_star when ok
  std::string failure;  // set when !ok
  int steps = 0;
};

/// Grows lambda along the schedule while all P1 instances stay infeasible;
/// returns the last (penultimate) certified value. Backend Unknown is treated
/// as "not infeasible" and stops the sweep.
CalibrationResult calibrate_lambda(const GridModel& model,
                                   const SecuritySpec& security, double beta,
                                   const Vec& i_node_ref,
                                   const LambdaSchedule& schedule = {});

/// Candidate voltage set V: auxiliary forms first (items [0, split)), then
/// the security forms.
ConstraintSet assemble_V(const GridModel& model, const SecuritySpec& security,
                         const AuxBounds& aux);

}  // namespace gridcert
