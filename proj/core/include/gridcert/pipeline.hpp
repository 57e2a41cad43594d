#pragma once

#include "gridcert/moment.hpp"
#include "gridcert/vset.hpp"

namespace gridcert {

/// Initial-state requirements not met: the query itself is invalid, as
/// opposed to an Unknown verdict on a valid query.
struct PreconditionViolated : Error {
  using Error::Error;
};

enum class FailureStage {
  None,
  ConnectivityFailed,
  CalibrationFailed,
  MembershipFailed,
  BoundaryNotExcluded,
};

std::string to_string(FailureStage s);

struct StageRecord {
  std::string name;
  std::string status;
  double millis = 0.0;
};

struct Verdict {
  bool admissible = false;
  FailureStage failure = FailureStage::None;
  std::vector<int> failing_ells;  // BoundaryNotExcluded detail
  std::string detail;

  double lambda_star = 0.0;
  ConstraintSet vset;
  std::vector<P0Result> boundary_results;
  std::vector<StageRecord> evidence;
};

struct PipelineOptions {
  int omega = 2;
  double beta = 1.0;
  Vec i_node_ref;  // empty -> uniform 1.0 p.u.
  LambdaSchedule schedule;
  double membership_tol = kMembershipTol;
  SolveOptions solver;
};

/// Framework driver: preconditions on the initial state, uncertainty
/// validation, lambda calibration, strict membership of the initial state in
/// V, and boundary exclusion for every constraint. Sound one-sided verdict:
/// never claims inadmissibility.
Verdict test_admissibility(const GridModel& model,
                           const SecuritySpec& security, const CVec& v_initial,
                           const UncertaintySet& uncertainty,
                           const PipelineOptions& opts = {});

struct KappaSearchOptions {
  double resolution = 0.01;
  double kappa_max = 1.0;
};

struct KappaResult {
  bool ok = false;
  double kappa_star = 0.0;    // last Admissible
  double first_unknown = 0.0; // bracket upper end (0 if none hit)
  std::vector<std::pair<double, bool>> tested;  // (kappa, admissible)
  std::string failure;        // set when !ok (NoAdmissibleKappa)
};

/// Bisection over the kappa-scaled family down to `resolution`; relies on
/// verdict monotonicity in kappa (region inclusion).
KappaResult max_kappa(const GridModel& model, const SecuritySpec& security,
                      const CVec& v_initial, const KappaTemplate& tmpl,
                      const PipelineOptions& opts = {},
                      const KappaSearchOptions& search = {});

}  // namespace gridcert
