#include "gridcert/pipeline.hpp"

#include <chrono>

#include "gridcert/load_flow.hpp"

namespace gridcert {

std::string to_string(FailureStage s) {
  switch (s) {
    case FailureStage::None: return "None";
    case FailureStage::ConnectivityFailed: return "ConnectivityFailed";
    case FailureStage::CalibrationFailed: return "CalibrationFailed";
    case FailureStage::MembershipFailed: return "MembershipFailed";
    case FailureStage::BoundaryNotExcluded: return "BoundaryNotExcluded";
  }
  return "?";
}

namespace {

class StageTimer {
public:
  explicit StageTimer(std::vector<StageRecord>& log) : log_(log) {}
  void record(const std::string& name, const std::string& status) {
    const auto now = clock::now();
    log_.push_back(StageRecord{
        name, status,
        std::chrono::duration<double, std::milli>(now - mark_).count()});
    mark_ = now;
  }

private:
  using clock = std::chrono::steady_clock;
  std::vector<StageRecord>& log_;
  clock::time_point mark_ = clock::now();
};

}  // namespace

Verdict test_admissibility(const GridModel& model,
                           const SecuritySpec& security, const CVec& v_initial,
                           const UncertaintySet& uncertainty,
                           const PipelineOptions& opts) {
  Verdict verdict;
  StageTimer timer(verdict.evidence);

  // (I1) initial state secured and non-singular. Degenerate limits make the
  // query itself invalid, same as an insecure initial state.
  ConstraintSet sec_set;
  try {
    sec_set = security_forms(model, security);
  } catch (const InvalidInput& e) {
    throw PreconditionViolated(e.what());
  }
  const auto sec_eval = eval_constraints(sec_set, v_initial);
  if (!(sec_eval.min_margin > 0.0))
    throw PreconditionViolated("initial state violates security limits");
  if (!is_nonsingular(model, v_initial).nonsingular)
    throw PreconditionViolated("initial state is singular");
  // (I2) initial injection inside the uncertainty set.
  if (!contains(uncertainty, eval_F(model, v_initial)))
    throw PreconditionViolated(
        "initial injection outside the uncertainty set");
  timer.record("preconditions", "ok");

  const auto region_report = validate(uncertainty);
  if (!region_report.ok) {
    verdict.failure = FailureStage::ConnectivityFailed;
    verdict.detail = region_report.reasons.empty()
                         ? "invalid uncertainty set"
                         : region_report.reasons.front();
    timer.record("uncertainty validation", verdict.detail);
    return verdict;
  }
  timer.record("uncertainty validation", "ok");

  const Vec i_node_ref = opts.i_node_ref.size() > 0
                             ? opts.i_node_ref
                             : Vec(Vec::Ones(model.n_pq()));
  const auto calib = calibrate_lambda(model, security, opts.beta, i_node_ref,
                                      opts.schedule);
  if (!calib.ok) {
    verdict.failure = FailureStage::CalibrationFailed;
    verdict.detail = calib.failure;
    timer.record("lambda calibration", verdict.detail);
    return verdict;
  }
  verdict.lambda_star = calib.lambda_star;
  verdict.vset = assemble_V(model, security, calib.aux);
  timer.record("lambda calibration",
               "lambda_star=" + std::to_string(calib.lambda_star));

  const auto v_eval = eval_constraints(verdict.vset, v_initial);
  if (!(v_eval.min_margin > opts.membership_tol)) {
    verdict.failure = FailureStage::MembershipFailed;
    verdict.detail = "initial state not strictly inside V (min margin " +
                     std::to_string(v_eval.min_margin) + ")";
    timer.record("membership", verdict.detail);
    return verdict;
  }
  timer.record("membership", "ok");

  verdict.boundary_results =
      check_P0_infeasible(model, verdict.vset, uncertainty, opts.omega);
  for (size_t ell = 0; ell < verdict.boundary_results.size(); ++ell)
    if (verdict.boundary_results[ell].status != P0Status::Infeasible)
      verdict.failing_ells.push_back(static_cast<int>(ell));
  if (!verdict.failing_ells.empty()) {
    verdict.failure = FailureStage::BoundaryNotExcluded;
    verdict.detail = std::to_string(verdict.failing_ells.size()) +
                     " boundary pieces not excluded";
    timer.record("boundary exclusion", verdict.detail);
    return verdict;
  }
  timer.record("boundary exclusion", "ok");
  verdict.admissible = true;
  return verdict;
}

KappaResult max_kappa(const GridModel& model, const SecuritySpec& security,
                      const CVec& v_initial, const KappaTemplate& tmpl,
                      const PipelineOptions& opts,
                      const KappaSearchOptions& search) {
  if (!(search.resolution > 0.0) || !(search.kappa_max >= search.resolution))
    throw InvalidInput("max_kappa: bad search options");

  KappaResult res;
  const auto admissible_at = [&](double kappa) {
    const auto verdict = test_admissibility(
        model, security, v_initial, tmpl.instantiate(kappa), opts);
    res.tested.emplace_back(kappa, verdict.admissible);
    return verdict.admissible;
  };

  double lo = search.resolution;
  if (!admissible_at(lo)) {
    res.failure = "NoAdmissibleKappa: smallest tested kappa already Unknown";
    res.first_unknown = lo;
    return res;
  }
  double hi = search.kappa_max;
  if (admissible_at(hi)) {
    res.ok = true;
    res.kappa_star = hi;
    res.first_unknown = 0.0;
    return res;
  }
  while (hi - lo > search.resolution) {
    const double mid = 0.5 * (lo + hi);
    if (admissible_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  res.ok = true;
  res.kappa_star = lo;
  res.first_unknown = hi;
  return res;
}

}  // namespace gridcert
