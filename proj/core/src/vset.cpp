#include "gridcert/vset.hpp"

#include <cmath>

namespace gridcert {

namespace {

// Real/imaginary parts of an affine complex expression u0 + coeffs^T v as
// rows over x = (Re v; Im v).
struct AffinePair {
  double re0, im0;
  Vec re, im;
};

AffinePair affine_rows(Complex u0, const CVec& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  AffinePair a;
  a.re0 = u0.real();
  a.im0 = u0.imag();
  a.re = Vec::Zero(2 * n);
  a.im = Vec::Zero(2 * n);
  for (int k = 0; k < n; ++k) {
    a.re(k) = coeffs(k).real();
    a.re(n + k) = -coeffs(k).imag();
    a.im(k) = coeffs(k).imag();
    a.im(n + k) = coeffs(k).real();
  }
  return a;
}

// |u0 + coeffs^T v| <= bound as a 3-dim second-order cone block.
void add_abs_cap(ConicProblemBuilder& b, Complex u0, const CVec& coeffs,
                 double bound) {
  const auto a = affine_rows(u0, coeffs);
  Mat G(3, a.re.size());
  G.row(0).setZero();
  G.row(1) = -a.re.transpose();
  G.row(2) = -a.im.transpose();
  Vec h(3);
  h << bound, a.re0, a.im0;
  b.add_cone_rows(ConeBlock{ConeType::SecondOrder, 3}, G, h);
}

}  // namespace

ConicProblem formulate_P1(const GridModel& model, const AuxBounds& aux, int m,
                          int n, int psi, int phi) {
  const int N = model.n_pq();
  if (m < 0 || m >= N || n < 0 || n >= N)
    throw InvalidInput("P1: bus index out of range");
  if ((psi != 1 && psi != -1) || (phi != 1 && phi != -1))
    throw InvalidInput("P1: psi/phi must be +/-1");

  ConicProblemBuilder b(2 * N);
  b.set_objective(Vec::Ones(2 * N));

  // Auxiliary set: branch-current and nodal-current caps.
  int e_idx = 0;
  for (const auto& row : model.branch_rows()) {
    add_abs_cap(b, row.a * model.slack_voltage(), row.c, aux.i_branch(e_idx));
    ++e_idx;
  }
  for (int j = 0; j < N; ++j) {
    const CVec yrow = model.Y_LL().row(j).transpose();
    const Complex u0 = -yrow.cwiseProduct(model.w()).sum();
    add_abs_cap(b, u0, yrow, aux.i_node(j));
  }

  // u = Row_n(Y_LL)(v - w); k = l1 norm of Row_m(Y_LL^{-1}).
  const CVec yn = model.Y_LL().row(n).transpose();
  const Complex un0 = -yn.cwiseProduct(model.w()).sum();
  const auto u = affine_rows(un0, yn);
  double k = 0.0;
  for (int c = 0; c < N; ++c) k += std::abs(model.Y_LL_inv()(m, c));

  // k (psi Re u + phi Im u) >= |v_m|
  {
    const Vec lin = k * (psi * u.re + phi * u.im);
    const double cst = k * (psi * u.re0 + phi * u.im0);
    Mat G = Mat::Zero(3, 2 * N);
    G.row(0) = -lin.transpose();
    G(1, m) = -1.0;
    G(2, N + m) = -1.0;
    Vec h(3);
    h << cst, 0.0, 0.0;
    b.add_cone_rows(ConeBlock{ConeType::SecondOrder, 3}, G, h);
  }
  // Sign constraints psi Re u >= 0, phi Im u >= 0.
  b.add_leq(-(psi * u.re), psi * u.re0);
  b.add_leq(-(phi * u.im), phi * u.im0);
  return b.finish();
}

P1Check check_P1_all(const GridModel& model, const AuxBounds& aux,
                     const SolveOptions& opts) {
  const int N = model.n_pq();
  P1Check res;
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      for (int psi : {1, -1})
        for (int phi : {1, -1}) {
          const auto out = solve(formulate_P1(model, aux, m, n, psi, phi),
                                 opts);
          if (out.status == SolveStatus::Infeasible) continue;
          res.all_infeasible = false;
          res.m = m;
          res.n = n;
          res.psi = psi;
          res.phi = phi;
          res.backend_unknown = out.status == SolveStatus::Unknown;
          res.reason = res.backend_unknown
                           ? "backend unknown: " + out.reason
                           : "instance feasible";
          return res;
        }
  res.all_infeasible = true;
  return res;
}

CalibrationResult calibrate_lambda(const GridModel& model,
                                   const SecuritySpec& security, double beta,
                                   const Vec& i_node_ref,
                                   const LambdaSchedule& schedule) {
  if (!(schedule.start > 0.0))
    throw InvalidInput("lambda schedule start must be positive");
  if (schedule.mode == LambdaSchedule::Mode::Ratio && !(schedule.value > 1.0))
    throw InvalidInput("lambda ratio must exceed 1");
  if (schedule.mode == LambdaSchedule::Mode::Step && !(schedule.value > 0.0))
    throw InvalidInput("lambda step must be positive");

  CalibrationResult res;
  double lambda = schedule.start;
  double last_good = -1.0;
  while (lambda <= schedule.cap + 1e-12) {
    const auto aux =
        AuxBounds::make(model, security, beta, i_node_ref, lambda);
    const auto check = check_P1_all(model, aux);
    ++res.steps;
    if (!check.all_infeasible) {
      if (last_good < 0.0) {
        res.failure = "first schedule value not certified: " + check.reason;
        return res;
      }
      break;
    }
    last_good = lambda;
    lambda = schedule.mode == LambdaSchedule::Mode::Ratio
                 ? lambda * schedule.value
                 : lambda + schedule.value;
  }
  if (last_good < 0.0) {
    res.failure = "schedule exhausted without a certified value";
    return res;
  }
  res.ok = true;
  res.lambda_star = last_good;
  res.aux = AuxBounds::make(model, security, beta, i_node_ref, last_good);
  return res;
}

ConstraintSet assemble_V(const GridModel& model, const SecuritySpec& security,
                         const AuxBounds& aux) {
  ConstraintSet out = aux_forms(model, aux);
  out.split = out.size();
  auto sec = security_forms(model, security);
  for (auto& c : sec.items) out.items.push_back(std::move(c));
  return out;
}

}  // namespace gridcert
