#include "gridcert/load_flow.hpp"

#include <Eigen/SVD>

namespace gridcert {

CVec eval_F(const GridModel& model, const CVec& v) {
  const CVec i = model.Y_LL() * (v - model.w());
  return v.cwiseProduct(i.conjugate());
}

Mat jacobian(const GridModel& model, const CVec& v) {
  const int n = model.n_pq();
  const CVec i = model.Y_LL() * (v - model.w());
  const Mat G = model.Y_LL().real();
  const Mat B = model.Y_LL().imag();
  const Vec vr = v.real();
  const Vec vi = v.imag();
  const Vec ir = i.real();
  const Vec ii = i.imag();

  Mat J(2 * n, 2 * n);
  // Re s = vr.*ir + vi.*ii, Im s = vi.*ir - vr.*ii,
  // with d(ir)/d(vr)=G, d(ir)/d(vi)=-B, d(ii)/d(vr)=B, d(ii)/d(vi)=G.
  J.topLeftCorner(n, n) =
      Mat(ir.asDiagonal()) + vr.asDiagonal() * G + vi.asDiagonal() * B;
  J.topRightCorner(n, n) =
      Mat(ii.asDiagonal()) - vr.asDiagonal() * B + vi.asDiagonal() * G;
  J.bottomLeftCorner(n, n) =
      Mat((-ii).asDiagonal()) + vi.asDiagonal() * G - vr.asDiagonal() * B;
  J.bottomRightCorner(n, n) =
      Mat(ir.asDiagonal()) - vi.asDiagonal() * B - vr.asDiagonal() * G;
  return J;
}

namespace {

Vec real_stack(const CVec& z) {
  Vec x(2 * z.size());
  x.head(z.size()) = z.real();
  x.tail(z.size()) = z.imag();
  return x;
}

CVec complex_unstack(const Vec& x) {
  const Eigen::Index n = x.size() / 2;
  CVec z(n);
  z.real() = x.head(n);
  z.imag() = x.tail(n);
  return z;
}

}  // namespace

LoadFlowResult solve_load_flow(const GridModel& model, const CVec& s,
                               const CVec& v_start,
                               const NewtonOptions& opts) {
  LoadFlowResult out;
  CVec v = v_start;
  double res = (eval_F(model, v) - s).cwiseAbs().maxCoeff();
  for (int it = 0; it < opts.max_iter; ++it) {
    if (res <= opts.residual_tol) {
      out.converged = true;
      out.v = v;
      out.iterations = it;
      out.residual = res;
      return out;
    }
    const Mat J = jacobian(model, v);
    Eigen::PartialPivLU<Mat> lu(J);
    const Vec rhs = real_stack(s - eval_F(model, v));
    const Vec dx = lu.solve(rhs);
    if (!dx.allFinite()) break;

    double alpha = 1.0;
    CVec v_next = v + complex_unstack(dx);
    double res_next = (eval_F(model, v_next) - s).cwiseAbs().maxCoeff();
    if (opts.damping) {
      int halvings = 0;
      while (res_next > res && halvings < 30) {
        alpha *= 0.5;
        v_next = v + alpha * complex_unstack(dx);
        res_next = (eval_F(model, v_next) - s).cwiseAbs().maxCoeff();
        ++halvings;
      }
      if (res_next > res) break;  // no descent, singular step
    }
    v = v_next;
    res = res_next;
  }
  if (res <= opts.residual_tol) {
    out.converged = true;
    out.v = v;
    out.iterations = opts.max_iter;
    out.residual = res;
    return out;
  }
  out.converged = false;
  out.v = v;
  out.iterations = opts.max_iter;
  out.residual = res;
  return out;
}

LoadFlowResult high_voltage_solution(const GridModel& model, const CVec& s,
                                     const NewtonOptions& opts) {
  return solve_load_flow(model, s, model.w(), opts);
}

NonSingularity is_nonsingular(const GridModel& model, const CVec& v,
                              double sigma_tol) {
  const Mat J = jacobian(model, v);
  Eigen::JacobiSVD<Mat> svd(J);
  NonSingularity out;
  out.min_singular_value = svd.singularValues()(svd.singularValues().size() - 1);
  out.nonsingular = out.min_singular_value > sigma_tol;
  return out;
}

bool singularity_necessary_condition(const GridModel& model, const CVec& v,
                                     double slack) {
  const CVec i = model.Y_LL() * (v - model.w());
  const int n = model.n_pq();
  for (int m = 0; m < n; ++m) {
    double lhs = 0.0;
    for (int k = 0; k < n; ++k) lhs += std::abs(model.Y_LL_inv()(m, k) * i(k));
    if (lhs >= std::abs(v(m)) - slack) return true;
  }
  return false;
}

ContinuationResult continuation_trace(const GridModel& model,
                                      const std::vector<CVec>& waypoints,
                                      const CVec& v0, int steps_per_segment,
                                      const NewtonOptions& opts,
                                      double continuity_bound) {
  ContinuationResult out;
  if (waypoints.empty()) return out;

  LoadFlowResult lf = solve_load_flow(model, waypoints.front(), v0, opts);
  if (!lf.converged) {
    out.path_lost = true;
    return out;
  }
  CVec v = lf.v;
  out.t.push_back(0.0);
  out.states.push_back(v);
  out.last_good_t = 0.0;

  const int segments = static_cast<int>(waypoints.size()) - 1;
  for (int seg = 0; seg < segments; ++seg) {
    for (int k = 1; k <= steps_per_segment; ++k) {
      const double frac = static_cast<double>(k) / steps_per_segment;
      const double t =
          (seg + frac) / static_cast<double>(segments);
      const CVec s = (1.0 - frac) * waypoints[seg] + frac * waypoints[seg + 1];
      lf = solve_load_flow(model, s, v, opts);
      if (!lf.converged ||
          (lf.v - v).cwiseAbs().maxCoeff() > continuity_bound) {
        out.path_lost = true;
        return out;
      }
      v = lf.v;
      out.t.push_back(t);
      out.states.push_back(v);
      out.last_good_t = t;
    }
  }
  return out;
}

}  // namespace gridcert
