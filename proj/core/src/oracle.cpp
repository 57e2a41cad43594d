#include "gridcert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gridcert {

namespace {

bool near_any(const std::vector<CVec>& sols, const CVec& v, double tol) {
  for (const auto& u : sols)
    if ((u - v).norm() < tol) return true;
  return false;
}

std::vector<CVec> enumerate_n1(const GridModel& model, const CVec& s) {
  // v conj(y (v - w)) = s with t = |v|^2:
  //   conj(y) t - conj(y) v conj(w) = s  =>  v = (conj(y) t - s)/(conj(y) conj(w))
  // and |conj(y) t - s|^2 = |y|^2 |w|^2 t gives a real quadratic in t.
  const Complex a = std::conj(model.Y_LL()(0, 0));
  const Complex b = s(0);
  const Complex cw = std::conj(model.w()(0));
  const double A = std::norm(a);
  const double B = -(2.0 * (a * std::conj(b)).real() + std::norm(a) * std::norm(cw));
  const double C = std::norm(b);
  const double disc = B * B - 4.0 * A * C;
  std::vector<CVec> sols;
  if (disc < -1e-12 * std::max(1.0, B * B)) return sols;
  const double sq = std::sqrt(std::max(0.0, disc));
  for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
    if (t < -1e-12) continue;
    t = std::max(t, 0.0);
    CVec v(1);
    v(0) = (a * t - b) / (a * cw);
    if ((eval_F(model, v) - s).norm() < 1e-8 && !near_any(sols, v, 1e-9))
      sols.push_back(v);
  }
  return sols;
}

std::vector<CVec> enumerate_multistart(const GridModel& model, const CVec& s,
                                       int n_starts, unsigned seed) {
  const int n = model.n_pq();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  std::vector<CVec> sols;
  NewtonOptions opts;
  opts.max_iter = 80;
  for (int t = 0; t < n_starts; ++t) {
    CVec v0(n);
    for (int j = 0; j < n; ++j) v0(j) = Complex{uni(rng), uni(rng)};
    const auto res = solve_load_flow(model, s, v0, opts);
    if (res.converged && !near_any(sols, res.v, 1e-6)) sols.push_back(res.v);
  }
  return sols;
}

// One random point per region: singleton point or a random convex
// combination of polygon vertices.
CVec random_injection(const UncertaintySet& set,
                      const std::vector<std::vector<Complex>>& verts,
                      std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  CVec s(set.n_buses());
  for (int j = 0; j < set.n_buses(); ++j) {
    if (set.regions[j].is_singleton() || verts[j].empty()) {
      s(j) = set.regions[j].point();
      continue;
    }
    double tot = 0.0;
    Complex p{0.0, 0.0};
    std::vector<double> wts(verts[j].size());
    for (auto& wt : wts) {
      wt = -std::log(std::max(uni(rng), 1e-300));
      tot += wt;
    }
    for (size_t k = 0; k < verts[j].size(); ++k)
      p += (wts[k] / tot) * verts[j][k];
    s(j) = p;
  }
  return s;
}

}  // namespace

std::vector<CVec> enumerate_solutions_small(const GridModel& model,
                                            const CVec& s) {
  if (model.n_pq() == 1) return enumerate_n1(model, s);
  if (model.n_pq() == 2) return enumerate_multistart(model, s, 4096, 12345u);
  throw InvalidInput("enumerate_solutions_small: only N <= 2 supported");
}

std::vector<Violation> brute_force_admissibility(
    const GridModel& model, const SecuritySpec& security, const CVec& v_initial,
    const UncertaintySet& uncertainty, int n_paths, int n_steps,
    unsigned seed) {
  const auto sec = security_forms(model, security);
  const CVec s0 = eval_F(model, v_initial);
  std::vector<std::vector<Complex>> verts(uncertainty.n_buses());
  for (int j = 0; j < uncertainty.n_buses(); ++j)
    verts[j] = polygon_vertices(uncertainty.regions[j]);

  std::vector<Violation> out;
  constexpr double kMarginTol = -1e-8;
  for (int p = 0; p < n_paths; ++p) {
    std::mt19937 rng(seed + 1000003u * static_cast<unsigned>(p));
    const int n_way = 3;
    std::vector<CVec> waypoints{s0};
    for (int k = 0; k < n_way; ++k)
      waypoints.push_back(random_injection(uncertainty, verts, rng));
    const int per_seg = std::max(1, n_steps / n_way);
    const auto trace =
        continuation_trace(model, waypoints, v_initial, per_seg);
    for (size_t i = 0; i < trace.states.size(); ++i) {
      const auto ev = eval_constraints(sec, trace.states[i]);
      if (ev.min_margin < kMarginTol)
        out.push_back(Violation{p, static_cast<int>(i), "security",
                                ev.min_margin});
      const auto ns = is_nonsingular(model, trace.states[i]);
      if (!ns.nonsingular)
        out.push_back(Violation{p, static_cast<int>(i), "nonsingularity",
                                ns.min_singular_value});
    }
    if (trace.path_lost)
      out.push_back(Violation{p, static_cast<int>(trace.states.size()),
                              "path_lost", trace.last_good_t});
  }
  return out;
}

std::vector<BoundaryHit> boundary_probe(const GridModel& model,
                                        const ConstraintSet& constraint_set,
                                        const UncertaintySet& uncertainty,
                                        int n_samples, unsigned seed,
                                        int focus_ell) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, constraint_set.size() - 1);
  const Vec x_c = voltage_to_x(model.w());
  std::vector<BoundaryHit> hits;

  for (int t = 0; t < n_samples; ++t) {
    const int ell = focus_ell >= 0 ? focus_ell : pick(rng);
    const auto& f = constraint_set.items[ell].form;
    Vec d(x_c.size());
    for (int i = 0; i < d.size(); ++i) d(i) = gauss(rng);
    d.normalize();

    // bracket a sign change of f along the ray, then bisect
    const double f0 = f.eval(x_c);
    double t_lo = 0.0, t_hi = -1.0;
    double f_lo = f0;
    for (double tt = 0.05; tt <= 5.0; tt += 0.05) {
      const double ft = f.eval(x_c + tt * d);
      if ((f_lo > 0.0) != (ft > 0.0)) {
        t_hi = tt;
        break;
      }
      t_lo = tt;
      f_lo = ft;
    }
    if (t_hi < 0.0) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      if ((f.eval(x_c + mid * d) > 0.0) == (f_lo > 0.0))
        t_lo = mid;
      else
        t_hi = mid;
    }
    const Vec x_star = x_c + 0.5 * (t_lo + t_hi) * d;
    bool others_ok = true;
    for (int l = 0; l < constraint_set.size(); ++l)
      if (l != ell && constraint_set.items[l].form.eval(x_star) < -1e-8) {
        others_ok = false;
        break;
      }
    if (!others_ok) continue;
    const CVec v = x_to_voltage(x_star);
    const CVec s = eval_F(model, v);
    if (contains(uncertainty, s, 1e-7))
      hits.push_back(BoundaryHit{ell, v, s});
  }
  return hits;
}

std::vector<Collision> uniqueness_probe(const GridModel& model,
                                        const ConstraintSet& constraint_set,
                                        int trials, unsigned seed) {
  const int n_tilde =
      constraint_set.split > 0 ? constraint_set.split : constraint_set.size();
  const auto in_tilde = [&](const CVec& v) {
    const Vec x = voltage_to_x(v);
    for (int l = 0; l < n_tilde; ++l)
      if (constraint_set.items[l].form.eval(x) <= 0.0) return false;
    return true;
  };

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.2);
  std::vector<Collision> out;
  for (int t = 0; t < trials; ++t) {
    // random voltage inside the auxiliary set (rejection around w)
    CVec v(model.n_pq());
    bool found = false;
    for (int tries = 0; tries < 200 && !found; ++tries) {
      for (int j = 0; j < model.n_pq(); ++j)
        v(j) = model.w()(j) + Complex{gauss(rng), gauss(rng)};
      found = in_tilde(v);
    }
    if (!found) continue;
    const CVec s = eval_F(model, v);
    const auto sols = model.n_pq() <= 2
                          ? enumerate_solutions_small(model, s)
                          : enumerate_multistart(model, s, 2048,
                                                 seed + 7u * t);
    std::vector<CVec> inside;
    for (const auto& u : sols)
      if (in_tilde(u)) inside.push_back(u);
    for (size_t a = 0; a < inside.size(); ++a)
      for (size_t b = a + 1; b < inside.size(); ++b)
        out.push_back(Collision{s, inside[a], inside[b]});
  }
  return out;
}

}  // namespace gridcert
