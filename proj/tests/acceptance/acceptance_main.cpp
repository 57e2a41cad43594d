// Release gate: one pass/fail line per criterion, exit code = number of
// failed gating criteria. Criterion 9 reports soft wall-time targets and
// never gates.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "gridcert/json_io.hpp"
#include "gridcert/oracle.hpp"
#include "gridcert/pipeline.hpp"
#include "../test_support.hpp"

using namespace gridcert;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

UncertaintySet small_boxes(int n, double re_lo, double im_half) {
  UncertaintySet set;
  for (int j = 0; j < n; ++j)
    set.regions.push_back(PowerRegion::polygon(
        {HalfPlane{-1, 0, re_lo}, HalfPlane{1, 0, 0},
         HalfPlane{0, -1, im_half}, HalfPlane{0, 1, im_half}}));
  return set;
}

UncertaintySet singleton_zero(int n) {
  UncertaintySet set;
  for (int j = 0; j < n; ++j)
    set.regions.push_back(PowerRegion::singleton(Complex{0.0, 0.0}));
  return set;
}

// ---------------------------------------------------------------------------
// 1. Soundness: Admissible verdicts survive exhaustive path tracing.
bool criterion1() {
  std::mt19937 rng(20240801u);
  std::vector<std::pair<int, bool>> grids;  // (n_pq, meshed)
  for (int i = 0; i < 10; ++i) grids.push_back({2, false});
  for (int i = 0; i < 6; ++i) grids.push_back({3, i % 2 == 1});
  grids.push_back({4, false});
  grids.push_back({4, true});
  grids.push_back({5, false});
  grids.push_back({5, true});

  int admissible = 0, unknown = 0, violations = 0;
  for (size_t g = 0; g < grids.size(); ++g) {
    const auto model = testing::random_grid(grids[g].first, rng,
                                            grids[g].second);
    const auto spec = SecuritySpec::uniform(model, 0.9, 1.1, 5.0);
    const auto unc = small_boxes(model.n_pq(), 0.02, 0.005);
    Verdict verdict;
    try {
      verdict = test_admissibility(model, spec, model.w(), unc);
    } catch (const PreconditionViolated&) {
      ++unknown;
      continue;
    }
    if (!verdict.admissible) {
      ++unknown;
      continue;
    }
    ++admissible;
    const auto bad = brute_force_admissibility(
        model, spec, model.w(), unc, 200, 100,
        static_cast<unsigned>(1000 + g));
    if (!bad.empty()) {
      violations += static_cast<int>(bad.size());
      std::printf("    grid %zu (N=%d): %zu oracle violations, first kind "
                  "'%s'\n",
                  g, grids[g].first, bad.size(), bad.front().kind.c_str());
    }
  }
  std::printf("    %d admissible / %d unknown of %zu grids, %d oracle "
              "violations\n",
              admissible, unknown, grids.size(), violations);
  return violations == 0 && admissible >= 10;
}

// ---------------------------------------------------------------------------
// 2. No false infeasibility: boundary programs with a constructed feasible
//    point must lift feasibly and come back NotProven.
bool criterion2() {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int ok = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const bool big = t % 10 >= 7;  // 15 three-bus chains, rest two-bus
    const Complex y{1.0 + 0.5 * std::abs(uni(rng)), -0.5 * std::abs(uni(rng))};
    const auto model = big ? testing::chain(2, 4.0 * y) : testing::two_bus(y);
    const int n = model.n_pq();
    const auto spec = SecuritySpec::uniform(model, 0.7, 1.3, 10.0);
    const auto aux =
        AuxBounds::make(model, spec, 1.0, Vec::Ones(n), 5.0);
    const auto vs = assemble_V(model, spec, aux);

    // random point, then snap bus 1 onto the VLow or VUp circle
    const bool low = t % 2 == 0;
    CVec v(n);
    bool placed = false;
    for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
      for (int j = 0; j < n; ++j)
        v(j) = model.w()(j) + 0.05 * Complex{uni(rng), uni(rng)};
      const double target = low ? spec.v_min(0) : spec.v_max(0);
      v(0) *= target / std::abs(v(0));
      const auto ev = eval_constraints(vs, v);
      double min_other = 1e30;
      int ell = -1;
      for (int i = 0; i < vs.size(); ++i) {
        const auto& c = vs.items[i];
        if (c.owner_bus == 1 &&
            c.kind == (low ? ConstraintKind::VLow : ConstraintKind::VUp)) {
          ell = i;
          continue;
        }
        min_other = std::min(min_other, ev.margins(i));
      }
      if (ell < 0 || min_other < 1e-9 || std::abs(ev.margins(ell)) > 1e-9)
        continue;
      placed = true;

      UncertaintySet set;
      for (int j = 0; j < n; ++j)
        set.regions.push_back(PowerRegion::singleton(eval_F(model, v)(j)));
      const auto prog = formulate_P0(model, vs, ell, set);
      const auto sdp = build_moment_sdp(prog, correlative_sparsity(prog), 2);
      const double viol =
          primal_violation(sdp.problem, lift_point(sdp, voltage_to_x(v)));
      const auto results = check_P0_infeasible(model, vs, set, 2);
      if (viol < 1e-8 && results[ell].status == P0Status::NotProven) ++ok;
      else
        std::printf("    trial %d: lift violation %.2e, status %s\n", t, viol,
                    results[ell].status == P0Status::Infeasible ? "Infeasible"
                                                                : "NotProven");
    }
    if (!placed) std::printf("    trial %d: no boundary point placed\n", t);
  }
  std::printf("    %d/%d programs lifted feasibly and stayed NotProven\n", ok,
              trials);
  return ok == trials;
}

// Shared with criterion 8: certificate bookkeeping across suites.
struct CertStats {
  int infeasible = 0;
  int verified = 0;
};
CertStats g_certs;

// ---------------------------------------------------------------------------
// 3. Hierarchy monotonicity: infeasible at omega=1 stays infeasible at
//    omega=2.
bool criterion3() {
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss;
  int ok = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    // ball around c separated from a half-space: jointly empty
    const int M = 1 + t % 3;
    Vec c(M), a(M);
    for (int i = 0; i < M; ++i) {
      c(i) = 0.5 * gauss(rng);
      a(i) = gauss(rng);
    }
    if (a.norm() < 0.1) a(0) += 1.0;
    const double r = 0.3 + 0.5 * std::abs(gauss(rng));

    PolynomialProgram prog{SparsePolynomial(M)};
    prog.objective = SparsePolynomial::variable(M, 0);
    SparsePolynomial ball = SparsePolynomial::constant(M, r * r);
    SparsePolynomial plane =
        SparsePolynomial::constant(M, -(a.dot(c) + r * a.norm() + 0.05));
    for (int i = 0; i < M; ++i) {
      const auto xi = SparsePolynomial::variable(M, i);
      const auto di = xi - SparsePolynomial::constant(M, c(i));
      ball = ball - di * di;
      plane = plane + xi * a(i);
    }
    prog.inequalities.push_back(ball);
    prog.inequalities.push_back(plane);

    const auto dec = correlative_sparsity(prog);
    bool pass = true;
    for (int omega : {1, 2}) {
      const auto sdp = build_moment_sdp(prog, dec, omega);
      const auto out = solve(sdp.problem);
      const bool good =
          out.status == SolveStatus::Infeasible &&
          verify_infeasibility_certificate(sdp.problem, out.certificate);
      if (out.status == SolveStatus::Infeasible) {
        ++g_certs.infeasible;
        if (good) ++g_certs.verified;
      }
      if (!good) {
        pass = false;
        std::printf("    trial %d omega=%d: %s\n", t, omega,
                    out.status == SolveStatus::Infeasible
                        ? "certificate rejected"
                        : "not infeasible");
      }
    }
    if (pass) ++ok;
  }
  std::printf("    %d/%d instances infeasible at both orders\n", ok, trials);
  return ok == trials;
}

// ---------------------------------------------------------------------------
// 4. Uniqueness inside the calibrated auxiliary set.
bool criterion4() {
  int collisions = 0;
  int trials_run = 0;
  for (int which = 0; which < 2; ++which) {
    const auto model =
        which == 0 ? testing::two_bus() : testing::chain(2);
    const auto spec = SecuritySpec::uniform(model, 0.9, 1.1, 2.0);
    const auto calib =
        calibrate_lambda(model, spec, 1.0, Vec::Ones(model.n_pq()));
    if (!calib.ok) {
      std::printf("    calibration failed on grid %d\n", which);
      return false;
    }
    const auto vs = assemble_V(model, spec, calib.aux);
    const auto found = uniqueness_probe(model, vs, 250, 500 + which);
    collisions += static_cast<int>(found.size());
    trials_run += 250;
  }
  std::printf("    %d collisions in %d trials\n", collisions, trials_run);
  return collisions == 0 && trials_run == 500;
}

// ---------------------------------------------------------------------------
// 5. Fine-step calibration threshold on the 2-bus grid.
bool criterion5() {
  const auto model = testing::two_bus();
  const auto spec = SecuritySpec::uniform(model, 0.5, 2.0, 10.0);
  LambdaSchedule sched;
  sched.start = 0.01;
  sched.mode = LambdaSchedule::Mode::Step;
  sched.value = 0.01;
  const auto res = calibrate_lambda(model, spec, 1.0, Vec::Ones(1), sched);
  if (!res.ok) {
    std::printf("    calibration failed: %s\n", res.failure.c_str());
    return false;
  }
  // independent oracle for the true threshold: 2-D search over the current
  // disk for a point with k(psi Re u + phi Im u) >= |1 + u|, u = -current
  double oracle = 0.0;
  for (double lam = 0.30; lam <= 0.60; lam += 1e-4) {
    bool feasible = false;
    for (int ia = 0; ia <= 400 && !feasible; ++ia) {
      const double ang = 2.0 * 3.14159265358979 * ia / 400.0;
      for (double rad = lam; rad >= 0.0; rad -= lam / 50.0) {
        const Complex i{rad * std::cos(ang), rad * std::sin(ang)};
        const Complex v = Complex{1.0, 0.0} - i;  // u = -i, |v| = |1 + u|
        if (std::abs(i.real()) + std::abs(i.imag()) >= std::abs(v) - 1e-12) {
          feasible = true;
          break;
        }
      }
    }
    if (feasible) {
      oracle = lam;
      break;
    }
  }
  std::printf("    lambda* = %.4f (expected band 0.41 +/- 0.01; independent "
              "oracle threshold %.4f)\n",
              res.lambda_star, oracle);
  return res.lambda_star >= 0.40 && res.lambda_star <= 0.42;
}

// ---------------------------------------------------------------------------
// 6. Maximum-kappa ground truth on the 2-bus grid.
bool criterion6() {
  const auto model = testing::two_bus();
  const auto spec = SecuritySpec::uniform(model, 0.9, 1.1, 2.0);
  KappaTemplate tmpl;
  tmpl.per_bus.push_back({TemplateHalfPlane{-1, 0, 0, 1},
                          TemplateHalfPlane{1, 0, 0, 0},
                          TemplateHalfPlane{0, 1, 0, 0},
                          TemplateHalfPlane{0, -1, 0, 0}});
  KappaSearchOptions search;
  search.resolution = 0.01;
  search.kappa_max = 0.5;
  const auto res = max_kappa(model, spec, model.w(), tmpl, {}, search);
  if (!res.ok) {
    std::printf("    search failed: %s\n", res.failure.c_str());
    return false;
  }
  const double analytic = 0.09;  // vmin (1 - vmin) with vmin = 0.9
  std::printf("    kappa* = %.4f (analytic optimum %.2f), bracket gap %.4f\n",
              res.kappa_star, analytic,
              res.first_unknown > 0.0 ? res.first_unknown - res.kappa_star
                                      : 0.0);
  const bool in_band = res.kappa_star >= 0.07 && res.kappa_star <= 0.09;
  const bool gap_ok = analytic - res.kappa_star <= 0.02 + 1e-12;
  return in_band && gap_ok;
}

// ---------------------------------------------------------------------------
// 7. Located singular points satisfy the necessary condition.
bool criterion7() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int located = 0, satisfied = 0;
  for (int t = 0; t < 10; ++t) {
    const Complex y{0.5 + 2.5 * uni(rng), -(0.2 + 2.5 * uni(rng))};
    const auto model = testing::two_bus(y);
    const double ang = 3.14159265358979 * (0.8 + 0.4 * uni(rng));  // lossy
    CVec dir(1);
    dir(0) = Complex{std::cos(ang), std::sin(ang)};

    // bracket the loadability limit along t * dir, keeping the last solution
    double lo = 0.0, hi = 5.0;
    CVec v_last = model.w();
    bool bracketed = false;
    for (double tt = 0.05; tt <= hi; tt += 0.05) {
      const auto res = solve_load_flow(model, tt * dir, v_last);
      if (!res.converged) {
        lo = tt - 0.05;
        hi = tt;
        bracketed = true;
        break;
      }
      v_last = res.v;
    }
    if (!bracketed) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto res = solve_load_flow(model, mid * dir, v_last);
      if (res.converged) {
        lo = mid;
        v_last = res.v;
      } else {
        hi = mid;
      }
    }
    const auto sing = is_nonsingular(model, v_last);
    if (sing.min_singular_value < 1e-6) {
      ++located;
      // the located point is within O(sigma) of the true singular point, so
      // the condition (equality-tight at the nose) is evaluated with a slack
      // matching the location accuracy rather than the 1e-9 default
      if (singularity_necessary_condition(model, v_last, 1e-5)) ++satisfied;
      else
        std::printf("    grid %d: singular point misses the condition\n", t);
    }
  }
  std::printf("    %d singular points located, %d satisfy the condition\n",
              located, satisfied);
  return located >= 5 && satisfied == located;
}

// ---------------------------------------------------------------------------
// 8. Every Infeasible outcome has a verified certificate; corruption is
//    rejected.
bool criterion8() {
  // direct re-verification on the 2-bus singleton boundary programs
  const auto model = testing::two_bus();
  const auto spec = SecuritySpec::uniform(model, 0.9, 1.1, 2.0);
  const auto calib = calibrate_lambda(model, spec, 1.0, Vec::Ones(1));
  if (!calib.ok) return false;
  const auto vs = assemble_V(model, spec, calib.aux);
  const auto unc = singleton_zero(1);

  bool corrupted_rejected = false;
  for (int ell = 0; ell < vs.size(); ++ell) {
    const auto prog = formulate_P0(model, vs, ell, unc);
    const auto sdp = build_moment_sdp(prog, correlative_sparsity(prog), 2);
    const auto out = solve(sdp.problem);
    if (out.status != SolveStatus::Infeasible) {
      std::printf("    ell=%d not infeasible\n", ell);
      return false;
    }
    ++g_certs.infeasible;
    if (!verify_infeasibility_certificate(sdp.problem, out.certificate)) {
      std::printf("    ell=%d certificate rejected\n", ell);
      return false;
    }
    ++g_certs.verified;
    if (ell == 0) {
      auto bad = out.certificate;
      bad.z = -bad.z;
      corrupted_rejected =
          !verify_infeasibility_certificate(sdp.problem, bad);
      bad = out.certificate;
      if (bad.z.size() > 0) bad.z(0) += 10.0 * (1.0 + bad.z.cwiseAbs().maxCoeff());
      corrupted_rejected = corrupted_rejected &&
          !verify_infeasibility_certificate(sdp.problem, bad);
    }
  }
  std::printf("    %d/%d infeasible outcomes verified across suites; "
              "corrupted certificate %s\n",
              g_certs.verified, g_certs.infeasible,
              corrupted_rejected ? "rejected" : "ACCEPTED");
  return g_certs.verified == g_certs.infeasible && g_certs.infeasible > 0 &&
         corrupted_rejected;
}

// ---------------------------------------------------------------------------
// 9. Soft wall-time targets on a 12-PQ-bus radial grid (not gating).
bool criterion9() {
  const auto model = testing::chain(12);
  const auto spec = SecuritySpec::uniform(model, 0.9, 1.1, 5.0);
  const auto aux = AuxBounds::make(model, spec, 1.0, Vec::Ones(12), 0.3);

  auto t0 = Clock::now();
  const auto p1 = solve(formulate_P1(model, aux, 0, 0, 1, 1));
  const double p1_s = seconds_since(t0);

  const auto vs = assemble_V(model, spec, aux);
  int ell = 0;
  for (int i = 0; i < vs.size(); ++i)
    if (vs.items[i].kind == ConstraintKind::VLow) ell = i;
  const auto prog = formulate_P0(model, vs, ell, singleton_zero(12));
  const auto dec = correlative_sparsity(prog);
  t0 = Clock::now();
  const auto sdp = build_moment_sdp(prog, dec, 2);
  const auto p0 = solve(sdp.problem);
  const double p0_s = seconds_since(t0);

  std::printf("    P1 solve %.2f s (target 10 s, status %d); relaxed P0 at "
              "omega=2 %.2f s (target 90 s, status %d)\n",
              p1_s, static_cast<int>(p1.status), p0_s,
              static_cast<int>(p0.status));
  return p1_s <= 10.0 && p0_s <= 90.0;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    bool (*fn)();
    bool gating;
  };
  const Entry entries[] = {
      {"1 soundness: admissible verdicts survive 200x100 path tracing",
       criterion1, true},
      {"2 no false infeasibility on 50 feasible boundary programs",
       criterion2, true},
      {"3 hierarchy monotonicity omega=1 -> omega=2 on 20 instances",
       criterion3, true},
      {"4 uniqueness probe: 0 collisions in 500 trials", criterion4, true},
      {"5 fine-step calibration threshold 0.41 +/- 0.01", criterion5, true},
      {"6 max-kappa in [0.07, 0.09] with gap <= 0.02", criterion6, true},
      {"7 continuation singular points satisfy the necessary condition",
       criterion7, true},
      {"8 all infeasibility certificates verified; corruption rejected",
       criterion8, true},
      {"9 (soft) 12-bus wall-times: P1 <= 10 s, P0 omega=2 <= 90 s",
       criterion9, false},
  };

  int failures = 0;
  for (const auto& e : entries) {
    const auto t0 = Clock::now();
    bool pass = false;
    try {
      pass = e.fn();
    } catch (const std::exception& ex) {
      std::printf("    exception: %s\n", ex.what());
    }
    std::printf("[%s] criterion %s (%.1f s)\n", pass ? "PASS" : "FAIL",
                e.name, seconds_since(t0));
    std::fflush(stdout);
    if (!pass && e.gating) ++failures;
  }
  if (failures > 0)
    std::printf("%d gating criterion(s) failed\n", failures);
  return failures;
}
