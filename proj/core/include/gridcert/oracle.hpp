#pragma once

#include "gridcert/constraints.hpp"
#include "gridcert/load_flow.hpp"
#include "gridcert/uncertainty.hpp"

namespace gridcert {

/// Complete load-flow solution set for N <= 2: closed form (N = 1) or dense
/// multi-start Newton with deflation (N = 2). Brute-force ground truth only;
/// independent of the conic machinery.
std::vector<CVec> enumerate_solutions_small(const GridModel& model,
                                            const CVec& s);

struct Violation {
  int path = -1;
  int step = -1;
  std::string kind;  // "security", "nonsingularity", "path_lost"
  double margin = 0.0;
};

/// Random piecewise-linear injection paths inside the uncertainty set,
/// traced by continuation from v_initial; reports every security or
/// non-singularity violation (margin < -1e-8) and lost paths.
std::vector<Violation> brute_force_admissibility(
    const GridModel& model, const SecuritySpec& security, const CVec& v_initial,
    const UncertaintySet& uncertainty, int n_paths, int n_steps, unsigned seed);

struct BoundaryHit {
  int ell = -1;
  CVec v;
  CVec s;
};

/// Direct falsification probe: root-search along random rays for points with
/// f_ell = 0 and the other constraints nonnegative, then test whether the
/// load-flow image lies in the uncertainty set. `focus_ell` < 0 probes all
/// constraints uniformly.
std::vector<BoundaryHit> boundary_probe(const GridModel& model,
                                        const ConstraintSet& constraint_set,
                                        const UncertaintySet& uncertainty,
                                        int n_samples, unsigned seed,
                                        int focus_ell = -1);

struct Collision {
  CVec s;
  CVec v_first;
  CVec v_second;
};

/// Uniqueness check on the auxiliary block (items [0, split), or all items
/// when split == 0): random injections with a solution inside the set must
/// not admit a second solution inside it.
std::vector<Collision> uniqueness_probe(const GridModel& model,
                                        const ConstraintSet& constraint_set,
                                        int trials, unsigned seed);

}  // namespace gridcert
