#pragma once

#include <map>

#include "gridcert/cliques.hpp"
#include "gridcert/conic.hpp"
#include "gridcert/uncertainty.hpp"

namespace gridcert {

struct OrderTooLow : Error {
  using Error::Error;
};
struct UnsupportedUncertainty : Error {
  using Error::Error;
};

/// min objective s.t. inequalities >= 0, equalities = 0, all polynomials over
/// the same variable vector x = (Re v; Im v).
struct PolynomialProgram {
  SparsePolynomial objective;
  std::vector<SparsePolynomial> inequalities;
  std::vector<SparsePolynomial> equalities;

  int n_vars() const { return objective.n_vars(); }
};

/// Boundary program: constraint `ell` (index into constraint_set.items) held
/// at zero, all others nonnegative, and the load-flow image confined to the
/// uncertainty set (polygon half-planes become quadratic inequalities,
/// singletons two quadratic equalities per bus).
PolynomialProgram formulate_P0(const GridModel& model,
                               const ConstraintSet& constraint_set, int ell,
                               const UncertaintySet& uncertainty);

/// Re/Im parts of the load-flow polynomial F_j as quadratic forms in x.
QuadraticForm load_flow_re(const GridModel& model, int bus_index);
QuadraticForm load_flow_im(const GridModel& model, int bus_index);

/// Correlative sparsity decomposition of a program (objective + all
/// constraint supports; equalities listed after inequalities).
CliqueDecomposition correlative_sparsity(const PolynomialProgram& program);

/// Moment-SDP lift at relaxation order omega with an explicit monomial index.
struct MomentSDP {
  ConicProblem problem;
  std::vector<Monomial> index;  // conic variable i <-> monomial index[i]
  int omega = 0;
};

/// Throws OrderTooLow when omega < max_k ceil(deg f_k / 2). Moment block per
/// clique, localizing block per constraint (equalities as +/- pairs), y_0 = 1.
MomentSDP build_moment_sdp(const PolynomialProgram& program,
                           const CliqueDecomposition& cliques, int omega);

/// y_alpha = x^alpha for every indexed monomial; feasible for the SDP whenever
/// x is feasible for the program.
Vec lift_point(const MomentSDP& sdp, const Vec& x);

enum class P0Status { Infeasible, NotProven };

struct P0Result {
  P0Status status = P0Status::NotProven;
  std::string reason;
  double certificate_norm = 0.0;
  int iterations = 0;
};

/// Runs the relaxed boundary exclusion for every ell; Infeasible entries
/// carry a backend-verified certificate.
std::vector<P0Result> check_P0_infeasible(const GridModel& model,
                                          const ConstraintSet& constraint_set,
                                          const UncertaintySet& uncertainty,
                                          int omega);

}  // namespace gridcert
