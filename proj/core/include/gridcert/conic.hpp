#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gridcert/types.hpp"

namespace gridcert {

enum class ConeType { NonNegative, SecondOrder, PsdMatrix };

/// One cone block of the product cone K. `size` is the vector length for
/// NonNegative/SecondOrder; for PsdMatrix it is the matrix side and the
/// vectorized (svec) length is side*(side+1)/2.
struct ConeBlock {
  ConeType type;
  int size = 0;

  int vec_len() const {
    return type == ConeType::PsdMatrix ? size * (size + 1) / 2 : size;
  }
  int degree() const {
    switch (type) {
      case ConeType::NonNegative: return size;
      case ConeType::SecondOrder: return 1;
      case ConeType::PsdMatrix: return size;
    }
    return 0;
  }
};

/// Conic feasibility/optimization problem in the form
///   min c'x  s.t.  A x = b,  G x + s = h,  s in K,
/// with x free and K a product of NonNegative, SecondOrder and PsdMatrix
/// blocks (PSD blocks in scaled svec coordinates, self-dual).
struct ConicProblem {
  int num_vars = 0;
  Vec c;
  Mat A;
  Vec b;
  Mat G;
  Vec h;
  std::vector<ConeBlock> cones;

  int cone_dim() const;
  int cone_degree() const;
  void validate() const;
};

/// Helper for assembling problems row by row.
class ConicProblemBuilder {
public:
  explicit ConicProblemBuilder(int num_vars);

  void set_objective(const Vec& c);
  void add_equality(const Vec& row, double rhs);
  /// Adds a cone block covering rows G x + s = h appended here; `G_rows` is
  /// (vec_len x num_vars), `h_rows` has vec_len entries.
  void add_cone_rows(ConeBlock block, const Mat& G_rows, const Vec& h_rows);
  /// Scalar convenience: row'x <= rhs as a NonNegative slack.
  void add_leq(const Vec& row, double rhs);

  ConicProblem finish();

private:
  int n_;
  Vec c_;
  std::vector<Vec> eq_rows_;
  std::vector<double> eq_rhs_;
  std::vector<Vec> g_rows_;
  std::vector<double> h_vals_;
  std::vector<ConeBlock> cones_;
};

/// Farkas-type primal infeasibility certificate: multipliers (y, z) with
/// z in K*, A'y + G'z ~ 0 and b'y + h'z < 0.
struct InfeasibilityCertificate {
  Vec y;
  Vec z;
};

enum class SolveStatus { Feasible, Infeasible, Unknown };

struct SolveOutcome {
  SolveStatus status = SolveStatus::Unknown;
  Vec x;
  double objective = 0.0;
  InfeasibilityCertificate certificate;
  std::string reason;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

struct SolveOptions {
  double feas_tol = 1e-8;
  double cert_tol = 1e-7;
  int max_iter = 100;
};

/// Homogeneous self-dual interior-point solve. Infeasible is only returned
/// with a certificate that passes verify_infeasibility_certificate; numerical
/// breakdown maps to Unknown.
SolveOutcome solve(const ConicProblem& problem, const SolveOptions& opts = {});

/// Re-checks the Farkas identity by direct arithmetic (no solver involved).
bool verify_infeasibility_certificate(const ConicProblem& problem,
                                      const InfeasibilityCertificate& cert,
                                      double cert_tol = 1e-7);

/// Max equality violation and cone distance of a candidate primal point.
double primal_violation(const ConicProblem& problem, const Vec& x);

/// Sparse text dump, one line per nonzero: section, row, col, value.
void dump_problem(const ConicProblem& problem, std::ostream& os);

// Scaled symmetric vectorization: off-diagonals carry sqrt(2) so that
// svec(S).dot(svec(Z)) == <S, Z>.
int svec_len(int side);
Vec svec(const Mat& S);
Mat smat(const Vec& v, int side);

}  // namespace gridcert
