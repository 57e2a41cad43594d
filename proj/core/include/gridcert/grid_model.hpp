#pragma once

#include <optional>
#include <vector>

#include "gridcert/types.hpp"

namespace gridcert {

/// One passive transmission device between two buses: a pi-modeled line
/// (series admittance + total shunt susceptance, half per end), optionally
/// with an ideal transformer ratio folded in on the `from` side.
struct BranchSpec {
  int from = 0;
  int to = 0;
  Complex y_series{0.0, 0.0};
  double b_shunt_total = 0.0;
  std::optional<double> tap;
};

/// Coefficients of the branch-current functional i_jk = a * v0 + c^T v.
struct BranchRow {
  int from = 0;
  int to = 0;
  Complex a{0.0, 0.0};
  CVec c;
};

/// Immutable electrical network data: admittance matrix, its partition,
/// zero-load voltages and branch-current coefficient rows. Bus 0 is the
/// slack; buses 1..N are PQ.
class GridModel {
public:
  static GridModel build(const std::vector<BranchSpec>& branches, int n_pq,
                         Complex slack_voltage,
                         double singularity_tol = 1e-9);

  int n_pq() const { return n_pq_; }
  Complex slack_voltage() const { return v0_; }
  const CMat& Y() const { return Y_; }
  const CMat& Y_LL() const { return Y_LL_; }
  const CMat& Y_LL_inv() const { return Y_LL_inv_; }
  const CVec& Y_L0() const { return Y_L0_; }
  const CVec& w() const { return w_; }
  const std::vector<BranchRow>& branch_rows() const { return branch_rows_; }
  const std::vector<BranchSpec>& branches() const { return branches_; }

  /// Row for the directed pair jk; throws UnknownBranch if jk is not in E.
  const BranchRow& branch_row(int j, int k) const;
  bool has_branch_row(int j, int k) const;

  double min_singular_value_Y_LL() const { return sigma_min_; }

private:
  GridModel() = default;

  int n_pq_ = 0;
  Complex v0_{1.0, 0.0};
  CMat Y_;
  CMat Y_LL_;
  CMat Y_LL_inv_;
  CVec Y_L0_;
  CVec w_;
  double sigma_min_ = 0.0;
  std::vector<BranchSpec> branches_;
  std::vector<BranchRow> branch_rows_;
};

/// (a_jk, c_jk) for the directed pair jk.
std::pair<Complex, CVec> branch_current_coeffs(const GridModel& model, int j,
                                               int k);

/// All branch currents i_jk evaluated at PQ voltages v.
std::vector<Complex> branch_currents(const GridModel& model, const CVec& v);

}  // namespace gridcert
