#include "gridcert/grid_model.hpp"

#include <Eigen/SVD>
#include <queue>
#include <set>
#include <sstream>

namespace gridcert {

namespace {

void validate_branches(const std::vector<BranchSpec>& branches, int n_pq) {
  if (n_pq < 1) throw InvalidInput("n_pq must be >= 1");
  std::set<std::pair<int, int>> seen;
  for (const auto& b : branches) {
    if (b.from < 0 || b.from > n_pq || b.to < 0 || b.to > n_pq) {
      std::ostringstream os;
      os << "branch " << b.from << "-" << b.to << ": bus index out of range";
      throw InvalidInput(os.str());
    }
    if (b.from == b.to) throw InvalidInput("branch with identical endpoints");
    if (std::abs(b.y_series) == 0.0)
      throw InvalidInput("branch with zero series admittance");
    if (!is_finite(b.y_series) || !std::isfinite(b.b_shunt_total))
      throw InvalidInput("branch with non-finite parameters");
    if (b.b_shunt_total < 0.0)
      throw InvalidInput("negative total shunt susceptance");
    if (b.tap && (!std::isfinite(*b.tap) || *b.tap <= 0.0))
      throw InvalidInput("tap ratio must be finite and positive");
    auto key = std::minmax(b.from, b.to);
    if (!seen.insert({key.first, key.second}).second) {
      std::ostringstream os;
      os << "duplicate branch between buses " << key.first << " and "
         << key.second;
      throw DuplicateBranch(os.str());
    }
  }
}

void check_connected(const std::vector<BranchSpec>& branches, int n_pq) {
  std::vector<std::vector<int>> adj(n_pq + 1);
  for (const auto& b : branches) {
    adj[b.from].push_back(b.to);
    adj[b.to].push_back(b.from);
  }
  std::vector<char> visited(n_pq + 1, 0);
  std::queue<int> q;
  q.push(0);
  visited[0] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!visited[v]) {
        visited[v] = 1;
        q.push(v);
      }
  }
  for (int j = 0; j <= n_pq; ++j)
    if (!visited[j]) {
      std::ostringstream os;
      os << "bus " << j << " is not connected to the slack bus";
      throw DisconnectedNetwork(os.str());
    }
}

// 2x2 branch admittance block for endpoints (from, to); tap on the from side.
Eigen::Matrix2cd branch_block(const BranchSpec& b) {
  const Complex y = b.y_series;
  const Complex ysh{0.0, b.b_shunt_total / 2.0};
  const double t = b.tap.value_or(1.0);
  Eigen::Matrix2cd m;
  m(0, 0) = (y + ysh) / (t * t);
  m(0, 1) = -y / t;
  m(1, 0) = -y / t;
  m(1, 1) = y + ysh;
  return m;
}

}  // namespace

GridModel GridModel::build(const std::vector<BranchSpec>& branches, int n_pq,
                           Complex slack_voltage, double singularity_tol) {
  validate_branches(branches, n_pq);
  check_connected(branches, n_pq);
  if (!is_finite(slack_voltage) || std::abs(slack_voltage) == 0.0)
    throw InvalidInput("slack voltage must be finite and nonzero");

  GridModel g;
  g.n_pq_ = n_pq;
  g.v0_ = slack_voltage;
  g.branches_ = branches;
  g.Y_ = CMat::Zero(n_pq + 1, n_pq + 1);

  for (const auto& b : branches) {
    const Eigen::Matrix2cd m = branch_block(b);
    const int idx[2] = {b.from, b.to};
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) g.Y_(idx[p], idx[q]) += m(p, q);

    // Directed branch-current rows: i_jk is the current injected at the j
    // side, i_kj at the k side.
    for (int dir = 0; dir < 2; ++dir) {
      BranchRow row;
      row.from = idx[dir];
      row.to = idx[1 - dir];
      row.a = Complex{0.0, 0.0};
      row.c = CVec::Zero(n_pq);
      const Complex coef_self = m(dir, dir);
      const Complex coef_other = m(dir, 1 - dir);
      if (row.from == 0)
        row.a += coef_self;
      else
        row.c(row.from - 1) += coef_self;
      if (row.to == 0)
        row.a += coef_other;
      else
        row.c(row.to - 1) += coef_other;
      g.branch_rows_.push_back(std::move(row));
    }
  }

  g.Y_LL_ = g.Y_.bottomRightCorner(n_pq, n_pq);
  g.Y_L0_ = g.Y_.bottomLeftCorner(n_pq, 1).col(0);

  Eigen::JacobiSVD<CMat> svd(g.Y_LL_);
  const double sigma_max = svd.singularValues()(0);
  g.sigma_min_ = svd.singularValues()(n_pq - 1);
  if (g.sigma_min_ <= singularity_tol * sigma_max) {
    std::ostringstream os;
    os << "Y_LL is numerically singular (sigma_min/sigma_max = "
       << g.sigma_min_ / sigma_max << ")";
    throw SingularYLL(os.str());
  }

  Eigen::PartialPivLU<CMat> lu(g.Y_LL_);
  g.Y_LL_inv_ = lu.inverse();
  g.w_ = lu.solve(-g.Y_L0_ * g.v0_);
  const double res =
      (g.Y_LL_ * g.w_ + g.Y_L0_ * g.v0_).cwiseAbs().maxCoeff();
  if (res > 1e-10)
    throw SingularYLL("zero-load voltage solve residual exceeds 1e-10");
  return g;
}

bool GridModel::has_branch_row(int j, int k) const {
  for (const auto& r : branch_rows_)
    if (r.from == j && r.to == k) return true;
  return false;
}

const BranchRow& GridModel::branch_row(int j, int k) const {
  for (const auto& r : branch_rows_)
    if (r.from == j && r.to == k) return r;
  std::ostringstream os;
  os << "no branch row for directed pair " << j << "-" << k;
  throw UnknownBranch(os.str());
}

std::pair<Complex, CVec> branch_current_coeffs(const GridModel& model, int j,
                                               int k) {
  const BranchRow& r = model.branch_row(j, k);
  return {r.a, r.c};
}

std::vector<Complex> branch_currents(const GridModel& model, const CVec& v) {
  std::vector<Complex> out;
  out.reserve(model.branch_rows().size());
  for (const auto& r : model.branch_rows())
    out.push_back(r.a * model.slack_voltage() + r.c.cwiseProduct(v).sum());
  return out;
}

}  // namespace gridcert
