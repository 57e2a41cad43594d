#include "gridcert/conic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ostream>

namespace gridcert {

int svec_len(int side) { return side * (side + 1) / 2; }

Vec svec(const Mat& S) {
  const int n = static_cast<int>(S.rows());
  static const double rt2 = std::sqrt(2.0);
  Vec v(svec_len(n));
  int k = 0;
  for (int j = 0; j < n; ++j) {
    v(k++) = S(j, j);
    for (int i = j + 1; i < n; ++i) v(k++) = rt2 * S(i, j);
  }
  return v;
}

Mat smat(const Vec& v, int side) {
  static const double inv_rt2 = 1.0 / std::sqrt(2.0);
  Mat S(side, side);
  int k = 0;
  for (int j = 0; j < side; ++j) {
    S(j, j) = v(k++);
    for (int i = j + 1; i < side; ++i) {
      S(i, j) = inv_rt2 * v(k);
      S(j, i) = S(i, j);
      ++k;
    }
  }
  return S;
}

int ConicProblem::cone_dim() const {
  int m = 0;
  for (const auto& blk : cones) m += blk.vec_len();
  return m;
}

int ConicProblem::cone_degree() const {
  int d = 0;
  for (const auto& blk : cones) d += blk.degree();
  return d;
}

void ConicProblem::validate() const {
  const int m = cone_dim();
  if (c.size() != num_vars) throw InvalidInput("conic: objective size mismatch");
  if (A.rows() != b.size() || (A.rows() > 0 && A.cols() != num_vars))
    throw InvalidInput("conic: equality block size mismatch");
  if (G.rows() != m || G.rows() != h.size() ||
      (G.rows() > 0 && G.cols() != num_vars))
    throw InvalidInput("conic: cone block size mismatch");
  if (!c.allFinite() || !b.allFinite() || !h.allFinite() ||
      (A.size() > 0 && !A.allFinite()) || (G.size() > 0 && !G.allFinite()))
    throw InvalidInput("conic: non-finite data");
  for (const auto& blk : cones)
    if (blk.size <= 0) throw InvalidInput("conic: empty cone block");
}

ConicProblemBuilder::ConicProblemBuilder(int num_vars)
    : n_(num_vars), c_(Vec::Zero(num_vars)) {}

void ConicProblemBuilder::set_objective(const Vec& c) { c_ = c; }

void ConicProblemBuilder::add_equality(const Vec& row, double rhs) {
  eq_rows_.push_back(row);
  eq_rhs_.push_back(rhs);
}

void ConicProblemBuilder::add_cone_rows(ConeBlock block, const Mat& G_rows,
                                        const Vec& h_rows) {
  if (G_rows.rows() != block.vec_len() || h_rows.size() != block.vec_len())
    throw InvalidInput("builder: cone row count mismatch");
  for (int r = 0; r < G_rows.rows(); ++r) {
    g_rows_.push_back(G_rows.row(r).transpose());
    h_vals_.push_back(h_rows(r));
  }
  cones_.push_back(block);
}

void ConicProblemBuilder::add_leq(const Vec& row, double rhs) {
  Mat g(1, n_);
  g.row(0) = row.transpose();
  Vec h(1);
  h(0) = rhs;
  add_cone_rows(ConeBlock{ConeType::NonNegative, 1}, g, h);
}

ConicProblem ConicProblemBuilder::finish() {
  ConicProblem p;
  p.num_vars = n_;
  p.c = c_;
  p.A = Mat::Zero(static_cast<Eigen::Index>(eq_rows_.size()), n_);
  p.b = Vec::Zero(static_cast<Eigen::Index>(eq_rows_.size()));
  for (size_t i = 0; i < eq_rows_.size(); ++i) {
    p.A.row(static_cast<Eigen::Index>(i)) = eq_rows_[i].transpose();
    p.b(static_cast<Eigen::Index>(i)) = eq_rhs_[i];
  }
  p.G = Mat::Zero(static_cast<Eigen::Index>(g_rows_.size()), n_);
  p.h = Vec::Zero(static_cast<Eigen::Index>(g_rows_.size()));
  for (size_t i = 0; i < g_rows_.size(); ++i) {
    p.G.row(static_cast<Eigen::Index>(i)) = g_rows_[i].transpose();
    p.h(static_cast<Eigen::Index>(i)) = h_vals_[i];
  }
  p.cones = cones_;
  p.validate();
  return p;
}

namespace {

// Distance-like violation of cone membership (0 when inside).
double cone_violation(const ConeBlock& blk, const Vec& v) {
  switch (blk.type) {
    case ConeType::NonNegative:
      return std::max(0.0, -v.minCoeff());
    case ConeType::SecondOrder:
      return std::max(0.0, v.tail(v.size() - 1).norm() - v(0));
    case ConeType::PsdMatrix: {
      Eigen::SelfAdjointEigenSolver<Mat> es(smat(v, blk.size));
      return std::max(0.0, -es.eigenvalues().minCoeff());
    }
  }
  return 0.0;
}

}  // namespace

double primal_violation(const ConicProblem& p, const Vec& x) {
  double viol = 0.0;
  if (p.A.rows() > 0) viol = (p.A * x - p.b).cwiseAbs().maxCoeff();
  const Vec s = p.h - p.G * x;
  int off = 0;
  for (const auto& blk : p.cones) {
    viol = std::max(viol, cone_violation(blk, s.segment(off, blk.vec_len())));
    off += blk.vec_len();
  }
  return viol;
}

bool verify_infeasibility_certificate(const ConicProblem& p,
                                      const InfeasibilityCertificate& cert,
                                      double cert_tol) {
  if (cert.y.size() != p.A.rows() || cert.z.size() != p.G.rows()) return false;
  if (!cert.y.allFinite() || !cert.z.allFinite()) return false;

  const double rho = -(p.b.dot(cert.y) + p.h.dot(cert.z));
  if (!(rho > 0.0)) return false;
  const Vec y = cert.y / rho;
  const Vec z = cert.z / rho;

  // Dual cone membership (K is self-dual blockwise).
  const double zmax = z.size() > 0 ? z.cwiseAbs().maxCoeff() : 0.0;
  const double memb_tol = cert_tol * (1.0 + zmax);
  int off = 0;
  for (const auto& blk : p.cones) {
    if (cone_violation(blk, z.segment(off, blk.vec_len())) > memb_tol)
      return false;
    off += blk.vec_len();
  }

  // Farkas identity A'y + G'z = 0 with b'y + h'z = -1.
  Vec r = p.G.transpose() * z;
  if (p.A.rows() > 0) r += p.A.transpose() * y;
  double data_norm = 0.0;
  if (p.A.size() > 0) data_norm = p.A.cwiseAbs().maxCoeff();
  if (p.G.size() > 0)
    data_norm = std::max(data_norm, p.G.cwiseAbs().maxCoeff());
  double cert_norm = zmax;
  if (y.size() > 0) cert_norm = std::max(cert_norm, y.cwiseAbs().maxCoeff());
  const double scale = std::max(1.0, data_norm * cert_norm);
  return r.cwiseAbs().maxCoeff() <= cert_tol * scale;
}

void dump_problem(const ConicProblem& p, std::ostream& os) {
  os << "# conic problem n=" << p.num_vars << " p=" << p.A.rows()
     << " m=" << p.cone_dim() << "\n";
  for (size_t i = 0; i < p.cones.size(); ++i) {
    const auto& blk = p.cones[i];
    const char* t = blk.type == ConeType::NonNegative  ? "nonneg"
                    : blk.type == ConeType::SecondOrder ? "soc"
                                                        : "psd";
    os << "K " << i << " " << t << " " << blk.size << "\n";
  }
  for (int j = 0; j < p.c.size(); ++j)
    if (p.c(j) != 0.0) os << "c 0 " << j << " " << p.c(j) << "\n";
  for (int i = 0; i < p.A.rows(); ++i)
    for (int j = 0; j < p.A.cols(); ++j)
      if (p.A(i, j) != 0.0) os << "A " << i << " " << j << " " << p.A(i, j) << "\n";
  for (int i = 0; i < p.b.size(); ++i)
    if (p.b(i) != 0.0) os << "b " << i << " 0 " << p.b(i) << "\n";
  for (int i = 0; i < p.G.rows(); ++i)
    for (int j = 0; j < p.G.cols(); ++j)
      if (p.G(i, j) != 0.0) os << "G " << i << " " << j << " " << p.G(i, j) << "\n";
  for (int i = 0; i < p.h.size(); ++i)
    if (p.h(i) != 0.0) os << "h " << i << " 0 " << p.h(i) << "\n";
}

}  // namespace gridcert
