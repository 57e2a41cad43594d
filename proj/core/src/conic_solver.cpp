#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "gridcert/conic.hpp"

namespace gridcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nesterov-Todd scaling state for one cone block. The scaling W satisfies
// W z = W^{-T} s = lambda (the scaled point).
struct Scaling {
  ConeBlock blk;
  Vec w;            // NonNegative
  Vec v_soc;        // SecondOrder: W = eta (2 v v' - J)
  double eta = 1.0;
  Mat R, Rinv;      // PsdMatrix: W u = svec(R' U R)
  Vec lam;

  void identity() {
    switch (blk.type) {
      case ConeType::NonNegative:
        w = Vec::Ones(blk.size);
        lam = Vec::Ones(blk.size);
        break;
      case ConeType::SecondOrder:
        v_soc = Vec::Zero(blk.size);
        v_soc(0) = 1.0;
        eta = 1.0;
        lam = Vec::Zero(blk.size);
        lam(0) = 1.0;
        break;
      case ConeType::PsdMatrix:
        R = Mat::Identity(blk.size, blk.size);
        Rinv = R;
        lam = svec(Mat::Identity(blk.size, blk.size));
        break;
    }
  }

  bool compute(const Vec& s, const Vec& z) {
    switch (blk.type) {
      case ConeType::NonNegative: {
        if ((s.array() <= 0.0).any() || (z.array() <= 0.0).any()) return false;
        w = (s.array() / z.array()).sqrt();
        lam = (s.array() * z.array()).sqrt();
        return true;
      }
      case ConeType::SecondOrder: {
        const double res_s = s(0) * s(0) - s.tail(s.size() - 1).squaredNorm();
        const double res_z = z(0) * z(0) - z.tail(z.size() - 1).squaredNorm();
        if (res_s <= 0.0 || res_z <= 0.0 || s(0) <= 0.0 || z(0) <= 0.0)
          return false;
        const Vec sbar = s / std::sqrt(res_s);
        const Vec zbar = z / std::sqrt(res_z);
        const double gamma = std::sqrt((1.0 + sbar.dot(zbar)) / 2.0);
        if (!(gamma > 0.0)) return false;
        Vec wbar = zbar;
        wbar(0) = -wbar(0);
        wbar = (sbar - wbar) / (2.0 * gamma);
        wbar(0) = (sbar(0) + zbar(0)) / (2.0 * gamma);
        // v = (wbar + e)/sqrt(2 (wbar0 + 1))
        v_soc = wbar;
        v_soc(0) += 1.0;
        v_soc /= std::sqrt(2.0 * (wbar(0) + 1.0));
        eta = std::pow(res_s / res_z, 0.25);
        lam = apply_W(z);
        return true;
      }
      case ConeType::PsdMatrix: {
        Eigen::LLT<Mat> ls(smat(s, blk.size));
        Eigen::LLT<Mat> lz(smat(z, blk.size));
        if (ls.info() != Eigen::Success || lz.info() != Eigen::Success)
          return false;
        const Mat Ls = ls.matrixL();
        const Mat Lz = lz.matrixL();
        Eigen::JacobiSVD<Mat> svd(Lz.transpose() * Ls,
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vec sig = svd.singularValues();
        if (sig(sig.size() - 1) <= 0.0) return false;
        const Vec sig_isqrt = sig.array().sqrt().inverse();
        R = Ls * svd.matrixV() * sig_isqrt.asDiagonal();
        Rinv = sig_isqrt.asDiagonal() * svd.matrixU().transpose() *
               Lz.transpose();
        lam = svec(Mat(sig.asDiagonal()));
        return true;
      }
    }
    return false;
  }

  Vec soc_mul(const Vec& u, bool inverse) const {
    // (2 v v' - J) u, with J = diag(1, -I); inverse uses Jv in place of v.
    Vec vv = v_soc;
    if (inverse) vv.tail(vv.size() - 1) = -vv.tail(vv.size() - 1);
    Vec out = 2.0 * vv.dot(u) * vv;
    out(0) -= u(0);
    out.tail(out.size() - 1) += u.tail(u.size() - 1);
    out *= inverse ? 1.0 / eta : eta;
    return out;
  }

  Vec apply_W(const Vec& u) const {
    switch (blk.type) {
      case ConeType::NonNegative: return w.cwiseProduct(u);
      case ConeType::SecondOrder: return soc_mul(u, false);
      case ConeType::PsdMatrix:
        return svec(R.transpose() * smat(u, blk.size) * R);
    }
    return u;
  }
  Vec apply_WT(const Vec& u) const {
    if (blk.type == ConeType::PsdMatrix)
      return svec(R * smat(u, blk.size) * R.transpose());
    return apply_W(u);  // symmetric for NonNegative / SecondOrder
  }
  Vec apply_Winv(const Vec& u) const {
    switch (blk.type) {
      case ConeType::NonNegative: return u.cwiseQuotient(w);
      case ConeType::SecondOrder: return soc_mul(u, true);
      case ConeType::PsdMatrix:
        return svec(Rinv.transpose() * smat(u, blk.size) * Rinv);
    }
    return u;
  }
  Vec apply_WinvT(const Vec& u) const {
    if (blk.type == ConeType::PsdMatrix)
      return svec(Rinv * smat(u, blk.size) * Rinv.transpose());
    return apply_Winv(u);
  }

  Vec circ(const Vec& u, const Vec& v) const {
    switch (blk.type) {
      case ConeType::NonNegative: return u.cwiseProduct(v);
      case ConeType::SecondOrder: {
        Vec out(u.size());
        out(0) = u.dot(v);
        out.tail(u.size() - 1) =
            u(0) * v.tail(v.size() - 1) + v(0) * u.tail(u.size() - 1);
        return out;
      }
      case ConeType::PsdMatrix: {
        const Mat U = smat(u, blk.size);
        const Mat V = smat(v, blk.size);
        return svec(0.5 * (U * V + V * U));
      }
    }
    return u;
  }

  // Solve lam o x = d for x, lam being the current scaled point.
  Vec lam_div(const Vec& d) const {
    switch (blk.type) {
      case ConeType::NonNegative: return d.cwiseQuotient(lam);
      case ConeType::SecondOrder: {
        const double l0 = lam(0);
        const Vec l1 = lam.tail(lam.size() - 1);
        const double det = l0 * l0 - l1.squaredNorm();
        Vec out(d.size());
        out(0) = (l0 * d(0) - l1.dot(d.tail(d.size() - 1))) / det;
        out.tail(d.size() - 1) = (d.tail(d.size() - 1) - out(0) * l1) / l0;
        return out;
      }
      case ConeType::PsdMatrix: {
        // lam is diagonal by construction of the NT scaling.
        const Mat D = smat(d, blk.size);
        Vec sig(blk.size);
        {
          const Mat L = smat(lam, blk.size);
          for (int i = 0; i < blk.size; ++i) sig(i) = L(i, i);
        }
        Mat X(blk.size, blk.size);
        for (int i = 0; i < blk.size; ++i)
          for (int j = 0; j < blk.size; ++j)
            X(i, j) = 2.0 * D(i, j) / (sig(i) + sig(j));
        return svec(0.5 * (X + X.transpose()));
      }
    }
    return d;
  }

  Vec e() const {
    switch (blk.type) {
      case ConeType::NonNegative: return Vec::Ones(blk.size);
      case ConeType::SecondOrder: {
        Vec out = Vec::Zero(blk.size);
        out(0) = 1.0;
        return out;
      }
      case ConeType::PsdMatrix:
        return svec(Mat::Identity(blk.size, blk.size));
    }
    return Vec();
  }

  // Largest step alpha with v + alpha dv remaining in the cone (v interior).
  double max_step(const Vec& v, const Vec& dv) const {
    switch (blk.type) {
      case ConeType::NonNegative: {
        double a = kInf;
        for (int i = 0; i < v.size(); ++i)
          if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
        return a;
      }
      case ConeType::SecondOrder: {
        // roots of (v0+a d0)^2 - |v1+a d1|^2 = 0
        const Vec v1 = v.tail(v.size() - 1);
        const Vec d1 = dv.tail(dv.size() - 1);
        const double A = dv(0) * dv(0) - d1.squaredNorm();
        const double B = 2.0 * (v(0) * dv(0) - v1.dot(d1));
        const double C = v(0) * v(0) - v1.squaredNorm();
        double a = kInf;
        if (dv(0) < 0.0) a = std::min(a, -v(0) / dv(0));
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
          const double sq = std::sqrt(disc);
          for (double root : {std::abs(A) > 1e-300 ? (-B - sq) / (2 * A) : kInf,
                              std::abs(A) > 1e-300 ? (-B + sq) / (2 * A) : kInf,
                              std::abs(B) > 1e-300 ? -C / B : kInf}) {
            if (root > 0.0) a = std::min(a, root);
          }
        }
        return a;
      }
      case ConeType::PsdMatrix: {
        Eigen::LLT<Mat> llt(smat(v, blk.size));
        if (llt.info() != Eigen::Success) return 0.0;
        const Mat L = llt.matrixL();
        Mat M = L.triangularView<Eigen::Lower>().solve(smat(dv, blk.size));
        M = L.triangularView<Eigen::Lower>()
                .solve(Mat(M.transpose()))
                .transpose();
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()),
                                              Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        return lmin >= 0.0 ? kInf : -1.0 / lmin;
      }
    }
    return 0.0;
  }

  // Margin to the cone boundary (positive inside).
  double interior_margin(const Vec& v) const {
    switch (blk.type) {
      case ConeType::NonNegative: return v.minCoeff();
      case ConeType::SecondOrder:
        return v(0) - v.tail(v.size() - 1).norm();
      case ConeType::PsdMatrix: {
        Eigen::SelfAdjointEigenSolver<Mat> es(smat(v, blk.size),
                                              Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
      }
    }
    return 0.0;
  }
};

struct BlockLayout {
  std::vector<int> offsets;
  int total = 0;
};

class ConeOps {
public:
  explicit ConeOps(const std::vector<ConeBlock>& cones) {
    int off = 0;
    for (const auto& blk : cones) {
      scalings_.push_back(Scaling{blk});
      layout_.offsets.push_back(off);
      off += blk.vec_len();
    }
    layout_.total = off;
  }

  int dim() const { return layout_.total; }

  void identity() {
    for (auto& s : scalings_) s.identity();
  }
  bool compute(const Vec& s, const Vec& z) {
    for (size_t i = 0; i < scalings_.size(); ++i)
      if (!scalings_[i].compute(seg(s, i), seg(z, i))) return false;
    return true;
  }

  template <typename F>
  Vec map(const Vec& u, F&& f) const {
    Vec out(layout_.total);
    for (size_t i = 0; i < scalings_.size(); ++i)
      out.segment(layout_.offsets[i], scalings_[i].blk.vec_len()) =
          f(scalings_[i], seg(u, i));
    return out;
  }

  Vec W(const Vec& u) const {
    return map(u, [](const Scaling& s, const Vec& v) { return s.apply_W(v); });
  }
  Vec WT(const Vec& u) const {
    return map(u, [](const Scaling& s, const Vec& v) { return s.apply_WT(v); });
  }
  Vec Winv(const Vec& u) const {
    return map(u,
               [](const Scaling& s, const Vec& v) { return s.apply_Winv(v); });
  }
  Vec WinvT(const Vec& u) const {
    return map(
        u, [](const Scaling& s, const Vec& v) { return s.apply_WinvT(v); });
  }
  Vec WtW(const Vec& u) const { return WT(W(u)); }

  Vec circ(const Vec& u, const Vec& v) const {
    Vec out(layout_.total);
    for (size_t i = 0; i < scalings_.size(); ++i)
      out.segment(layout_.offsets[i], scalings_[i].blk.vec_len()) =
          scalings_[i].circ(seg(u, i), seg(v, i));
    return out;
  }
  Vec lam_div(const Vec& d) const {
    Vec out(layout_.total);
    for (size_t i = 0; i < scalings_.size(); ++i)
      out.segment(layout_.offsets[i], scalings_[i].blk.vec_len()) =
          scalings_[i].lam_div(seg(d, i));
    return out;
  }
  Vec lambda() const {
    Vec out(layout_.total);
    for (size_t i = 0; i < scalings_.size(); ++i)
      out.segment(layout_.offsets[i], scalings_[i].blk.vec_len()) =
          scalings_[i].lam;
    return out;
  }
  Vec e() const {
    Vec out(layout_.total);
    for (size_t i = 0; i < scalings_.size(); ++i)
      out.segment(layout_.offsets[i], scalings_[i].blk.vec_len()) =
          scalings_[i].e();
    return out;
  }
  double max_step(const Vec& v, const Vec& dv) const {
    double a = kInf;
    for (size_t i = 0; i < scalings_.size(); ++i)
      a = std::min(a, scalings_[i].max_step(seg(v, i), seg(dv, i)));
    return a;
  }
  double min_margin(const Vec& v) const {
    double m = kInf;
    for (size_t i = 0; i < scalings_.size(); ++i)
      m = std::min(m, scalings_[i].interior_margin(seg(v, i)));
    return m;
  }

  size_t num_blocks() const { return scalings_.size(); }
  const Scaling& scaling(size_t i) const { return scalings_[i]; }
  int offset(size_t i) const { return layout_.offsets[i]; }

private:
  Vec seg(const Vec& u, size_t i) const {
    return u.segment(layout_.offsets[i], scalings_[i].blk.vec_len());
  }

  std::vector<Scaling> scalings_;
  BlockLayout layout_;
};

// Factorization of the reduced KKT system
//   [0 A' G'; A 0 0; G 0 -W'W] [dx; dy; dz] = [bx; by; bz]
// by elimination of dz and a regularized LU of the (n+p) saddle system.
class KktSolver {
public:
  KktSolver(const ConicProblem& p, const ConeOps& ops)
      : p_(p), ops_(ops), n_(p.num_vars), np_(static_cast<int>(p.A.rows())) {
    // Per-cone-block column support of G; moment SDPs touch only a small
    // variable subset per block, which keeps H = G~'G~ assembly cheap.
    blocks_.resize(ops.num_blocks());
    for (size_t i = 0; i < blocks_.size(); ++i) {
      auto& bd = blocks_[i];
      bd.row_off = ops.offset(i);
      bd.nrows = ops.scaling(i).blk.vec_len();
      for (int j = 0; j < n_; ++j)
        if (!p.G.block(bd.row_off, j, bd.nrows, 1).isZero(0.0))
          bd.cols.push_back(j);
      bd.Gsub = Mat(bd.nrows, bd.cols.size());
      for (size_t cj = 0; cj < bd.cols.size(); ++cj)
        bd.Gsub.col(cj) = p.G.block(bd.row_off, bd.cols[cj], bd.nrows, 1);
      bd.Gt = bd.Gsub;
    }
  }

  bool factorize() {
    Mat K = Mat::Zero(n_ + np_, n_ + np_);
    for (auto& bd : blocks_) {
      const auto& sc = ops_.scaling(&bd - blocks_.data());
      for (int cj = 0; cj < bd.Gsub.cols(); ++cj)
        bd.Gt.col(cj) = sc.apply_WinvT(bd.Gsub.col(cj));
      Mat Hloc(bd.cols.size(), bd.cols.size());
      Hloc.setZero();
      Hloc.selfadjointView<Eigen::Lower>().rankUpdate(bd.Gt.transpose());
      for (size_t a = 0; a < bd.cols.size(); ++a)
        for (size_t b = 0; b <= a; ++b) {
          K(bd.cols[a], bd.cols[b]) += Hloc(a, b);
          if (a != b) K(bd.cols[b], bd.cols[a]) += Hloc(a, b);
        }
    }
    const double delta =
        1e-11 * std::max(1.0, K.topLeftCorner(n_, n_).diagonal().maxCoeff());
    K.topLeftCorner(n_, n_).diagonal().array() += delta;
    if (np_ > 0) {
      K.topRightCorner(n_, np_) = p_.A.transpose();
      K.bottomLeftCorner(np_, n_) = p_.A;
      K.bottomRightCorner(np_, np_).diagonal().array() -= delta;
    }
    lu_.compute(K);
    return true;
  }

  // One solve with a single refinement pass.
  void solve(const Vec& bx, const Vec& by, const Vec& bz, Vec& dx, Vec& dy,
             Vec& dz) const {
    solve_once(bx, by, bz, dx, dy, dz);
    // refinement on the unreduced system
    Vec r1 = bx - G_mul_T(dz);
    if (np_ > 0) r1 -= p_.A.transpose() * dy;
    Vec r2 = np_ > 0 ? Vec(by - p_.A * dx) : Vec();
    Vec r3 = bz - (G_mul(dx) - ops_.WtW(dz));
    Vec ex, ey, ez;
    solve_once(r1, r2, r3, ex, ey, ez);
    dx += ex;
    if (np_ > 0) dy += ey;
    dz += ez;
  }

private:
  struct BlockData {
    int row_off = 0, nrows = 0;
    std::vector<int> cols;
    Mat Gsub;  // original block columns
    Mat Gt;    // W^{-T} applied blockwise (current factorization)
  };

  Vec G_mul(const Vec& x) const {
    Vec out = Vec::Zero(ops_.dim());
    for (const auto& bd : blocks_)
      out.segment(bd.row_off, bd.nrows).noalias() += bd.Gsub * gather(x, bd);
    return out;
  }
  Vec G_mul_T(const Vec& u) const {
    Vec out = Vec::Zero(n_);
    for (const auto& bd : blocks_)
      scatter(bd.Gsub.transpose() * u.segment(bd.row_off, bd.nrows), bd, out);
    return out;
  }
  static Vec gather(const Vec& x, const BlockData& bd) {
    Vec out(bd.cols.size());
    for (size_t i = 0; i < bd.cols.size(); ++i) out(i) = x(bd.cols[i]);
    return out;
  }
  template <typename Out>
  static void scatter(const Vec& v, const BlockData& bd, Out&& out) {
    for (size_t i = 0; i < bd.cols.size(); ++i) out(bd.cols[i]) += v(i);
  }

  void solve_once(const Vec& bx, const Vec& by, const Vec& bz, Vec& dx,
                  Vec& dy, Vec& dz) const {
    const Vec bz_t = ops_.WinvT(bz);
    Vec rhs(n_ + np_);
    rhs.head(n_) = bx;
    for (const auto& bd : blocks_)
      scatter(bd.Gt.transpose() * bz_t.segment(bd.row_off, bd.nrows), bd,
              rhs.head(n_));
    if (np_ > 0) rhs.tail(np_) = by;
    const Vec sol = lu_.solve(rhs);
    dx = sol.head(n_);
    dy = np_ > 0 ? Vec(sol.tail(np_)) : Vec();
    Vec t = -bz_t;
    for (const auto& bd : blocks_)
      t.segment(bd.row_off, bd.nrows).noalias() += bd.Gt * gather(dx, bd);
    dz = ops_.Winv(t);
  }

  const ConicProblem& p_;
  const ConeOps& ops_;
  int n_, np_;
  std::vector<BlockData> blocks_;
  Eigen::PartialPivLU<Mat> lu_;
};

SolveOutcome solve_no_cones(const ConicProblem& p) {
  // Pure equality system: either consistent (Feasible) or a least-squares
  // residual gives the Farkas certificate directly.
  SolveOutcome out;
  Eigen::ColPivHouseholderQR<Mat> qr(p.A);
  const Vec x = qr.solve(p.b);
  const Vec r = p.A * x - p.b;
  if (r.cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + p.b.cwiseAbs().maxCoeff())) {
    out.status = SolveStatus::Feasible;
    out.x = x;
    out.objective = p.c.dot(x);
    return out;
  }
  InfeasibilityCertificate cert;
  // r is orthogonal to range(A), so A'y = 0 and b'y = b'r/|r|^2 = -1.
  cert.y = r / r.squaredNorm();
  cert.z = Vec::Zero(0);
  if (verify_infeasibility_certificate(p, cert)) {
    out.status = SolveStatus::Infeasible;
    out.certificate = cert;
  } else {
    out.reason = "equality system classification failed";
  }
  return out;
}

}  // namespace

SolveOutcome solve(const ConicProblem& p, const SolveOptions& opts) {
  p.validate();
  SolveOutcome out;
  if (p.cones.empty()) return solve_no_cones(p);

  const int n = p.num_vars;
  const int np = static_cast<int>(p.A.rows());
  ConeOps ops(p.cones);
  const int m = ops.dim();
  const double deg = static_cast<double>(p.cone_degree());

  const double normb = 1.0 + (np > 0 ? p.b.cwiseAbs().maxCoeff() : 0.0);
  const double normh = 1.0 + p.h.cwiseAbs().maxCoeff();
  const double normc = 1.0 + p.c.cwiseAbs().maxCoeff();

  KktSolver kkt(p, ops);

  // --- Initialization: least-squares primal/dual points shifted into the
  // cone interior, unit tau/kappa.
  Vec x, y, z, s;
  {
    ops.identity();
    kkt.factorize();
    Vec dx, dy, dz;
    kkt.solve(Vec::Zero(n), np > 0 ? p.b : Vec(), p.h, dx, dy, dz);
    x = dx;
    const Vec s_raw = p.h - p.G * x;
    const double ms = ops.min_margin(s_raw);
    s = ms > 0.0 ? s_raw : Vec(s_raw + (1.0 - ms) * ops.e());

    kkt.solve(-p.c, np > 0 ? Vec(Vec::Zero(np)) : Vec(), Vec::Zero(m), dx, dy,
              dz);
    y = dy;
    const Vec z_raw = -dz;
    const double mz = ops.min_margin(z_raw);
    z = mz > 0.0 ? z_raw : Vec(z_raw + (1.0 - mz) * ops.e());
  }
  double tau = 1.0, kappa = 1.0;

  const auto try_certificate = [&](const Vec& yc, const Vec& zc) -> bool {
    InfeasibilityCertificate cert{yc, zc};
    if (verify_infeasibility_certificate(p, cert, opts.cert_tol)) {
      out.status = SolveStatus::Infeasible;
      out.certificate = std::move(cert);
      return true;
    }
    return false;
  };

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    out.iterations = iter;

    // Residuals of the homogeneous embedding.
    Vec r1 = p.G.transpose() * z + p.c * tau;  // A'y + G'z + c tau
    if (np > 0) r1 += p.A.transpose() * y;
    const Vec r2 = np > 0 ? Vec(p.A * x - p.b * tau) : Vec();
    const Vec r3 = s + p.G * x - p.h * tau;
    const double cx = p.c.dot(x);
    const double by = np > 0 ? p.b.dot(y) : 0.0;
    const double hz = p.h.dot(z);
    const double r4 = kappa + cx + by + hz;
    const double sz = s.dot(z);
    const double mu = (sz + tau * kappa) / (deg + 1.0);

    const double pres =
        std::max(np > 0 ? r2.cwiseAbs().maxCoeff() : 0.0,
                 r3.cwiseAbs().maxCoeff()) /
        tau / std::max(normb, normh);
    const double dres = r1.cwiseAbs().maxCoeff() / tau / normc;
    const double pcost = cx / tau;
    const double relgap = (sz / (tau * tau)) / std::max(1.0, std::abs(pcost));
    out.primal_residual = pres;
    out.dual_residual = dres;
    out.gap = relgap;

    if (pres <= opts.feas_tol && dres <= 100.0 * opts.feas_tol &&
        relgap <= 1e-6) {
      out.status = SolveStatus::Feasible;
      out.x = x / tau;
      out.objective = pcost;
      return out;
    }
    if (by + hz < 0.0 && try_certificate(y, z)) return out;
    if (cx < 0.0) {
      // possible unbounded-objective ray
      const double ray_res =
          std::max(np > 0 ? (p.A * x).cwiseAbs().maxCoeff() : 0.0,
                   ops.min_margin(s) >= 0.0
                       ? (p.G * x + s).cwiseAbs().maxCoeff()
                       : kInf);
      if (ray_res <= 1e-9 * (-cx)) {
        out.status = SolveStatus::Unknown;
        out.reason = "unbounded objective (dual infeasibility ray)";
        return out;
      }
    }
    if (tau <= 1e-12 * std::max(1.0, kappa)) {
      out.status = SolveStatus::Unknown;
      out.reason = "ill-posed: tau -> 0 without verified certificate";
      return out;
    }

    if (!ops.compute(s, z)) {
      out.status = SolveStatus::Unknown;
      out.reason = "numerical breakdown in cone scaling";
      return out;
    }
    kkt.factorize();

    // Common solve with rhs (-c, b, h).
    Vec vx, vy, vz;
    kkt.solve(-p.c, np > 0 ? p.b : Vec(), p.h, vx, vy, vz);

    const Vec lambda = ops.lambda();

    const auto direction = [&](const Vec& ds_rhs, double dkappa_rhs, Vec& dx,
                               Vec& dy, Vec& dz, Vec& ds, double& dtau,
                               double& dkappa) {
      const Vec bz = -r3 - ops.WT(ops.lam_div(ds_rhs));
      Vec ux, uy, uz;
      kkt.solve(-r1, np > 0 ? Vec(-r2) : Vec(), bz, ux, uy, uz);
      const double denom = p.c.dot(vx) + (np > 0 ? p.b.dot(vy) : 0.0) +
                           p.h.dot(vz) - kappa / tau;
      const double numer = -r4 - (p.c.dot(ux) + (np > 0 ? p.b.dot(uy) : 0.0) +
                                  p.h.dot(uz)) -
                           dkappa_rhs / tau;
      dtau = numer / denom;
      dx = ux + dtau * vx;
      if (np > 0) dy = uy + dtau * vy;
      dz = uz + dtau * vz;
      ds = ops.WT(ops.lam_div(ds_rhs)) - ops.WtW(dz);
      dkappa = (dkappa_rhs - kappa * dtau) / tau;
    };

    // Affine (predictor) direction.
    Vec dxa, dya, dza, dsa;
    double dtaua, dkappaa;
    direction(-ops.circ(lambda, lambda), -tau * kappa, dxa, dya, dza, dsa,
              dtaua, dkappaa);

    double alpha_aff = std::min({ops.max_step(s, dsa), ops.max_step(z, dza),
                                 dtaua < 0 ? -tau / dtaua : kInf,
                                 dkappaa < 0 ? -kappa / dkappaa : kInf});
    alpha_aff = std::min(1.0, alpha_aff);
    const double sigma =
        std::pow(std::clamp(1.0 - alpha_aff, 0.0, 1.0), 3.0);

    // Combined (corrector) direction.
    const Vec corr = ops.circ(ops.WinvT(dsa), ops.W(dza));
    const Vec ds_rhs =
        -ops.circ(lambda, lambda) - corr + sigma * mu * ops.e();
    const double dkappa_rhs = -tau * kappa - dtaua * dkappaa + sigma * mu;
    Vec dx, dy, dz, ds;
    double dtau, dkappa;
    direction(ds_rhs, dkappa_rhs, dx, dy, dz, ds, dtau, dkappa);

    double alpha = std::min({ops.max_step(s, ds), ops.max_step(z, dz),
                             dtau < 0 ? -tau / dtau : kInf,
                             dkappa < 0 ? -kappa / dkappa : kInf});
    alpha = std::min(1.0, 0.98 * alpha);
    if (!(alpha > 1e-10) || !dx.allFinite() || !ds.allFinite() ||
        !dz.allFinite()) {
      out.status = SolveStatus::Unknown;
      out.reason = "step size collapsed";
      return out;
    }

    x += alpha * dx;
    if (np > 0) y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
  }

  // Final classification attempt after exhausting iterations.
  if (p.b.dot(y) * 0.0 == 0.0) {
    const double by = np > 0 ? p.b.dot(y) : 0.0;
    if (by + p.h.dot(z) < 0.0 && try_certificate(y, z)) return out;
  }
  out.status = SolveStatus::Unknown;
  out.reason = "iteration limit reached";
  return out;
}

}  // namespace gridcert
