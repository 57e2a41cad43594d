#include "gridcert/moment.hpp"

#include <algorithm>
#include <cmath>

namespace gridcert {

namespace {

// (c1 + l1.x)(c2 + l2.x) as a symmetric quadratic form.
QuadraticForm affine_product(double c1, const Vec& l1, double c2,
                             const Vec& l2) {
  QuadraticForm f;
  f.constant = c1 * c2;
  f.linear = c1 * l2 + c2 * l1;
  f.quadratic = 0.5 * (l1 * l2.transpose() + l2 * l1.transpose());
  return f;
}

QuadraticForm add_forms(const QuadraticForm& a, const QuadraticForm& b) {
  QuadraticForm f;
  f.constant = a.constant + b.constant;
  f.linear = a.linear + b.linear;
  f.quadratic = a.quadratic + b.quadratic;
  return f;
}

QuadraticForm negate(const QuadraticForm& a) {
  QuadraticForm f;
  f.constant = -a.constant;
  f.linear = -a.linear;
  f.quadratic = -a.quadratic;
  return f;
}

// Affine pieces of F_j: voltage coordinates and current components
// p = Re(i_j), q = Im(i_j) with i_j = Row_j(Y_LL)(v - w).
struct LoadFlowAffine {
  double pc, qc;
  Vec pl, ql, al, bl;
};

LoadFlowAffine load_flow_affine(const GridModel& model, int j) {
  const int n = model.n_pq();
  LoadFlowAffine a;
  const CVec row = model.Y_LL().row(j).transpose();
  const Complex u0 = -row.cwiseProduct(model.w()).sum();
  a.pc = u0.real();
  a.qc = u0.imag();
  a.pl = Vec::Zero(2 * n);
  a.ql = Vec::Zero(2 * n);
  for (int k = 0; k < n; ++k) {
    const double g = row(k).real();
    const double b = row(k).imag();
    a.pl(k) = g;
    a.pl(n + k) = -b;
    a.ql(k) = b;
    a.ql(n + k) = g;
  }
  a.al = Vec::Zero(2 * n);
  a.bl = Vec::Zero(2 * n);
  a.al(j) = 1.0;
  a.bl(n + j) = 1.0;
  return a;
}

}  // namespace

QuadraticForm load_flow_re(const GridModel& model, int j) {
  const auto a = load_flow_affine(model, j);
  // Re F_j = Re(v_j) p + Im(v_j) q
  return add_forms(affine_product(0.0, a.al, a.pc, a.pl),
                   affine_product(0.0, a.bl, a.qc, a.ql));
}

QuadraticForm load_flow_im(const GridModel& model, int j) {
  const auto a = load_flow_affine(model, j);
  // Im F_j = Im(v_j) p - Re(v_j) q
  return add_forms(affine_product(0.0, a.bl, a.pc, a.pl),
                   negate(affine_product(0.0, a.al, a.qc, a.ql)));
}

PolynomialProgram formulate_P0(const GridModel& model,
                               const ConstraintSet& constraint_set, int ell,
                               const UncertaintySet& uncertainty) {
  const int n = model.n_pq();
  const int M = 2 * n;
  if (ell < 0 || ell >= constraint_set.size())
    throw InvalidInput("formulate_P0: constraint index out of range");
  if (uncertainty.n_buses() != n)
    throw UnsupportedUncertainty("uncertainty set bus count mismatch");

  PolynomialProgram prog{SparsePolynomial(M)};
  for (int j = 0; j < M; ++j) {
    Monomial m(M, 0);
    m[j] = 1;
    prog.objective.add_term(m, 1.0);
  }

  for (int l = 0; l < constraint_set.size(); ++l) {
    auto poly = SparsePolynomial::from_quadratic(constraint_set.items[l].form);
    if (l == ell)
      prog.equalities.push_back(std::move(poly));
    else
      prog.inequalities.push_back(std::move(poly));
  }

  for (int j = 0; j < n; ++j) {
    const auto fre = SparsePolynomial::from_quadratic(load_flow_re(model, j));
    const auto fim = SparsePolynomial::from_quadratic(load_flow_im(model, j));
    const auto& region = uncertainty.regions[j];
    if (region.is_singleton()) {
      prog.equalities.push_back(
          fre - SparsePolynomial::constant(M, region.point().real()));
      prog.equalities.push_back(
          fim - SparsePolynomial::constant(M, region.point().imag()));
    } else {
      if (region.half_planes().empty())
        throw UnsupportedUncertainty("polygon region without half-planes");
      for (const auto& h : region.half_planes())
        prog.inequalities.push_back(SparsePolynomial::constant(M, h.gamma) -
                                    fre * h.alpha - fim * h.beta);
    }
  }
  return prog;
}

CliqueDecomposition correlative_sparsity(const PolynomialProgram& program) {
  const int M = program.n_vars();
  // Objective contributes per-monomial edges (a separable objective adds
  // none); constraints couple their whole support.
  std::vector<std::vector<int>> edge_supports;
  for (const auto& [m, c] : program.objective.terms()) {
    std::vector<int> sup;
    for (int i = 0; i < M; ++i)
      if (m[i] > 0) sup.push_back(i);
    edge_supports.push_back(std::move(sup));
  }
  std::vector<std::vector<int>> constraint_supports;
  for (const auto& f : program.inequalities)
    constraint_supports.push_back(f.support());
  for (const auto& f : program.equalities)
    constraint_supports.push_back(f.support());
  for (const auto& s : constraint_supports) edge_supports.push_back(s);

  auto adj = correlative_sparsity_graph(M, edge_supports);
  CliqueDecomposition out;
  out.cliques = chordal_cliques(adj, &out.elimination_order);
  out.assignment.resize(constraint_supports.size(), -1);
  for (size_t k = 0; k < constraint_supports.size(); ++k) {
    for (size_t c = 0; c < out.cliques.size(); ++c)
      if (std::includes(out.cliques[c].begin(), out.cliques[c].end(),
                        constraint_supports[k].begin(),
                        constraint_supports[k].end())) {
        out.assignment[k] = static_cast<int>(c);
        break;
      }
    if (out.assignment[k] < 0)
      throw InvalidInput("correlative sparsity: uncovered constraint support");
  }
  return out;
}

namespace {

int half_degree_up(const SparsePolynomial& f) {
  return (f.degree() + 1) / 2;
}

struct MonomialIndex {
  std::map<Monomial, int, GradedLexLess> pos;
  std::vector<Monomial> list;

  int at(const Monomial& m) const {
    auto it = pos.find(m);
    if (it == pos.end())
      throw InvalidInput("moment SDP: monomial outside the clique bases");
    return it->second;
  }
};

// One localizing (or moment, with f == 1) block for polynomial f over the
// monomial basis `umons`; appended to the builder as G rows with h = 0.
void append_block(ConicProblemBuilder& builder, const MonomialIndex& index,
                  const SparsePolynomial& f,
                  const std::vector<Monomial>& umons) {
  const int side = static_cast<int>(umons.size());
  const double rt2 = std::sqrt(2.0);
  if (side == 1) {
    Vec row = Vec::Zero(index.list.size());
    for (const auto& [alpha, coeff] : f.terms())
      row(index.at(monomial_mul(alpha, monomial_mul(umons[0], umons[0])))) -=
          coeff;
    Mat G(1, index.list.size());
    G.row(0) = row.transpose();
    builder.add_cone_rows(ConeBlock{ConeType::NonNegative, 1}, G, Vec::Zero(1));
    return;
  }
  Mat G = Mat::Zero(svec_len(side), static_cast<Eigen::Index>(index.list.size()));
  int r = 0;
  for (int j = 0; j < side; ++j) {
    for (int i = j; i < side; ++i) {
      const double scale = (i == j) ? 1.0 : rt2;
      const Monomial uv = monomial_mul(umons[i], umons[j]);
      for (const auto& [alpha, coeff] : f.terms())
        G(r, index.at(monomial_mul(alpha, uv))) -= scale * coeff;
      ++r;
    }
  }
  builder.add_cone_rows(ConeBlock{ConeType::PsdMatrix, side}, G,
                        Vec::Zero(G.rows()));
}

}  // namespace

MomentSDP build_moment_sdp(const PolynomialProgram& program,
                           const CliqueDecomposition& cliques, int omega) {
  const int M = program.n_vars();
  int omega_min = half_degree_up(program.objective);
  for (const auto& f : program.inequalities)
    omega_min = std::max(omega_min, half_degree_up(f));
  for (const auto& f : program.equalities)
    omega_min = std::max(omega_min, half_degree_up(f));
  if (omega < omega_min)
    throw OrderTooLow("relaxation order " + std::to_string(omega) +
                      " below minimum " + std::to_string(omega_min));

  MonomialIndex index;
  for (const auto& clique : cliques.cliques)
    for (auto& m : monomial_basis(M, clique, 2 * omega))
      index.pos.emplace(std::move(m), 0);
  {
    int i = 0;
    for (auto& [m, p] : index.pos) {
      p = i++;
      index.list.push_back(m);
    }
  }
  const int d = static_cast<int>(index.list.size());

  ConicProblemBuilder builder(d);
  Vec c = Vec::Zero(d);
  for (const auto& [m, coeff] : program.objective.terms())
    c(index.at(m)) += coeff;
  builder.set_objective(c);

  // y_0 = 1
  {
    Vec row = Vec::Zero(d);
    row(index.at(Monomial(M, 0))) = 1.0;
    builder.add_equality(row, 1.0);
  }

  const SparsePolynomial one = SparsePolynomial::constant(M, 1.0);
  for (const auto& clique : cliques.cliques)
    append_block(builder, index, one, monomial_basis(M, clique, omega));

  int k = 0;
  const auto localize = [&](const SparsePolynomial& f, bool equality) {
    const auto& clique = cliques.cliques[cliques.assignment[k]];
    const auto umons =
        monomial_basis(M, clique, omega - half_degree_up(f));
    append_block(builder, index, f, umons);
    if (equality) append_block(builder, index, f * -1.0, umons);
    ++k;
  };
  for (const auto& f : program.inequalities) localize(f, false);
  for (const auto& f : program.equalities) localize(f, true);

  MomentSDP sdp;
  sdp.problem = builder.finish();
  sdp.index = index.list;
  sdp.omega = omega;
  return sdp;
}

Vec lift_point(const MomentSDP& sdp, const Vec& x) {
  Vec y(static_cast<Eigen::Index>(sdp.index.size()));
  for (size_t i = 0; i < sdp.index.size(); ++i) {
    double t = 1.0;
    const auto& m = sdp.index[i];
    for (size_t j = 0; j < m.size(); ++j)
      for (int e = 0; e < m[j]; ++e) t *= x(static_cast<Eigen::Index>(j));
    y(static_cast<Eigen::Index>(i)) = t;
  }
  return y;
}

std::vector<P0Result> check_P0_infeasible(const GridModel& model,
                                          const ConstraintSet& constraint_set,
                                          const UncertaintySet& uncertainty,
                                          int omega) {
  std::vector<P0Result> results;
  for (int ell = 0; ell < constraint_set.size(); ++ell) {
    P0Result res;
    try {
      const auto prog = formulate_P0(model, constraint_set, ell, uncertainty);
      const auto cliq = correlative_sparsity(prog);
      const auto sdp = build_moment_sdp(prog, cliq, omega);
      const auto out = solve(sdp.problem);
      res.iterations = out.iterations;
      if (out.status == SolveStatus::Infeasible) {
        res.status = P0Status::Infeasible;
        res.certificate_norm = out.certificate.z.cwiseAbs().maxCoeff();
      } else {
        res.reason = out.status == SolveStatus::Feasible
                         ? "relaxation feasible"
                         : "backend unknown: " + out.reason;
      }
    } catch (const OrderTooLow& e) {
      res.reason = std::string("OrderTooLow: ") + e.what();
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace gridcert
