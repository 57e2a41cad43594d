#include "gridcert/constraints.hpp"

#include <sstream>

namespace gridcert {

Vec voltage_to_x(const CVec& v) {
  Vec x(2 * v.size());
  x.head(v.size()) = v.real();
  x.tail(v.size()) = v.imag();
  return x;
}

CVec x_to_voltage(const Vec& x) {
  const Eigen::Index n = x.size() / 2;
  CVec v(n);
  v.real() = x.head(n);
  v.imag() = x.tail(n);
  return v;
}

double QuadraticForm::eval_at(const CVec& v) const {
  return eval(voltage_to_x(v));
}

QuadraticForm bound_minus_abs2(Complex u0, const CVec& coeffs, double bound) {
  const int n = static_cast<int>(coeffs.size());
  Vec ar = Vec::Zero(2 * n);
  Vec ai = Vec::Zero(2 * n);
  for (int k = 0; k < n; ++k) {
    ar(k) = coeffs(k).real();
    ar(n + k) = -coeffs(k).imag();
    ai(k) = coeffs(k).imag();
    ai(n + k) = coeffs(k).real();
  }
  const double pr = u0.real();
  const double pi = u0.imag();

  QuadraticForm f;
  f.constant = bound * bound - pr * pr - pi * pi;
  f.linear = -2.0 * (pr * ar + pi * ai);
  f.quadratic = -(ar * ar.transpose() + ai * ai.transpose());
  return f;
}

std::string to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::VLow: return "VLow";
    case ConstraintKind::VUp: return "VUp";
    case ConstraintKind::IBranchSec: return "IBranchSec";
    case ConstraintKind::IBranchAux: return "IBranchAux";
    case ConstraintKind::INodeAux: return "INodeAux";
  }
  return "?";
}

SecuritySpec SecuritySpec::uniform(const GridModel& model, double v_min,
                                   double v_max, double i_max) {
  SecuritySpec s;
  s.v_min = Vec::Constant(model.n_pq(), v_min);
  s.v_max = Vec::Constant(model.n_pq(), v_max);
  s.i_max = Vec::Constant(static_cast<Eigen::Index>(model.branch_rows().size()),
                          i_max);
  return s;
}

void SecuritySpec::validate(const GridModel& model) const {
  if (v_min.size() != model.n_pq() || v_max.size() != model.n_pq())
    throw InvalidInput("security spec: per-bus bound size mismatch");
  if (i_max.size() != static_cast<Eigen::Index>(model.branch_rows().size()))
    throw InvalidInput("security spec: per-branch bound size mismatch");
  for (int j = 0; j < v_min.size(); ++j)
    if (!(0.0 < v_min(j) && v_min(j) < v_max(j)))
      throw InvalidInput("security spec: need 0 < v_min < v_max");
  for (int e = 0; e < i_max.size(); ++e)
    if (!(i_max(e) > 0.0))
      throw InvalidInput("security spec: i_max must be positive");
}

AuxBounds AuxBounds::make(const GridModel& model, const SecuritySpec& security,
                          double beta, const Vec& i_node_ref, double lambda) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw InvalidInput("beta must be in (0, 1]");
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  if (i_node_ref.size() != model.n_pq())
    throw InvalidInput("i_node_ref size mismatch");
  if ((i_node_ref.array() <= 0.0).any())
    throw InvalidInput("i_node_ref must be positive");
  AuxBounds aux;
  aux.beta = beta;
  aux.i_branch = beta * security.i_max;
  aux.i_node_ref = i_node_ref;
  aux.lambda = lambda;
  aux.i_node = lambda * i_node_ref;
  return aux;
}

ConstraintSet security_forms(const GridModel& model, const SecuritySpec& spec) {
  spec.validate(model);
  const int n = model.n_pq();
  ConstraintSet cs;

  for (int j = 0; j < n; ++j) {
    // |v_j|^2 - vmin^2 >= 0, written as -(vmin^2 - |v_j|^2).
    CVec e = CVec::Zero(n);
    e(j) = Complex{1.0, 0.0};
    QuadraticForm low = bound_minus_abs2(Complex{0, 0}, e, spec.v_min(j));
    low.constant = -low.constant;
    low.linear = -low.linear;
    low.quadratic = -low.quadratic;
    Constraint c{ConstraintKind::VLow, j + 1, -1, -1, std::move(low)};
    cs.items.push_back(std::move(c));
  }
  for (int j = 0; j < n; ++j) {
    CVec e = CVec::Zero(n);
    e(j) = Complex{1.0, 0.0};
    Constraint c{ConstraintKind::VUp, j + 1, -1, -1,
                 bound_minus_abs2(Complex{0, 0}, e, spec.v_max(j))};
    cs.items.push_back(std::move(c));
  }
  int e_idx = 0;
  for (const auto& row : model.branch_rows()) {
    Constraint c{ConstraintKind::IBranchSec, -1, row.from, row.to,
                 bound_minus_abs2(row.a * model.slack_voltage(), row.c,
                                  spec.i_max(e_idx))};
    cs.items.push_back(std::move(c));
    ++e_idx;
  }
  return cs;
}

ConstraintSet aux_forms(const GridModel& model, const AuxBounds& aux) {
  const int n = model.n_pq();
  ConstraintSet cs;
  int e_idx = 0;
  for (const auto& row : model.branch_rows()) {
    Constraint c{ConstraintKind::IBranchAux, -1, row.from, row.to,
                 bound_minus_abs2(row.a * model.slack_voltage(), row.c,
                                  aux.i_branch(e_idx))};
    cs.items.push_back(std::move(c));
    ++e_idx;
  }
  for (int j = 0; j < n; ++j) {
    // Row_j(Y_LL)(v - w): affine with u0 = -Row_j(Y_LL) w.
    const CVec row = model.Y_LL().row(j).transpose();
    const Complex u0 = -row.cwiseProduct(model.w()).sum();
    Constraint c{ConstraintKind::INodeAux, j + 1, -1, -1,
                 bound_minus_abs2(u0, row, aux.i_node(j))};
    cs.items.push_back(std::move(c));
  }
  return cs;
}

ConstraintEvaluation eval_constraints(const ConstraintSet& cs, const CVec& v) {
  ConstraintEvaluation out;
  out.margins = Vec(cs.size());
  const Vec x = voltage_to_x(v);
  for (int l = 0; l < cs.size(); ++l) {
    out.margins(l) = cs.items[l].form.eval(x);
    out.min_margin = std::min(out.min_margin, out.margins(l));
  }
  return out;
}

}  // namespace gridcert
