#pragma once

#include <map>
#include <vector>

#include "gridcert/constraints.hpp"

namespace gridcert {

/// Monomial as a dense exponent vector over a fixed variable set.
using Monomial = std::vector<int>;

int monomial_degree(const Monomial& m);
Monomial monomial_mul(const Monomial& a, const Monomial& b);

/// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Polynomial with real coefficients over n_vars variables.
class SparsePolynomial {
public:
  explicit SparsePolynomial(int n_vars) : n_vars_(n_vars) {}

  static SparsePolynomial constant(int n_vars, double value);
  static SparsePolynomial variable(int n_vars, int index);
  static SparsePolynomial from_quadratic(const QuadraticForm& f);

  int n_vars() const { return n_vars_; }
  int degree() const;
  bool empty() const { return terms_.empty(); }
  const std::map<Monomial, double, GradedLexLess>& terms() const {
    return terms_;
  }

  void add_term(const Monomial& m, double coeff);
  double evaluate(const Vec& x) const;
  /// Indices of variables appearing with nonzero exponent in some term.
  std::vector<int> support() const;

  SparsePolynomial operator+(const SparsePolynomial& o) const;
  SparsePolynomial operator-(const SparsePolynomial& o) const;
  SparsePolynomial operator*(const SparsePolynomial& o) const;
  SparsePolynomial operator*(double a) const;

private:
  int n_vars_;
  std::map<Monomial, double, GradedLexLess> terms_;
};

/// All monomials in the given variables up to total degree max_deg, in graded
/// lex order. `vars` are global variable indices; monomials are over the full
/// n_vars space but supported only on `vars`.
std::vector<Monomial> monomial_basis(int n_vars, const std::vector<int>& vars,
                                     int max_deg);

}  // namespace gridcert
