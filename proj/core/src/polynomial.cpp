#include "gridcert/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gridcert {

int monomial_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), 0);
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  const int da = monomial_degree(a);
  const int db = monomial_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

SparsePolynomial SparsePolynomial::constant(int n_vars, double value) {
  SparsePolynomial p(n_vars);
  p.add_term(Monomial(n_vars, 0), value);
  return p;
}

SparsePolynomial SparsePolynomial::variable(int n_vars, int index) {
  SparsePolynomial p(n_vars);
  Monomial m(n_vars, 0);
  m[index] = 1;
  p.add_term(m, 1.0);
  return p;
}

SparsePolynomial SparsePolynomial::from_quadratic(const QuadraticForm& f) {
  const int n = f.dim();
  SparsePolynomial p(n);
  p.add_term(Monomial(n, 0), f.constant);
  for (int i = 0; i < n; ++i) {
    if (f.linear(i) != 0.0) {
      Monomial m(n, 0);
      m[i] = 1;
      p.add_term(m, f.linear(i));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double q = f.quadratic(i, j);
      if (q != 0.0) {
        Monomial m(n, 0);
        m[i] += 1;
        m[j] += 1;
        p.add_term(m, q);
      }
    }
  return p;
}

int SparsePolynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
  return d;
}

void SparsePolynomial::add_term(const Monomial& m, double coeff) {
  if (coeff == 0.0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, coeff);
  } else {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double SparsePolynomial::evaluate(const Vec& x) const {
  double out = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < n_vars_; ++i)
      for (int e = 0; e < m[i]; ++e) t *= x(i);
    out += t;
  }
  return out;
}

std::vector<int> SparsePolynomial::support() const {
  std::vector<bool> used(n_vars_, false);
  for (const auto& [m, c] : terms_)
    for (int i = 0; i < n_vars_; ++i)
      if (m[i] > 0) used[i] = true;
  std::vector<int> out;
  for (int i = 0; i < n_vars_; ++i)
    if (used[i]) out.push_back(i);
  return out;
}

SparsePolynomial SparsePolynomial::operator+(const SparsePolynomial& o) const {
  SparsePolynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

SparsePolynomial SparsePolynomial::operator-(const SparsePolynomial& o) const {
  SparsePolynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

SparsePolynomial SparsePolynomial::operator*(const SparsePolynomial& o) const {
  SparsePolynomial out(n_vars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_)
      out.add_term(monomial_mul(ma, mb), ca * cb);
  return out;
}

SparsePolynomial SparsePolynomial::operator*(double a) const {
  SparsePolynomial out(n_vars_);
  for (const auto& [m, c] : terms_) out.add_term(m, c * a);
  return out;
}

std::vector<Monomial> monomial_basis(int n_vars, const std::vector<int>& vars,
                                     int max_deg) {
  std::vector<Monomial> out;
  Monomial cur(n_vars, 0);
  // enumerate exponent tuples over `vars` with total degree <= max_deg
  const auto rec = [&](auto&& self, size_t pos, int remaining) -> void {
    if (pos == vars.size()) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      cur[vars[pos]] = e;
      self(self, pos + 1, remaining - e);
    }
    cur[vars[pos]] = 0;
  };
  rec(rec, 0, max_deg);
  std::sort(out.begin(), out.end(), GradedLexLess{});
  return out;
}

}  // namespace gridcert
