#include "gridcert/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gridcert/conic.hpp"

namespace gridcert {

PowerRegion PowerRegion::singleton(Complex s) {
  PowerRegion r;
  r.singleton_ = true;
  r.point_ = s;
  return r;
}

PowerRegion PowerRegion::polygon(std::vector<HalfPlane> hs) {
  PowerRegion r;
  r.singleton_ = false;
  r.half_planes_ = std::move(hs);
  return r;
}

bool PowerRegion::contains(Complex s, double tol) const {
  if (singleton_)
    return std::abs(s.real() - point_.real()) <= tol &&
           std::abs(s.imag() - point_.imag()) <= tol;
  for (const auto& h : half_planes_)
    if (h.alpha * s.real() + h.beta * s.imag() > h.gamma + tol) return false;
  return true;
}

namespace {

enum class ProbeResult { Optimal, Empty, Unbounded, Inconclusive };

// max (dr*Re + di*Im) over the polygon, via the conic backend.
ProbeResult lp_probe(const std::vector<HalfPlane>& hs, double dr, double di) {
  ConicProblemBuilder b(2);
  Vec c(2);
  c << -dr, -di;
  b.set_objective(c);
  for (const auto& h : hs) {
    Vec row(2);
    row << h.alpha, h.beta;
    b.add_leq(row, h.gamma);
  }
  const auto out = solve(b.finish());
  if (out.status == SolveStatus::Feasible) return ProbeResult::Optimal;
  if (out.status == SolveStatus::Infeasible) return ProbeResult::Empty;
  if (out.reason.find("unbounded") != std::string::npos)
    return ProbeResult::Unbounded;
  return ProbeResult::Inconclusive;
}

}  // namespace

ValidationReport validate(const UncertaintySet& set) {
  ValidationReport rep;
  const auto fail = [&](std::string why) {
    rep.ok = false;
    rep.reasons.push_back(std::move(why));
  };
  if (set.regions.empty()) fail("no regions");
  for (int j = 0; j < set.n_buses(); ++j) {
    const auto& r = set.regions[j];
    const std::string bus = "bus " + std::to_string(j + 1) + ": ";
    if (r.is_singleton()) {
      if (!is_finite(r.point())) fail(bus + "non-finite point");
      continue;
    }
    if (r.half_planes().empty()) {
      fail(bus + "UnboundedRegion (no half-planes)");
      continue;
    }
    bool well_formed = true;
    for (const auto& h : r.half_planes()) {
      if (!std::isfinite(h.alpha) || !std::isfinite(h.beta) ||
          !std::isfinite(h.gamma) || (h.alpha == 0.0 && h.beta == 0.0)) {
        fail(bus + "degenerate half-plane");
        well_formed = false;
        break;
      }
    }
    if (!well_formed) continue;
    static const double dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : dirs) {
      switch (lp_probe(r.half_planes(), d[0], d[1])) {
        case ProbeResult::Optimal: break;
        case ProbeResult::Empty: fail(bus + "EmptyRegion"); break;
        case ProbeResult::Unbounded: fail(bus + "UnboundedRegion"); break;
        case ProbeResult::Inconclusive:
          fail(bus + "region probe inconclusive");
          break;
      }
      if (!rep.ok) break;
    }
  }
  return rep;
}

bool contains(const UncertaintySet& set, const CVec& s, double tol) {
  if (s.size() != set.n_buses()) return false;
  for (int j = 0; j < set.n_buses(); ++j)
    if (!set.regions[j].contains(s(j), tol)) return false;
  return true;
}

std::vector<Complex> polygon_vertices(const PowerRegion& region, double tol) {
  if (region.is_singleton()) return {region.point()};
  const auto& hs = region.half_planes();
  std::vector<Complex> verts;
  for (size_t a = 0; a < hs.size(); ++a)
    for (size_t b = a + 1; b < hs.size(); ++b) {
      const double det = hs[a].alpha * hs[b].beta - hs[b].alpha * hs[a].beta;
      if (std::abs(det) < 1e-12) continue;
      const double re =
          (hs[a].gamma * hs[b].beta - hs[b].gamma * hs[a].beta) / det;
      const double im =
          (hs[a].alpha * hs[b].gamma - hs[b].alpha * hs[a].gamma) / det;
      const Complex p{re, im};
      if (!region.contains(p, 1e-7)) continue;
      bool dup = false;
      for (const auto& q : verts)
        if (std::abs(q - p) < 1e-9) dup = true;
      if (!dup) verts.push_back(p);
    }
  (void)tol;
  return verts;
}

std::vector<CVec> sample(const UncertaintySet& set, int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int nb = set.n_buses();

  std::vector<std::vector<Complex>> verts(nb);
  for (int j = 0; j < nb; ++j) verts[j] = polygon_vertices(set.regions[j]);
  size_t max_verts = 1;
  for (int j = 0; j < nb; ++j) max_verts = std::max(max_verts, verts[j].size());

  std::vector<CVec> out;
  for (int i = 0; i < n; ++i) {
    CVec s(nb);
    for (int j = 0; j < nb; ++j) {
      const auto& vs = verts[j];
      if (set.regions[j].is_singleton() || vs.empty()) {
        s(j) = set.regions[j].point();
        continue;
      }
      if (i < static_cast<int>(max_verts)) {
        // vertex sweep first so every polygon corner is covered
        s(j) = vs[i % vs.size()];
        continue;
      }
      // random convex combination of vertices
      Vec wts(vs.size());
      double tot = 0.0;
      for (size_t k = 0; k < vs.size(); ++k) {
        wts(k) = -std::log(std::max(uni(rng), 1e-300));
        tot += wts(k);
      }
      Complex p{0.0, 0.0};
      for (size_t k = 0; k < vs.size(); ++k)
        p += (wts(k) / tot) * vs[k];
      s(j) = p;
    }
    out.push_back(s);
  }
  return out;
}

UncertaintySet KappaTemplate::instantiate(double kappa) const {
  if (!(kappa >= 0.0)) throw InvalidInput("kappa must be nonnegative");
  UncertaintySet set;
  for (const auto& bus : per_bus) {
    std::vector<HalfPlane> hs;
    for (const auto& t : bus) {
      if (t.gamma_k < 0.0)
        throw InvalidInput("kappa template must grow with kappa");
      hs.push_back(HalfPlane{t.alpha, t.beta, t.gamma0 + t.gamma_k * kappa});
    }
    set.regions.push_back(PowerRegion::polygon(std::move(hs)));
  }
  return set;
}

}  // namespace gridcert
