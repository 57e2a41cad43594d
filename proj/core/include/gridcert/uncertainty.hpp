#pragma once

#include <string>
#include <vector>

#include "gridcert/types.hpp"

namespace gridcert {

/// alpha*Re(s) + beta*Im(s) <= gamma.
struct HalfPlane {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Per-bus injection region: a single point or a convex polygon given by
/// half-planes.
class PowerRegion {
public:
  static PowerRegion singleton(Complex s);
  static PowerRegion polygon(std::vector<HalfPlane> hs);

  bool is_singleton() const { return singleton_; }
  Complex point() const { return point_; }
  const std::vector<HalfPlane>& half_planes() const { return half_planes_; }

  bool contains(Complex s, double tol = 1e-9) const;

private:
  bool singleton_ = true;
  Complex point_{0.0, 0.0};
  std::vector<HalfPlane> half_planes_;
};

/// Cartesian product of per-PQ-bus regions; connected by construction.
struct UncertaintySet {
  std::vector<PowerRegion> regions;

  int n_buses() const { return static_cast<int>(regions.size()); }
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> reasons;
};

/// Checks region invariants: half-planes well-formed, polygons nonempty and
/// bounded (linear-programming probes along the four axis directions).
ValidationReport validate(const UncertaintySet& set);

/// Componentwise membership to tolerance.
bool contains(const UncertaintySet& set, const CVec& s, double tol = 1e-9);

/// Deterministic sampler; polygon vertices are always included first.
std::vector<CVec> sample(const UncertaintySet& set, int n, unsigned seed);

/// Vertices of a polygon region (pairwise boundary-line intersections that
/// satisfy all half-planes).
std::vector<Complex> polygon_vertices(const PowerRegion& region,
                                      double tol = 1e-9);

/// Half-plane family scaled by a parameter kappa >= 0:
///   alpha*Re + beta*Im <= gamma0 + gamma_k * kappa.
struct TemplateHalfPlane {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma0 = 0.0;
  double gamma_k = 0.0;
};

/// Per-bus kappa-scaled region family; regions grow with kappa when all
/// gamma_k are nonnegative (checked on instantiation).
struct KappaTemplate {
  std::vector<std::vector<TemplateHalfPlane>> per_bus;

  UncertaintySet instantiate(double kappa) const;
};

}  // namespace gridcert
