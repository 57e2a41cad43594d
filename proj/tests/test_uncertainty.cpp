#include "doctest.h"
#include "gridcert/uncertainty.hpp"

using namespace gridcert;

namespace {

PowerRegion box_region(double re_lo, double re_hi, double im_lo,
                       double im_hi) {
  return PowerRegion::polygon({HalfPlane{-1, 0, -re_lo}, HalfPlane{1, 0, re_hi},
                               HalfPlane{0, -1, -im_lo},
                               HalfPlane{0, 1, im_hi}});
}

}  // namespace

TEST_CASE("singleton sets validate and contain only their point") {
  UncertaintySet set;
  set.regions.push_back(PowerRegion::singleton(Complex{-0.1, 0.05}));
  CHECK(validate(set).ok);
  CVec s(1);
  s(0) = Complex{-0.1, 0.05};
  CHECK(contains(set, s));
  s(0) += Complex{1e-3, 0.0};
  CHECK_FALSE(contains(set, s));
}

TEST_CASE("triangle region validates") {
  UncertaintySet set;
  const double kappa = 0.2;
  set.regions.push_back(PowerRegion::polygon({HalfPlane{-1, 0, kappa},
                                              HalfPlane{0, -1, kappa},
                                              HalfPlane{1, 1, 0.0}}));
  CHECK(validate(set).ok);
  CVec s(1);
  s(0) = Complex{-0.1, -0.05};
  CHECK(contains(set, s));
}

TEST_CASE("empty and unbounded regions are reported") {
  UncertaintySet empty;
  empty.regions.push_back(
      PowerRegion::polygon({HalfPlane{1, 0, -1.0}, HalfPlane{-1, 0, -1.0}}));
  const auto r1 = validate(empty);
  CHECK_FALSE(r1.ok);
  CHECK(r1.reasons.front().find("Empty") != std::string::npos);

  UncertaintySet unbounded;
  unbounded.regions.push_back(PowerRegion::polygon({HalfPlane{1, 0, 0.0}}));
  const auto r2 = validate(unbounded);
  CHECK_FALSE(r2.ok);
  CHECK(r2.reasons.front().find("Unbounded") != std::string::npos);

  UncertaintySet degenerate;
  degenerate.regions.push_back(PowerRegion::polygon({HalfPlane{0, 0, 1.0}}));
  CHECK_FALSE(validate(degenerate).ok);
}

TEST_CASE("closed boundary points belong to the region") {
  UncertaintySet set;
  set.regions.push_back(box_region(-0.3, 0.0, -0.1, 0.1));
  CVec s(1);
  s(0) = Complex{-0.3, 0.1};  // corner
  CHECK(contains(set, s));
  s(0) = Complex{-0.3 - 1e-6, 0.1};
  CHECK_FALSE(contains(set, s));
}

TEST_CASE("sampling is deterministic and covers vertices") {
  UncertaintySet set;
  set.regions.push_back(box_region(-0.2, 0.0, -0.1, 0.0));
  const auto a = sample(set, 40, 9);
  const auto b = sample(set, 40, 9);
  REQUIRE(a.size() == 40);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i] - b[i]).norm() == 0.0);
    CHECK(contains(set, a[i], 1e-7));
  }
  for (const Complex corner : {Complex{-0.2, -0.1}, Complex{-0.2, 0.0},
                               Complex{0.0, -0.1}, Complex{0.0, 0.0}}) {
    bool seen = false;
    for (const auto& s : a) seen = seen || std::abs(s(0) - corner) < 1e-12;
    CHECK(seen);
  }
}

TEST_CASE("kappa template instantiation") {
  KappaTemplate tmpl;
  tmpl.per_bus.push_back({TemplateHalfPlane{-1, 0, 0, 1},
                          TemplateHalfPlane{1, 0, 0, 0},
                          TemplateHalfPlane{0, 1, 0, 0},
                          TemplateHalfPlane{0, -1, 0, 0}});
  const auto set = tmpl.instantiate(0.25);  // [-0.25, 0] x {0}
  CVec s(1);
  s(0) = Complex{-0.2, 0.0};
  CHECK(contains(set, s));
  s(0) = Complex{-0.3, 0.0};
  CHECK_FALSE(contains(set, s));

  KappaTemplate shrinking;
  shrinking.per_bus.push_back({TemplateHalfPlane{1, 0, 1, -1}});
  CHECK_THROWS_AS(shrinking.instantiate(0.5), InvalidInput);
  CHECK_THROWS_AS(tmpl.instantiate(-0.1), InvalidInput);
}
