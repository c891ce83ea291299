#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chartcalc/ops.hpp"
#include "core/sampling.hpp"
#include "stabilize/stabilize.hpp"
#include "verify/residuals.hpp"

using namespace stabilize;
using chartcalc::OneForm;
using chartcalc::TwoForm;
using core::Expr;
using core::PiecewisePoly;
using core::Vec3;

namespace {

const RegionBox kBox{0, 1};

double max_form_diff(const OneForm& a, const OneForm& b, const RegionBox& box, int n) {
  core::HaltonSampler s;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3 u = s.next({box.a, 0, 0}, {box.b, 1, 1});
    worst = std::max(worst, core::norm(a.value(Point{0, u}) - b.value(Point{0, u})));
  }
  return worst;
}

double max_d_residual(const OneForm& a, const RegionBox& box, int n) {
  const TwoForm d = chartcalc::exterior_derivative(a);
  core::HaltonSampler s;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3 u = s.next({box.a, 0, 0}, {box.b, 1, 1});
    worst = std::max(worst, core::norm(d.proxy(Point{0, u})));
  }
  return worst;
}

// 0 near r=0, 1 near r=1, genuinely flat plateaus at both ends
PiecewisePoly plateau_cutoff() {
  return PiecewisePoly::constant(0, 0.15, 0.0)
      .concat(PiecewisePoly::smoothstep(0.15, 0.85, 0.0, 1.0))
      .concat(PiecewisePoly::constant(0.85, 1, 1.0));
}

}  // namespace

TEST_CASE("find_primitive") {
  SUBCASE("recovers the potential of an exact form") {
    const chartcalc::ScalarField f(
        sin(2 * M_PI * (Expr::var(1) + Expr::var(2))) * 0.7 + 0.3 * Expr::var(0));
    const OneForm df = chartcalc::exterior_derivative(f);
    const chartcalc::ScalarField g = find_primitive(df, kBox);
    const OneForm dg = chartcalc::exterior_derivative(g);
    CHECK(max_form_diff(dg, df, kBox, 200) < 1e-9);
    // g matches f up to the constant fixed by the base point
    const double shift = g.value(Point{0, {0.4, 0.2, 0.7}}) - f.value(Point{0, {0.4, 0.2, 0.7}});
    CHECK(g.value(Point{0, {0.8, 0.6, 0.1}}) - f.value(Point{0, {0.8, 0.6, 0.1}}) ==
          doctest::Approx(shift).epsilon(1e-7));
  }
  SUBCASE("nonzero period is a cohomology obstruction") {
    const OneForm dtheta({Expr::constant(0), Expr::constant(1), Expr::constant(0)});
    try {
      find_primitive(dtheta, kBox);
      FAIL("expected CohomologyObstruction");
    } catch (const CohomologyObstruction& e) {
      CHECK(e.period_theta == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(std::abs(e.period_z) < 1e-10);
    }
  }
  SUBCASE("zero form gives the zero potential") {
    const OneForm zero({Expr::constant(0), Expr::constant(0), Expr::constant(0)});
    const chartcalc::ScalarField g = find_primitive(zero, kBox);
    core::HaltonSampler s;
    for (int i = 0; i < 20; ++i) {
      const Vec3 u = s.next({0, 0, 0}, {1, 1, 1});
      CHECK(std::abs(g.value(Point{0, u})) < 1e-12);
    }
  }
  SUBCASE("non-closed input is rejected") {
    const OneForm bad({Expr::constant(0), Expr::var(2), Expr::constant(0)});
    CHECK_THROWS_AS(find_primitive(bad, kBox), std::invalid_argument);
  }
}

TEST_CASE("interpolate_closed") {
  const auto phi = plateau_cutoff();
  const OneForm nu0({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
  const chartcalc::ScalarField bump(0.3 * sin(2 * M_PI * Expr::var(1)));
  const OneForm dbump = chartcalc::exterior_derivative(bump);
  const OneForm nu1({dbump.coeffs(0)[0], dbump.coeffs(0)[1],
                     Expr::constant(1) + dbump.coeffs(0)[2]});

  SUBCASE("equal inputs pass through") {
    const OneForm out = interpolate_closed(nu0, nu0, phi, kBox);
    CHECK(max_form_diff(out, nu0, kBox, 200) < 1e-12);
  }
  SUBCASE("interpolant is closed and matches both ends") {
    const OneForm out = interpolate_closed(nu0, nu1, phi, kBox);
    CHECK(max_d_residual(out, kBox, 1000) < 1e-10);
    const RegionBox left{0, 0.14}, right{0.86, 1};
    CHECK(max_form_diff(out, nu0, left, 200) < 1e-12);
    CHECK(max_form_diff(out, nu1, right, 200) < 1e-12);
  }
  SUBCASE("pairing with a torus-tangent field interpolates pointwise") {
    // X = rho(r) d/dz never sees the d(phi g) correction
    const Expr rho = 1.5 + 0.5 * sin(2 * M_PI * Expr::var(0));
    const chartcalc::VectorField X({Expr::constant(0), Expr::constant(0), rho});
    const OneForm out = interpolate_closed(nu0, nu1, phi, kBox);
    core::HaltonSampler s;
    for (int i = 0; i < 100; ++i) {
      const Vec3 u = s.next({0, 0, 0}, {1, 1, 1});
      const Point p{0, u};
      const double lhs = dot(out.value(p), X.value(p));
      const double w = phi(u[0]);
      const double rhs = (1 - w) * dot(nu0.value(p), X.value(p)) +
                         w * dot(nu1.value(p), X.value(p));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
      CHECK(lhs > 0);
    }
  }
  SUBCASE("cohomology class mismatch propagates") {
    const OneForm shifted({Expr::constant(0), Expr::constant(0.5), Expr::constant(1)});
    CHECK_THROWS_AS(interpolate_closed(nu0, shifted, phi, kBox), CohomologyObstruction);
  }
  SUBCASE("cutoff must run from 0 to 1") {
    const auto bad = PiecewisePoly::constant(0, 1, 0.5);
    CHECK_THROWS_AS(interpolate_closed(nu0, nu1, bad, kBox), std::invalid_argument);
  }
}

TEST_CASE("torus averaging") {
  SUBCASE("oscillating coefficient averages away") {
    const OneForm nu({Expr::constant(0), sin(2 * M_PI * Expr::var(1)), Expr::constant(1)});
    const OneForm bar = torus_average(nu, kBox);
    const OneForm dz({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
    CHECK(max_form_diff(bar, dz, kBox, 200) < 1e-10);
  }
  SUBCASE("invariant input is a fixed point") {
    const OneForm nu({Expr::var(0), Expr::constant(2), Expr::constant(3)});
    CHECK(max_form_diff(torus_average(nu, kBox), nu, kBox, 200) < 1e-13);
  }
  SUBCASE("averaging twice equals averaging once") {
    const OneForm nu({Expr::constant(0),
                      0.7 + sin(2 * M_PI * Expr::var(1)) * cos(2 * M_PI * Expr::var(2)),
                      Expr::constant(1) + 0.2 * cos(2 * M_PI * Expr::var(2))});
    const OneForm once = torus_average(nu, kBox);
    const OneForm twice = torus_average(once, kBox);
    CHECK(max_form_diff(once, twice, kBox, 200) < 1e-12);
  }
  SUBCASE("torus periods are preserved") {
    const OneForm nu({Expr::constant(0),
                      0.7 + sin(2 * M_PI * Expr::var(1)) * cos(2 * M_PI * Expr::var(2)),
                      Expr::constant(1) + 0.2 * cos(2 * M_PI * Expr::var(2))});
    const OneForm bar = torus_average(nu, kBox);
    auto period = [](const OneForm& a, int axis, const Vec3& base) {
      double acc = 0;
      const int n = 512;
      for (int i = 0; i < n; ++i) {
        Vec3 u = base;
        u[axis] = (i + 0.5) / n;
        acc += a.value(Point{0, u})[axis];
      }
      return acc / n;
    };
    for (int axis : {1, 2}) {
      const double p = period(nu, axis, {0.3, 0.25, 0.5});
      const double pb = period(bar, axis, {0.3, 0.1, 0.9});
      CHECK(p == doctest::Approx(pb).epsilon(1e-10));
    }
  }
}

TEST_CASE("normalized orbit forms") {
  const chartcalc::VectorField Xup(
      {Expr::var(1), Expr::var(0), Expr::constant(1) + 0.1 * Expr::var(0)});
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(Point{0, {0.05 * i, 0.03 * i, i / 10.0}});

  SUBCASE("simple orbit, unit period") {
    const OneForm nu = normalized_orbit_form(Xup, 1, pts);
    CHECK(nu.value(pts[0])[2] == doctest::Approx(1.0));
    CHECK(max_d_residual(nu, kBox, 100) < 1e-14);
    // circle integral over the z-fiber
    CHECK(nu.value(Point{0, {0, 0, 0.5}})[2] * 1.0 == doctest::Approx(1.0));
  }
  SUBCASE("doubly covered orbit integrates to 1/2, double cover to 1") {
    const OneForm nu = normalized_orbit_form(Xup, 2, pts);
    const double over_core = nu.value(pts[0])[2] * 1.0;      // one z-circle
    const double over_cover = nu.value(pts[0])[2] * 2.0;     // generic orbit, two loops
    CHECK(over_core == doctest::Approx(0.5));
    CHECK(over_cover == doctest::Approx(1.0));
  }
  SUBCASE("rescaled fiber coordinate keeps the period condition") {
    const OneForm nu = normalized_orbit_form(Xup, 1, pts, 2.0);
    CHECK(nu.value(pts[0])[2] * 2.0 == doctest::Approx(1.0));
  }
  SUBCASE("non-transverse field is rejected") {
    const chartcalc::VectorField flat({Expr::constant(1), Expr::constant(0),
                                       Expr::var(0) - 0.2});
    CHECK_THROWS_AS(normalized_orbit_form(flat, 1, pts), std::domain_error);
    CHECK_THROWS(normalized_orbit_form(Xup, 0, pts));
  }
}

TEST_CASE("observation O: fiber integrals over the region") {
  const chartcalc::VectorField Xz({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
  SUBCASE("closed form has constant fiber integral") {
    const OneForm nu({Expr::constant(3), Expr::constant(0.2), Expr::constant(1)});
    const auto o = verify_observation_O(nu, Xz, kBox, 100);
    CHECK(o.integrals.size() == 100);
    CHECK(o.spread < 1e-8);
    CHECK(o.precondition_residual < 1e-12);
    CHECK(o.integrals.front() == doctest::Approx(1.0));
  }
  SUBCASE("only i_X d(nu) = 0 is needed, not closedness") {
    const Expr q = 2.0 + sin(2 * M_PI * Expr::var(0));
    const OneForm nu({Expr::constant(0), q, Expr::constant(1)});  // d(nu) = q' dr^dtheta
    CHECK(max_d_residual(nu, kBox, 100) > 0.1);
    const auto o = verify_observation_O(nu, Xz, kBox, 100);
    CHECK(o.spread < 1e-8);
    CHECK(o.precondition_residual < 1e-12);
  }
  SUBCASE("violating the premise spreads the integrals across the box") {
    const OneForm nu({Expr::constant(0), Expr::constant(0), Expr::var(0)});  // r dz
    const auto o = verify_observation_O(nu, Xz, kBox, 100);
    CHECK(o.precondition_residual > 0.5);
    CHECK(o.spread > 0.9 * (kBox.b - kBox.a));
    CHECK(o.spread <= (kBox.b - kBox.a) + 1e-12);
  }
}

TEST_CASE("stabilizing form for the klein model") {
  const models::ModelSolution m =
      models::klein_mapping_torus(2.0 - cos(2 * M_PI * Expr::var(2)));
  const OneForm nu = stabilizer_for_klein(m);
  const auto pts = verify::sample_points(m, 500);
  for (const auto& p : pts) CHECK(dot(nu.value(p), m.X.value(p)) == 1.0);
  const TwoForm dnu = chartcalc::exterior_derivative(nu);
  for (const auto& p : pts) CHECK(core::norm(dnu.proxy(p)) == 0.0);
  const auto stab = verify::check_stabilizing(nu, m.X, pts);
  CHECK(stab.ok);
  const auto resc = verify::rescale_to_reeb(m, nu, pts);
  const auto shs = verify::check_shs(resc.omega, resc.lambda, resc.X, pts);
  CHECK(shs.max() < 1e-9);
  CHECK(shs.pass());

  const models::ModelSolution other =
      models::shear_mapping_torus(1, false, Expr::constant(1));
  CHECK_THROWS(stabilizer_for_klein(other));
}
