#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chartcalc/ops.hpp"
#include "core/sampling.hpp"
#include "models/catalog.hpp"
#include "verify/residuals.hpp"

using namespace models;
using chartcalc::Point;
using core::Expr;
using core::PiecewisePoly;
using core::Vec3;

namespace {

Expr default_h() {
  return 2.0 - cos(2 * M_PI * Expr::var(2));
}

double max_euler_residual(const ModelSolution& sol, int n) {
  const auto pts = verify::sample_points(sol, n);
  double worst = 0;
  for (auto eq : {verify::EulerEq::momentum, verify::EulerEq::curlform,
                  verify::EulerEq::dualform, verify::EulerEq::volume})
    worst = std::max(worst, verify::euler_residuals(sol, pts, eq).max_residual);
  return worst;
}

// pushforward residual of all fields under one atlas generator
double generator_invariance(const ModelSolution& sol, const AffineMap& gen, int n) {
  double worst = 0;
  core::HaltonSampler s;
  const auto& box = sol.atlas.charts()[gen.chart_from];
  for (int i = 0; i < n; ++i) {
    Vec3 lo = box.lo, hi = box.hi;
    // the monodromy identification glues the x=0 face to the x=1 face; the
    // interpolated metric matches there, so that's where the comparison lives
    if (gen.b[0] != 0) lo[0] = hi[0] = 0;
    const Point p{gen.chart_from, s.next(lo, hi)};
    const Point q = gen.apply(p);
    const core::Mat3& A = gen.A;
    // vector field: X(q) = A X(p)
    worst = std::max(worst, core::norm(sol.X.value(q) - A * sol.X.value(p)));
    // one-form: lambda_q(A u) = lambda_p(u), i.e. A^T lambda(q) = lambda(p)
    const Vec3 lq = sol.lambda.value(q);
    Vec3 Atl;
    for (int k = 0; k < 3; ++k) Atl[k] = A[0][k] * lq[0] + A[1][k] * lq[1] + A[2][k] * lq[2];
    worst = std::max(worst, core::norm(Atl - sol.lambda.value(p)));
    // two-form and volume via pairings with pushed-forward frames
    const Vec3 e0{1, 0, 0}, e1{0, 1, 0}, e2{0, 0, 1};
    worst = std::max(worst, std::abs(sol.omega.pair(q, A * e0, A * e1) -
                                     sol.omega.pair(p, e0, e1)));
    worst = std::max(worst, std::abs(sol.omega.pair(q, A * e1, A * e2) -
                                     sol.omega.pair(p, e1, e2)));
    worst = std::max(worst, std::abs(sol.mu.pair(q, A * e0, A * e1, A * e2) -
                                     sol.mu.pair(p, e0, e1, e2)));
    if (sol.metric) {
      const core::Mat3 gq = sol.metric->value(q), gp = sol.metric->value(p);
      for (int a = 0; a < 3; ++a)
        for (int bidx = 0; bidx < 3; ++bidx) {
          double lhs = 0;
          for (int ii = 0; ii < 3; ++ii)
            for (int jj = 0; jj < 3; ++jj) lhs += gq[ii][jj] * A[ii][a] * A[jj][bidx];
          worst = std::max(worst, std::abs(lhs - gp[a][bidx]));
        }
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("klein model: full residual suite at 1e4 points") {
  const ModelSolution m = klein_mapping_torus(default_h());
  CHECK(max_euler_residual(m, 10000) < 1e-9);
}

TEST_CASE("klein model with constant h") {
  const ModelSolution m = klein_mapping_torus(Expr::constant(1));
  const Point p{0, {0.2, 0.4, 0.8}};
  CHECK(m.bernoulli.value(p) == 1.0);
  CHECK(m.pressure->value(p) == 0.5);
  CHECK(max_euler_residual(m, 2000) < 1e-9);
}

TEST_CASE("klein model rejects bad h") {
  CHECK_THROWS(klein_mapping_torus(Expr::var(2)));                    // not periodic
  CHECK_THROWS(klein_mapping_torus(sin(2 * M_PI * Expr::var(2))));    // not positive
  CHECK_THROWS(klein_mapping_torus(2.0 + sin(2 * M_PI * Expr::var(2))));  // not even
}

TEST_CASE("double cover pulls the klein fields back consistently") {
  const ModelSolution cover = klein_double_cover(default_h());
  const ModelSolution base = klein_mapping_torus(default_h());
  CHECK(max_euler_residual(cover, 2000) < 1e-9);
  core::HaltonSampler s;
  for (int i = 0; i < 200; ++i) {
    const Vec3 u = s.next({0, 0, 0}, {0.49, 1, 1});
    const Point pc{0, u};
    const Point pb = base.atlas.normalize(Point{0, {2 * u[0], u[1], u[2]}});
    // d(cover map) = diag(2,1,1): X pulls back to X/2, lambda to 2 h dx
    CHECK(cover.X.value(pc)[0] == doctest::Approx(base.X.value(pb)[0] / 2).epsilon(1e-12));
    CHECK(cover.lambda.value(pc)[0] ==
          doctest::Approx(2 * base.lambda.value(pb)[0]).epsilon(1e-12));
    CHECK(cover.mu.density(pc) == doctest::Approx(2 * base.mu.density(pb)).epsilon(1e-12));
    CHECK(cover.bernoulli.value(pc) ==
          doctest::Approx(base.bernoulli.value(pb)).epsilon(1e-12));
  }
}

TEST_CASE("shear mapping tori") {
  const ModelSolution flat = shear_mapping_torus(1, false, Expr::constant(1));
  CHECK(max_euler_residual(flat, 2000) < 1e-9);
  const ModelSolution wavy = shear_mapping_torus(1, false, default_h());
  CHECK(max_euler_residual(wavy, 2000) < 1e-9);

  const ModelSolution k1 = shear_mapping_torus(0, true, default_h());
  const ModelSolution k2 = klein_mapping_torus(default_h());
  core::HaltonSampler s;
  for (int i = 0; i < 100; ++i) {
    const Point p{0, s.next({0, 0, 0}, {1, 1, 1})};
    CHECK(core::norm(k1.X.value(p) - k2.X.value(p)) == 0.0);
    CHECK(core::norm(k1.lambda.value(p) - k2.lambda.value(p)) == 0.0);
    const core::Mat3 a = k1.metric->value(p), b = k2.metric->value(p);
    for (int ii = 0; ii < 3; ++ii)
      for (int jj = 0; jj < 3; ++jj) CHECK(a[ii][jj] == b[ii][jj]);
  }
}

TEST_CASE("fields descend through every atlas generator") {
  for (const ModelSolution& m :
       {klein_mapping_torus(default_h()), shear_mapping_torus(1, false, default_h()),
        shear_mapping_torus(2, true, default_h())}) {
    for (const AffineMap& gen : m.atlas.generators())
      CHECK(generator_invariance(m, gen, 300) < 1e-9);
  }
}

TEST_CASE("normalize_point examples") {
  const ModelSolution m = klein_mapping_torus(default_h());
  const Point a = normalize_point(m.atlas, {1.2, 0.3, 0.4});
  CHECK(a.u[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(a.u[1] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(a.u[2] == doctest::Approx(0.6).epsilon(1e-12));

  const Point b = normalize_point(m.atlas, {0.5, 0.5, 0.5});
  CHECK(b.u[0] == 0.5);
  CHECK(b.u[1] == 0.5);
  CHECK(b.u[2] == 0.5);

  const Point c = normalize_point(m.atlas, {0.0, 1.0, 0.0});
  CHECK(c.u[0] == 0.0);
  CHECK(c.u[1] == 0.0);
  CHECK(c.u[2] == 0.0);

  // idempotent
  const Point again = m.atlas.normalize(a);
  CHECK(again.u[0] == a.u[0]);
  CHECK(again.u[1] == a.u[1]);
  CHECK(again.u[2] == a.u[2]);
}

TEST_CASE("generator and inverse compose to the identity") {
  const ModelSolution m = shear_mapping_torus(1, false, default_h());
  for (const AffineMap& gen : m.atlas.generators()) {
    const Point p{0, {0.3, 0.6, 0.9}};
    const Point back = gen.inverse().apply(gen.apply(p));
    CHECK(core::norm(back.u - p.u) < 1e-14);
  }
}

TEST_CASE("contact solid torus: Reeb normalization and residuals") {
  const ModelSolution m = standardized_orbit_neighborhood(1.0, 0.25);
  const auto pts = verify::sample_points(m, 1000);
  for (const Point& p : pts)
    CHECK(std::abs(m.lambda.pair(p, m.X.value(p)) - 1.0) < 1e-10);
  CHECK(max_euler_residual(m, 2000) < 1e-9);
}

TEST_CASE("contact with constant H is a rigid rotation") {
  const double T0 = 2.5;
  const ModelSolution m = solid_torus_invariant_contact(
      Expr::constant(T0), -0.5 * Expr::var(1), 0.5 * Expr::var(0), 0.4);
  core::HaltonSampler s;
  for (int i = 0; i < 100; ++i) {
    const Point p{0, s.next({-0.25, -0.25, 0}, {0.25, 0.25, 1})};
    const Vec3 v = m.X.value(p);
    CHECK(std::abs(v[0]) < 1e-14);
    CHECK(std::abs(v[1]) < 1e-14);
    CHECK(v[2] == doctest::Approx(1.0 / T0).epsilon(1e-14));
  }
}

TEST_CASE("standardized model: transverse Reeb linearization at the core") {
  const double T0 = 1.7;
  const ModelSolution m = standardized_orbit_neighborhood(T0, 0.3);
  const core::Mat3 J = m.X.jacobian(Point{0, {0, 0, 0.2}});
  CHECK(J[0][0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(J[0][1] == doctest::Approx(2.0 / T0).epsilon(1e-10));
  CHECK(J[1][0] == doctest::Approx(2.0 / T0).epsilon(1e-10));
  CHECK(J[1][1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("core circle integral of lambda equals T0") {
  const double T0 = 2.7;
  const ModelSolution m = standardized_orbit_neighborhood(T0, 0.5);
  double acc = 0;
  const int n = 512;
  for (int i = 0; i < n; ++i)
    acc += m.lambda.pair(Point{0, {0, 0, (i + 0.5) / n}}, Vec3{0, 0, 1.0 / n});
  CHECK(acc == doctest::Approx(T0).epsilon(1e-12));
}

TEST_CASE("standardized rejects eps >= T0") {
  CHECK_THROWS(standardized_orbit_neighborhood(1.0, 1.0));
  CHECK_THROWS(standardized_orbit_neighborhood(1.0, -0.1));
}

TEST_CASE("modified contact matches the two regimes") {
  const double T0 = 1.0, eps = 0.25;
  const ModelSolution mod = modified_contact(T0, default_cutoff(eps));
  const ModelSolution std_form = standardized_orbit_neighborhood(T0, eps);
  core::HaltonSampler s;
  int outer = 0, inner = 0;
  for (int i = 0; i < 4000 && (outer < 100 || inner < 100); ++i) {
    const Vec3 u = s.next({-0.5, -0.5, 0}, {0.5, 0.5, 1});
    const double r2 = u[0] * u[0] + u[1] * u[1];
    if (r2 > 0.95 * eps) continue;
    const Point p{0, u};
    if (r2 >= 0.7 * eps) {  // chi = 1 band
      ++outer;
      CHECK(core::norm(mod.X.value(p) - std_form.X.value(p)) < 1e-12);
      CHECK(core::norm(mod.lambda.value(p) - std_form.lambda.value(p)) < 1e-12);
    } else if (r2 <= eps / 4.0) {  // chi = 0 band
      ++inner;
      const Vec3 v = mod.X.value(p);
      CHECK(std::abs(v[0]) < 1e-14);
      CHECK(std::abs(v[1]) < 1e-14);
      CHECK(v[2] == doctest::Approx(1.0 / T0).epsilon(1e-12));
      CHECK(mod.lambda.value(p)[2] == doctest::Approx(T0).epsilon(1e-12));
    }
  }
  CHECK(outer >= 100);
  CHECK(inner >= 100);
  CHECK(max_euler_residual(mod, 2000) < 1e-9);
}

TEST_CASE("cutoff profile validation") {
  const CutoffProfile chi = default_cutoff(0.09);
  CHECK(chi(0.0) == 0.0);
  CHECK(chi(0.09) == 1.0);
  CHECK(chi(0.01) == 0.0);  // flat inner band
  CHECK(chi(0.08) == 1.0);  // flat outer band
  chi.validate();
  CutoffProfile bad = chi;
  bad.chi = PiecewisePoly::smoothstep(0, 0.09, 1.0, 0.0);  // decreasing
  CHECK_THROWS(bad.validate());
}

TEST_CASE("extension profile: trivial constant case") {
  const auto b = PiecewisePoly::constant(1, 2, 1.0);
  const auto g = PiecewisePoly::constant(1, 2, 1.0);
  const ExtensionTriple t = extension_profile(b, g);
  for (int i = 0; i <= 20; ++i) {
    const double r = 1.0 + i / 20.0;
    CHECK(std::abs(t.h(r)) < 1e-14);
  }
  CHECK(max_euler_residual(t.sol, 1000) < 1e-9);
}

TEST_CASE("extension profile: balanced rise-overshoot-fall") {
  const auto b = rise_overshoot_fall(1, 2, 1.0, 2.0);
  const auto g = make_balanced_gfun(b, 1.0, 2.0);
  const ExtensionTriple t = extension_profile(b, g);
  CHECK(std::abs(t.h(2.0)) < 1e-10);
  CHECK(t.T_left == doctest::Approx(1.0));
  CHECK(t.T_right == doctest::Approx(2.0));
  const auto pts = verify::sample_points(t.sol, 2000);
  CHECK(verify::euler_residuals(t.sol, pts, verify::EulerEq::dualform).max_residual < 1e-9);
  for (const Point& p : pts) {
    const double pairing = t.sol.lambda.pair(p, t.sol.X.value(p));
    CHECK(pairing > 0);
    CHECK(pairing == doctest::Approx(t.b(p.u[0]) * t.gfun(p.u[0])).epsilon(1e-12));
  }
  CHECK(max_euler_residual(t.sol, 2000) < 1e-9);
}

TEST_CASE("extension profile rejects unbalanced data") {
  const auto b = PiecewisePoly::smoothstep(1, 2, 1.0, 2.0);  // monotone, no overshoot
  const auto g = PiecewisePoly::constant(1, 2, 1.0);
  CHECK_THROWS(extension_profile(b, g));  // boundary product and balance both fail
}

TEST_CASE("make_balanced_gfun") {
  SUBCASE("equal periods need no correction") {
    const auto b = rise_overshoot_fall(0, 1, 1.5, 1.5);
    const auto g = make_balanced_gfun(b, 1.5, 1.5);
    CHECK(g(0.0) == doctest::Approx(1 / 1.5).epsilon(1e-12));
    CHECK(g(1.0) == doctest::Approx(1 / 1.5).epsilon(1e-12));
    CHECK(std::abs((g * b.derivative()).integral(0, 1)) < 1e-12);
  }
  SUBCASE("distinct periods solved by bisection") {
    const auto b = rise_overshoot_fall(1, 2, 1.0, 2.0);
    CHECK(b.max_on_grid(2000) == doctest::Approx(3.0).epsilon(1e-9));
    const auto g = make_balanced_gfun(b, 1.0, 2.0);
    CHECK(g(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g(2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs((g * b.derivative()).integral(1, 2)) < 1e-12);
    CHECK(g.min_on_grid(10000) > 0);
  }
  SUBCASE("monotone b with distinct periods is rejected") {
    const auto b = PiecewisePoly::smoothstep(0, 1, 1.0, 2.0);
    CHECK_THROWS(make_balanced_gfun(b, 1.0, 2.0));
  }
}

TEST_CASE("glued counterexample assembly") {
  const GluedCounterexample g = glued_counterexample({1, 2, 1, 3});
  CHECK(g.solution.atlas.charts().size() == 2);
  CHECK(max_euler_residual(g.solution, 2000) < 1e-9);

  // equal differences refused by default, allowed on request
  CHECK_THROWS(glued_counterexample({1, 1, 1, 1}));
  const GluedCounterexample sym =
      glued_counterexample({1, 1, 1, 1}, 0.1, {0.3, 0.3, 0.3, 0.3}, nullptr, true);
  CHECK(max_euler_residual(sym.solution, 1000) < 1e-9);
}

TEST_CASE("gluing map preserves the annulus area form") {
  const GluedCounterexample g = glued_counterexample({1, 2, 1, 3});
  core::HaltonSampler s;
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 u = s.next({0.25, 0, 0}, {0.35, 1, 1});  // collar band
    const Point p{0, u};
    const Point q{0, g.glue12.A * u + g.glue12.b};
    const Vec3 e0{1, 0, 0}, e1{0, 1, 0};
    worst = std::max(worst, std::abs(g.annulus_area.pair(q, g.glue12.A * e0,
                                                         g.glue12.A * e1) -
                                     g.annulus_area.pair(p, e0, e1)));
  }
  CHECK(worst < 1e-12);
  // and the same for the second gluing
  const Vec3 u{0.3, 0.4, 0.7};
  const Vec3 e0{1, 0, 0}, e1{0, 1, 0};
  CHECK(std::abs(g.annulus_area.pair(Point{0, g.glue34.A * u + g.glue34.b},
                                     g.glue34.A * e0, g.glue34.A * e1) -
                 g.annulus_area.pair(Point{0, u}, e0, e1)) < 1e-12);
}

TEST_CASE("glued build is stable under r_core and delta changes") {
  const GluedCounterexample a = glued_counterexample({1, 2, 1, 3}, 0.1);
  const GluedCounterexample b =
      glued_counterexample({1, 2, 1, 3}, 0.15, {0.25, 0.25, 0.25, 0.25});
  CHECK(max_euler_residual(a.solution, 1000) < 1e-9);
  CHECK(max_euler_residual(b.solution, 1000) < 1e-9);
  CHECK(a.region12.T_left == doctest::Approx(b.region12.T_left));
  CHECK(a.region34.T_right == doctest::Approx(b.region34.T_right));
}

TEST_CASE("omega is the contraction of mu by X, and closed") {
  for (const ModelSolution& m :
       {klein_mapping_torus(default_h()), standardized_orbit_neighborhood(1.0, 0.25),
        glued_counterexample({1, 2, 1, 3}).solution}) {
    const auto pts = verify::sample_points(m, 500);
    const chartcalc::TwoForm ixmu = chartcalc::interior_product(m.X, m.mu);
    const chartcalc::ThreeForm domega = chartcalc::exterior_derivative(m.omega);
    for (const Point& p : pts) {
      CHECK(core::norm(ixmu.proxy(p) - m.omega.proxy(p)) < 1e-10);
      CHECK(std::abs(domega.density(p)) < 1e-10);
      CHECK(std::abs(m.mu.density(p)) > 1e-12);
      CHECK(m.lambda.pair(p, m.X.value(p)) > 0);
    }
  }
}

TEST_CASE("mobius translation length") {
  core::Mat2 d;
  d[0][0] = 2;
  d[1][1] = 0.5;
  CHECK(mobius_translation_length(d) == doctest::Approx(2 * std::log(2)).epsilon(1e-12));
  // arclength oracle: the axis of z -> 4z is the imaginary axis, hyperbolic
  // length from i to 4i is the integral of 1/y
  double arc = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double y = 1.0 + 3.0 * (i + 0.5) / n;
    arc += (3.0 / n) / y;
  }
  CHECK(mobius_translation_length(d) == doctest::Approx(arc).epsilon(1e-9));

  core::Mat2 t3;  // trace 3 hyperbolic element
  t3[0][0] = 2;
  t3[0][1] = 1;
  t3[1][0] = 1;
  t3[1][1] = 1;
  CHECK(mobius_translation_length(t3) ==
        doctest::Approx(2 * std::acosh(1.5)).epsilon(1e-12));

  core::Mat2 rot;  // elliptic
  rot[0][1] = -1;
  rot[1][0] = 1;
  CHECK_THROWS(mobius_translation_length(rot));
  core::Mat2 notdet;
  notdet[0][0] = 3;
  notdet[1][1] = 1;
  CHECK_THROWS(mobius_translation_length(notdet));
}
