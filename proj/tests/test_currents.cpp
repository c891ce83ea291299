#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "chartcalc/ops.hpp"
#include "currents/currents.hpp"

using namespace currents;
using chartcalc::OneForm;
using chartcalc::ScalarField;
using core::Expr;
using core::PiecewisePoly;

namespace {

const double kGolden = (std::sqrt(5.0) - 1) / 2;

IntegrableRegion flat_region(const std::array<double, 2>& direction) {
  return IntegrableRegion::make(0, 1, direction, PiecewisePoly::constant(0, 1, 1.0),
                                PiecewisePoly::constant(0, 1, 0.0));
}

models::ExtensionTriple make_extension() {
  const auto b = models::rise_overshoot_fall(1, 2, 1.0, 2.0);
  const auto g = models::make_balanced_gfun(b, 1.0, 2.0);
  return models::extension_profile(b, g);
}

}  // namespace

TEST_CASE("region construction and the field-match invariant") {
  const auto t = make_extension();
  const IntegrableRegion region = region_from_extension(t);
  CHECK(region.a == doctest::Approx(1.0));
  CHECK(region.d == doctest::Approx(2.0));
  CHECK(region_field_mismatch(region, t.sol.X) < 1e-10);
  // a genuinely different ambient field is detected
  const auto bad = chartcalc::VectorField(
      {Expr::constant(0), Expr::constant(0), Expr::constant(10.0)});
  CHECK(region_field_mismatch(region, bad) > 1.0);
  CHECK_THROWS(IntegrableRegion::make(1, 0, {0, 1}, PiecewisePoly::constant(0, 1, 1.0),
                                      PiecewisePoly::constant(0, 1, 0.0)));
  CHECK_THROWS(IntegrableRegion::make(0, 1, {0, 1}, PiecewisePoly::constant(0, 1, -1.0),
                                      PiecewisePoly::constant(0, 1, 0.0)));
}

TEST_CASE("space averages of simple forms") {
  SUBCASE("profile one-form against the z direction") {
    const auto t = make_extension();
    const IntegrableRegion region = region_from_extension(t);
    for (double r : {1.1, 1.5, 1.9}) {
      const auto e = current_space_average(t.sol.lambda, region, r);
      CHECK(e.value == doctest::Approx(t.b(r)).epsilon(1e-10));
      CHECK(e.method == "space_average");
      CHECK(e.error_bound >= 0);
    }
  }
  SUBCASE("mean-zero integrand") {
    const IntegrableRegion region = flat_region({1, 0});
    const OneForm alpha({Expr::constant(0), sin(2 * M_PI * Expr::var(1)),
                         Expr::constant(0)});
    CHECK(std::abs(current_space_average(alpha, region, 0.5).value) < 1e-12);
  }
  SUBCASE("constant pairing on a sloped direction") {
    const IntegrableRegion region = flat_region({1, 0.37});
    const OneForm dphi({Expr::constant(0), Expr::constant(1), Expr::constant(0)});
    CHECK(current_space_average(dphi, region, 0.5).value == doctest::Approx(1.0));
  }
  SUBCASE("r outside the interval throws") {
    CHECK_THROWS(current_space_average(
        OneForm({Expr::constant(0), Expr::constant(0), Expr::constant(1)}),
        flat_region({0, 1}), 2.0));
  }
}

TEST_CASE("rational-orbit averages") {
  const auto t = make_extension();
  const IntegrableRegion region = region_from_extension(t);
  SUBCASE("agrees with the space average for the profile form") {
    for (double r : {1.2, 1.5, 1.8}) {
      const auto rat = current_rational(t.sol.lambda, region, r);
      const auto sp = current_space_average(t.sol.lambda, region, r);
      CHECK(rat.method == "rational_orbit");
      CHECK(rat.periodic_direction);
      CHECK(std::abs(rat.value - sp.value) < 1e-10);
    }
  }
  SUBCASE("closed form with unit period integral is transversal-independent") {
    const OneForm dz({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
    const auto a = current_rational(dz, region, 1.5, 16);
    const auto b = current_rational(dz, region, 1.5, 257);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("exact form integrates to zero over closed orbits") {
    const ScalarField f(0.3 * sin(2 * M_PI * Expr::var(2)) * cos(2 * M_PI * Expr::var(1)));
    const OneForm df = chartcalc::exterior_derivative(f);
    CHECK(std::abs(current_rational(df, region, 1.5).value) < 1e-10);
  }
  SUBCASE("skew integer direction pairs with the full homology class") {
    const IntegrableRegion skew = flat_region({2, 3});
    const OneForm du2({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
    const auto rat = current_rational(du2, skew, 0.5);
    const auto sp = current_space_average(du2, skew, 0.5);
    CHECK(rat.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(rat.value - sp.value) < 1e-10);
  }
  SUBCASE("irrational direction is rejected") {
    CHECK_THROWS(current_rational(t.sol.lambda, flat_region({1, kGolden}), 0.5));
  }
}

TEST_CASE("birkhoff averages") {
  const IntegrableRegion region = flat_region({1, kGolden});
  SUBCASE("irrational slope converges to the space average") {
    const OneForm alpha({Expr::constant(0),
                         0.4 + 0.3 * cos(2 * M_PI * Expr::var(1)) +
                             0.2 * sin(2 * M_PI * Expr::var(2)),
                         0.1 * cos(2 * M_PI * Expr::var(2))});
    const auto sp = current_space_average(alpha, region, 0.5);
    const auto bk = current_birkhoff(alpha, region, 0.5, 1e4);
    CHECK(bk.method == "birkhoff");
    CHECK_FALSE(bk.periodic_direction);
    CHECK(std::abs(bk.value - sp.value) <= 5e-3);
  }
  SUBCASE("exact form decays like 1/T") {
    const ScalarField f(0.2 * sin(2 * M_PI * Expr::var(1)) * cos(2 * M_PI * Expr::var(2)));
    const OneForm df = chartcalc::exterior_derivative(f);
    for (double T : {1e2, 1e3, 1e4}) {
      const auto bk = current_birkhoff(df, region, 0.5, T);
      CHECK(std::abs(bk.value) <= 5.0 / T);
    }
  }
  SUBCASE("rational direction averages the single orbit, flagged") {
    const IntegrableRegion rat = flat_region({0, 1});
    // orbit through (r, 0, 0) sees phi = 0, not the space average
    const OneForm alpha({Expr::constant(0), Expr::constant(0),
                         0.3 + cos(2 * M_PI * Expr::var(1))});
    const auto bk = current_birkhoff(alpha, rat, 0.5, 1e3);
    CHECK(bk.periodic_direction);
    CHECK(bk.value == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(current_space_average(alpha, rat, 0.5).value == doctest::Approx(0.3));
  }
  SUBCASE("bad horizon throws") {
    CHECK_THROWS(current_birkhoff(
        OneForm({Expr::constant(0), Expr::constant(0), Expr::constant(1)}), region, 0.5, 0));
  }
}

TEST_CASE("drift of the lambda current across the region") {
  SUBCASE("extension region, both sides equal the profile increment") {
    const auto t = make_extension();
    const IntegrableRegion region = region_from_extension(t);
    const auto c = check_lambda_drift(t.sol.lambda, region, 1.2, 1.8);
    CHECK(c.lhs == doctest::Approx(t.b(1.8) - t.b(1.2)).epsilon(1e-8));
    CHECK(c.rhs == doctest::Approx(t.b(1.8) - t.b(1.2)).epsilon(1e-8));
    CHECK(c.diff < 1e-6);
  }
  SUBCASE("constant invariant profile gives zero drift") {
    const IntegrableRegion region = flat_region({0, 1});
    const OneForm lambda({Expr::constant(0), Expr::constant(0), Expr::constant(2.0)});
    const auto c = check_lambda_drift(lambda, region, 0.2, 0.8);
    CHECK(std::abs(c.lhs) < 1e-12);
    CHECK(std::abs(c.rhs) < 1e-12);
  }
  SUBCASE("coincident radii") {
    const auto t = make_extension();
    const auto c = check_lambda_drift(t.sol.lambda, region_from_extension(t), 1.4, 1.4);
    CHECK(c.lhs == 0.0);
    CHECK(std::abs(c.rhs) < 1e-14);
  }
}

TEST_CASE("current of a flow-compatible form is independent of r") {
  const auto t = make_extension();
  const IntegrableRegion region = region_from_extension(t);
  const OneForm nu({Expr::constant(3.0), sin(2 * M_PI * Expr::var(1)),
                    Expr::constant(1.0)});  // closed, so i_X d(nu) = 0
  double lo = 1e18, hi = -1e18;
  for (int i = 0; i < 10; ++i) {
    const double r = 1.05 + 0.9 * i / 9.0;
    const double c = current_space_average(nu, region, r).value;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(hi - lo < 1e-8);
}

TEST_CASE("homology class of the current is independent of r") {
  const IntegrableRegion region = flat_region({0.6, 1.7});
  const OneForm du1({Expr::constant(0), Expr::constant(1), Expr::constant(0)});
  const OneForm du2({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
  for (double r : {0.1, 0.5, 0.9}) {
    CHECK(current_space_average(du1, region, r).value == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(current_space_average(du2, region, r).value == doctest::Approx(1.7).epsilon(1e-10));
  }
}

TEST_CASE("boundedness transfer from the pairing to the current") {
  const auto t = make_extension();
  const IntegrableRegion region = region_from_extension(t);
  const OneForm nu({Expr::constant(0), Expr::constant(0),
                    1.0 + 0.5 * sin(2 * M_PI * Expr::var(2))});
  // bounds on nu(X) over the region
  double m = 1e18, M = -1e18;
  for (int i = 0; i <= 200; ++i) {
    const double r = 1.0 + i / 200.0;
    for (int j = 0; j < 64; ++j) {
      const double z = (j + 0.5) / 64;
      const double v = t.gfun(r) * (1.0 + 0.5 * std::sin(2 * M_PI * z));
      m = std::min(m, v);
      M = std::max(M, v);
    }
  }
  for (double r : {1.1, 1.5, 1.9}) {
    const double c = current_space_average(nu, region, r).value;
    CHECK(c * t.gfun(r) >= m - 1e-9);
    CHECK(c * t.gfun(r) <= M + 1e-9);
  }
}

TEST_CASE("boundary current matching") {
  const auto t = make_extension();
  const IntegrableRegion region = region_from_extension(t);
  SUBCASE("globally compatible form matches") {
    const OneForm nu({Expr::constant(0), Expr::constant(0.2), Expr::constant(1.0)});
    const auto b = match_boundary_currents(region, nu);
    CHECK(b.matched);
    CHECK(b.c_minus == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(b.c_plus == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("different end values do not match") {
    // 1 near the left end, 2 near the right, flat at both ends
    const auto step = PiecewisePoly::constant(1, 1.2, 1.0)
                          .concat(PiecewisePoly::smoothstep(1.2, 1.8, 1.0, 2.0))
                          .concat(PiecewisePoly::constant(1.8, 2, 2.0));
    const OneForm nu({Expr::constant(0), Expr::constant(0),
                      Expr::profile(step, Expr::var(0))});
    const auto b = match_boundary_currents(region, nu);
    CHECK_FALSE(b.matched);
    CHECK(b.c_minus == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.c_plus == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("non-stabilizing form is rejected") {
    const OneForm neg({Expr::constant(0), Expr::constant(0), Expr::constant(-1.0)});
    CHECK_THROWS(match_boundary_currents(region, neg));
    const OneForm nonflat({Expr::constant(0), Expr::constant(0), Expr::var(0)});
    CHECK_THROWS(match_boundary_currents(region, nonflat));
  }
}

TEST_CASE("sweep csv shape") {
  const auto t = make_extension();
  const IntegrableRegion region = region_from_extension(t);
  std::ostringstream os;
  current_sweep_csv(t.sol.lambda, region, 8, os);
  const std::string s = os.str();
  CHECK(s.rfind("r,c_r\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 9);
}
