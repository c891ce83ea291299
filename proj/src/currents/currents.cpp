#include "currents/currents.hpp"

#include <cmath>
#include <stdexcept>

#include "chartcalc/ops.hpp"
#include "core/sampling.hpp"
#include "flowlab/poincare.hpp"

namespace currents {

using core::Expr;
using core::Vec3;

IntegrableRegion IntegrableRegion::make(double a, double d,
                                        const std::array<double, 2>& direction,
                                        const core::PiecewisePoly& rho,
                                        const core::PiecewisePoly& h) {
  if (!(a < d)) throw std::invalid_argument("IntegrableRegion: need a < d");
  if (rho.min_on_grid(4096) <= 0)
    throw std::invalid_argument("IntegrableRegion: rho must be positive");
  IntegrableRegion r;
  r.a = a;
  r.d = d;
  r.direction = direction;
  r.rho = rho;
  r.h = h;
  const Expr rho_e = Expr::profile(rho, Expr::var(0));
  r.X = VectorField({Expr::constant(0), rho_e * direction[0], rho_e * direction[1]});
  return r;
}

IntegrableRegion region_from_extension(const models::ExtensionTriple& t) {
  return IntegrableRegion::make(t.b.lo(), t.b.hi(), {0.0, 1.0}, t.gfun, t.h);
}

double region_field_mismatch(const IntegrableRegion& region, const VectorField& ambient,
                             int n) {
  core::HaltonSampler s;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3 u = s.next({region.a, 0, 0}, {region.d, 1, 1});
    const Point p{0, u};
    worst = std::max(worst, core::norm(region.X.value(p) - ambient.value(p)));
  }
  return worst;
}

namespace {

double pair_direction(const OneForm& alpha, const IntegrableRegion& region, const Vec3& u) {
  return dot(alpha.value(Point{0, u}), Vec3{0, region.direction[0], region.direction[1]});
}

double torus_mean(const OneForm& alpha, const IntegrableRegion& region, double r, int g) {
  double sum = 0;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      sum += pair_direction(alpha, region, {r, (i + 0.5) / g, (j + 0.5) / g});
  return sum / (double(g) * g);
}

}  // namespace

CurrentEstimate current_space_average(const OneForm& alpha, const IntegrableRegion& region,
                                      double r, int grid) {
  if (r < region.a || r > region.d)
    throw std::invalid_argument("current_space_average: r outside the region");
  CurrentEstimate e;
  e.method = "space_average";
  e.horizon = double(grid) * grid;
  const double coarse = torus_mean(alpha, region, r, grid / 2);
  e.value = torus_mean(alpha, region, r, grid);
  e.error_bound = std::abs(e.value - coarse) + 1e-14;
  return e;
}

CurrentEstimate current_rational(const OneForm& alpha, const IntegrableRegion& region,
                                 double r, int transversal_samples) {
  const auto rn = flowlab::rotation_number(region.direction[0], region.direction[1]);
  if (!rn.rational)
    throw std::invalid_argument("current_rational: direction is not rational within the cap");
  // primitive integer direction of the closed orbits
  long long m1 = rn.vertical ? 0 : rn.q;
  long long m2 = rn.vertical ? 1 : rn.p;
  if (!rn.vertical && region.direction[0] < 0) {
    m1 = -m1;
    m2 = -m2;
  }
  if (rn.vertical && region.direction[1] < 0) m2 = -1;

  const int n_line = 512;
  double sum = 0;
  for (int k = 0; k < transversal_samples; ++k) {
    const double base = (k + 0.5) / transversal_samples;
    // transversal chosen against the larger direction component
    const bool theta_base = std::llabs(m2) >= std::llabs(m1);
    double acc = 0;
    for (int i = 0; i < n_line; ++i) {
      const double t = (i + 0.5) / n_line;
      const double u1 = (theta_base ? base : 0.0) + m1 * t;
      const double u2 = (theta_base ? 0.0 : base) + m2 * t;
      acc += dot(alpha.value(Point{0, {r, u1 - std::floor(u1), u2 - std::floor(u2)}}),
                 Vec3{0, double(m1), double(m2)});
    }
    sum += acc / n_line;
  }
  CurrentEstimate e;
  e.method = "rational_orbit";
  e.horizon = transversal_samples;
  e.value = sum / transversal_samples;
  e.error_bound = 1e-10;
  e.periodic_direction = true;
  return e;
}

CurrentEstimate current_birkhoff(const OneForm& alpha, const IntegrableRegion& region,
                                 double r, double horizon) {
  if (horizon <= 0) throw std::invalid_argument("current_birkhoff: horizon must be positive");
  const double speed = std::max(std::abs(region.direction[0]), std::abs(region.direction[1]));
  auto time_avg = [&](double T) {
    const long long n =
        std::max<long long>(1024, static_cast<long long>(std::ceil(T * speed * 32)));
    double acc = 0;
    for (long long i = 0; i < n; ++i) {
      const double t = T * (i + 0.5) / n;
      double u1 = region.direction[0] * t, u2 = region.direction[1] * t;
      u1 -= std::floor(u1);
      u2 -= std::floor(u2);
      acc += pair_direction(alpha, region, {r, u1, u2});
    }
    return acc / n;
  };
  CurrentEstimate e;
  e.method = "birkhoff";
  e.horizon = horizon;
  e.value = time_avg(horizon);
  e.error_bound = std::abs(e.value - time_avg(horizon / 2)) + 1e-12;
  e.periodic_direction =
      flowlab::rotation_number(region.direction[0], region.direction[1]).rational;
  return e;
}

DriftCheck check_lambda_drift(const OneForm& lambda, const IntegrableRegion& region,
                              double r1, double r2) {
  DriftCheck c;
  c.lhs = current_space_average(lambda, region, r2).value -
          current_space_average(lambda, region, r1).value;
  const core::PiecewisePoly dh = region.h.derivative();
  // composite Simpson quadrature of h'(r)/rho(r)
  const int n = 4096;
  double acc = 0;
  const double w = r2 - r1;
  for (int i = 0; i <= n; ++i) {
    const double r = r1 + w * i / n;
    const double f = dh(r) / region.rho(r);
    const double coef = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    acc += coef * f;
  }
  c.rhs = acc * w / (3.0 * n);
  c.diff = std::abs(c.lhs - c.rhs);
  return c;
}

BoundaryCurrents match_boundary_currents(const IntegrableRegion& region, const OneForm& nu,
                                         double tol, double margin) {
  using namespace chartcalc;
  const OneForm ixdnu = interior_product(region.X, exterior_derivative(nu));
  auto stabilizing_near = [&](double r) {
    core::HaltonSampler s;
    for (int i = 0; i < 200; ++i) {
      const Vec3 u = s.next({r, 0, 0}, {r, 1, 1});
      const Point p{0, u};
      if (core::norm(ixdnu.value(p)) > 1e-8 ||
          dot(nu.value(p), region.X.value(p)) <= 0)
        return false;
    }
    return true;
  };
  const double ra = region.a + margin, rd = region.d - margin;
  if (!stabilizing_near(ra) || !stabilizing_near(rd))
    throw std::domain_error("match_boundary_currents: nu not stabilizing near an end");
  BoundaryCurrents b;
  b.c_minus = current_space_average(nu, region, ra).value;
  b.c_plus = current_space_average(nu, region, rd).value;
  b.matched = std::abs(b.c_minus - b.c_plus) < tol;
  return b;
}

void current_sweep_csv(const OneForm& alpha, const IntegrableRegion& region, int n,
                       std::ostream& os) {
  os << "r,c_r\n";
  for (int i = 0; i < n; ++i) {
    const double r = region.a + (region.d - region.a) * (i + 0.5) / n;
    os << r << ',' << current_space_average(alpha, region, r).value << '\n';
  }
}

}  // namespace currents
