#include "stabilize/stabilize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "chartcalc/ops.hpp"
#include "core/sampling.hpp"

namespace stabilize {

using chartcalc::TwoForm;
using core::Expr;

namespace {

double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
  double acc = 0;
  for (int i = 0; i <= panels; ++i) {
    const double coef = (i == 0 || i == panels) ? 1 : (i % 2 ? 4 : 2);
    acc += coef * f(lo + (hi - lo) * i / panels);
  }
  return acc * (hi - lo) / (3.0 * panels);
}

double max_proxy_norm(const TwoForm& w, const RegionBox& box, int n) {
  core::HaltonSampler s;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const core::Vec3 u = s.next({box.a, 0, 0}, {box.b, 1, 1});
    worst = std::max(worst, core::norm(w.proxy(Point{0, u})));
  }
  return worst;
}

}  // namespace

ScalarField find_primitive(const OneForm& delta, const RegionBox& box) {
  using namespace chartcalc;
  const TwoForm d = exterior_derivative(delta);
  if (max_proxy_norm(d, box, 500) > 1e-9)
    throw std::invalid_argument("find_primitive: input is not closed");

  const auto& c = delta.coeffs(0);
  const Expr c0 = c[0], c1 = c[1], c2 = c[2];
  const double a = box.a;

  const double per_theta =
      simpson([&](double t) { return c1({a, t, 0}); }, 0, 1, 256);
  const double per_z = simpson([&](double t) { return c2({a, 0, t}); }, 0, 1, 256);
  if (std::abs(per_theta) > 1e-9 || std::abs(per_z) > 1e-9)
    throw CohomologyObstruction(per_theta, per_z);

  // spot-check cycle integrals away from the base radius
  core::HaltonSampler s;
  for (int i = 0; i < 10; ++i) {
    const core::Vec3 u = s.next({box.a, 0, 0}, {box.b, 1, 1});
    const double pt =
        simpson([&](double t) { return c1({u[0], t, u[2]}); }, 0, 1, 256);
    const double pz =
        simpson([&](double t) { return c2({u[0], u[1], t}); }, 0, 1, 256);
    if (std::abs(pt) > 1e-9 || std::abs(pz) > 1e-9)
      throw CohomologyObstruction(pt, pz);
  }

  auto eval = [c0, c1, c2, a](const core::Vec3& u) {
    double g = simpson([&](double t) { return c0({t, 0, 0}); }, a, u[0], 128);
    g += u[1] * simpson([&](double t) { return c1({u[0], u[1] * t, 0}); }, 0, 1, 128);
    g += u[2] * simpson([&](double t) { return c2({u[0], u[1], u[2] * t}); }, 0, 1, 128);
    return g;
  };
  auto grad = [c0, c1, c2](int axis) {
    return axis == 0 ? c0 : (axis == 1 ? c1 : c2);
  };
  return ScalarField(Expr::opaque(eval, grad, "primitive"));
}

OneForm interpolate_closed(const OneForm& nu0, const OneForm& nu1,
                           const core::PiecewisePoly& phi_cut, const RegionBox& box) {
  using namespace chartcalc;
  if (max_proxy_norm(exterior_derivative(nu0), box, 300) > 1e-9 ||
      max_proxy_norm(exterior_derivative(nu1), box, 300) > 1e-9)
    throw std::invalid_argument("interpolate_closed: inputs must be closed");
  if (std::abs(phi_cut(box.a)) > 1e-12 || std::abs(phi_cut(box.b) - 1.0) > 1e-12)
    throw std::invalid_argument("interpolate_closed: cutoff must run from 0 to 1");

  const auto& n0 = nu0.coeffs(0);
  const auto& n1 = nu1.coeffs(0);
  const std::array<Expr, 3> d{n1[0] - n0[0], n1[1] - n0[1], n1[2] - n0[2]};
  const ScalarField g = find_primitive(OneForm(d), box);  // may throw on class mismatch
  const Expr phi = Expr::profile(phi_cut, Expr::var(0));
  const Expr ge = g.expr(0);
  return OneForm({n0[0] + phi.diff(0) * ge + phi * d[0], n0[1] + phi * d[1],
                  n0[2] + phi * d[2]});
}

OneForm torus_average(const OneForm& nu, const RegionBox& box) {
  struct Averager {
    static Expr apply(const Expr& e, const RegionBox& box) {
      // invariant inputs are fixed points; return them untouched
      core::HaltonSampler s;
      bool invariant = true;
      for (int i = 0; i < 16 && invariant; ++i) {
        const core::Vec3 u = s.next({box.a, 0, 0}, {box.b, 1, 1});
        const double v = e({u[0], 0.25, 0.5});
        if (std::abs(e(u) - v) > 1e-13 * (1.0 + std::abs(v))) invariant = false;
      }
      if (invariant) return e;
      auto eval = [e](const core::Vec3& u) {
        const int g = 64;
        double acc = 0;
        for (int i = 0; i < g; ++i)
          for (int j = 0; j < g; ++j)
            acc += e({u[0], (i + 0.5) / g, (j + 0.5) / g});
        return acc / (double(g) * g);
      };
      auto grad = [e, box](int axis) {
        return axis == 0 ? apply(e.diff(0), box) : Expr();
      };
      return Expr::opaque(eval, grad, "torus-average");
    }
  };
  const auto& c = nu.coeffs(0);
  return OneForm({Averager::apply(c[0], box), Averager::apply(c[1], box),
                  Averager::apply(c[2], box)});
}

OneForm normalized_orbit_form(const VectorField& X, int d_gamma,
                              const std::vector<Point>& pts, double z_period) {
  if (d_gamma <= 0) throw std::invalid_argument("normalized_orbit_form: d_gamma must be positive");
  for (const Point& p : pts)
    if (X.value(p)[2] <= 0)
      throw std::domain_error("normalized_orbit_form: X not positively transverse to dz");
  const double coeff = 1.0 / (d_gamma * z_period);
  return OneForm({Expr::constant(0), Expr::constant(0), Expr::constant(coeff)});
}

ObservationO verify_observation_O(const OneForm& nu, const VectorField& X,
                                  const RegionBox& box, int base_samples) {
  using namespace chartcalc;
  const OneForm ixdnu = interior_product(X, exterior_derivative(nu));
  ObservationO o;
  core::HaltonSampler s;
  for (int k = 0; k < base_samples; ++k) {
    const core::Vec3 base = s.next({box.a, 0, 0}, {box.b, 1, 0});
    const int n = 256;
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      const Point p{0, {base[0], base[1], (i + 0.5) / n}};
      acc += nu.value(p)[2];
      o.precondition_residual =
          std::max(o.precondition_residual, core::norm(ixdnu.value(p)));
    }
    o.integrals.push_back(acc / n);
  }
  const auto [lo, hi] = std::minmax_element(o.integrals.begin(), o.integrals.end());
  o.spread = *hi - *lo;
  return o;
}

OneForm stabilizer_for_klein(const models::ModelSolution& model) {
  if (model.name != "klein")
    throw std::invalid_argument("stabilizer_for_klein: expects the Klein mapping torus");
  return OneForm({Expr::constant(1), Expr::constant(0), Expr::constant(0)});
}

}  // namespace stabilize
