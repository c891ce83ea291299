#include "verify/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "chartcalc/ops.hpp"
#include "core/sampling.hpp"

namespace verify {

using chartcalc::MetricField;
using chartcalc::ScalarField;
using chartcalc::ThreeForm;
using core::Expr;
using core::Vec3;

nlohmann::json ResidualReport::to_json() const {
  return {{"tag", tag},
          {"max", max_residual},
          {"argmax", {{"chart", worst.chart}, {"u", {worst.u[0], worst.u[1], worst.u[2]}}}},
          {"n", samples},
          {"tol", tol},
          {"seed", seed}};
}

std::vector<Point> sample_points(const ModelSolution& sol, int n, int seed) {
  if (n <= 0) throw std::invalid_argument("sample_points: need a positive sample count");
  const auto& charts = sol.atlas.charts();
  std::vector<Point> pts;
  pts.reserve(n);
  core::HaltonSampler sampler(static_cast<std::uint64_t>(seed));
  int chart = 0;
  int guard = 0;
  while (static_cast<int>(pts.size()) < n) {
    const auto& box = charts[chart];
    const Vec3 raw = sampler.next(box.lo, box.hi);
    try {
      pts.push_back(sol.atlas.normalize(Point{chart, raw}));
    } catch (const models::OutsideAtlas&) {
      if (++guard > 100 * n)
        throw std::runtime_error("sample_points: rejection rate too high");
    }
    chart = (chart + 1) % static_cast<int>(charts.size());
  }
  return pts;
}

namespace {

ResidualReport scan(const std::string& tag, const std::vector<Point>& pts,
                    const std::function<double(const Point&)>& defect, double tol,
                    int seed) {
  ResidualReport r;
  r.tag = tag;
  r.tol = tol;
  r.seed = seed;
  r.samples = static_cast<int>(pts.size());
  if (!pts.empty()) r.worst = pts.front();
  for (const Point& p : pts) {
    const double d = defect(p);
    if (d > r.max_residual) {
      r.max_residual = d;
      r.worst = p;
    }
  }
  return r;
}

double form_norm(const OneForm& a, const Point& p) { return core::norm(a.value(p)); }

}  // namespace

ResidualReport euler_residuals(const ModelSolution& sol, const std::vector<Point>& pts,
                               EulerEq which, double tol, int seed) {
  using namespace chartcalc;
  switch (which) {
    case EulerEq::momentum: {
      if (!sol.metric || !sol.pressure)
        throw std::invalid_argument("euler_residuals: momentum needs metric and pressure");
      const VectorField gradp = gradient(*sol.metric, *sol.pressure);
      return scan("momentum", pts,
                  [&](const Point& p) {
                    return core::norm(covariant_derivative(*sol.metric, sol.X, sol.X, p) +
                                      gradp.value(p));
                  },
                  tol, seed);
    }
    case EulerEq::curlform: {
      if (!sol.metric)
        throw std::invalid_argument("euler_residuals: curlform needs a metric");
      const VectorField w = curl(*sol.metric, sol.mu, sol.X);
      const VectorField wxX = cross(*sol.metric, sol.mu, w, sol.X);
      const VectorField gradh = gradient(*sol.metric, sol.bernoulli);
      return scan("curlform", pts,
                  [&](const Point& p) { return core::norm(wxX.value(p) + gradh.value(p)); },
                  tol, seed);
    }
    case EulerEq::dualform: {
      const OneForm defect = [&] {
        const OneForm ixdl = interior_product(sol.X, exterior_derivative(sol.lambda));
        const OneForm dh = exterior_derivative(sol.bernoulli);
        std::vector<std::array<Expr, 3>> out;
        for (int c = 0; c < ixdl.num_charts(); ++c) {
          const auto& a = ixdl.coeffs(c);
          const auto& b = dh.coeffs(c);
          out.push_back({a[0] + b[0], a[1] + b[1], a[2] + b[2]});
        }
        return OneForm(std::move(out));
      }();
      return scan("dualform", pts,
                  [&](const Point& p) { return form_norm(defect, p); }, tol, seed);
    }
    case EulerEq::volume: {
      const ScalarField div = divergence(sol.mu, sol.X);
      return scan("volume", pts,
                  [&](const Point& p) { return std::abs(div.value(p)); }, tol, seed);
    }
  }
  throw std::logic_error("euler_residuals: unknown equation tag");
}

double ShsReport::max() const {
  return std::max(closure.max_residual,
                  std::max(kernel.max_residual, normalization.max_residual));
}

ShsReport check_shs(const TwoForm& omega, const OneForm& lambda, const VectorField& X,
                    const std::vector<Point>& pts, double tol) {
  using namespace chartcalc;
  const OneForm ixdl = interior_product(X, exterior_derivative(lambda));
  const OneForm ixw = interior_product(X, omega);
  const ScalarField pairing = interior_product(X, lambda);
  ShsReport r;
  r.closure = scan("shs-closure", pts, [&](const Point& p) { return form_norm(ixdl, p); },
                   tol, 0);
  r.kernel = scan("shs-kernel", pts, [&](const Point& p) { return form_norm(ixw, p); },
                  tol, 0);
  r.normalization = scan("shs-normalization", pts,
                         [&](const Point& p) { return std::abs(pairing.value(p) - 1.0); },
                         tol, 0);
  return r;
}

StabilizingReport check_stabilizing(const OneForm& nu, const VectorField& X,
                                    const std::vector<Point>& pts, double tol) {
  using namespace chartcalc;
  const OneForm ixdnu = interior_product(X, exterior_derivative(nu));
  const ScalarField pairing = interior_product(X, nu);
  StabilizingReport r;
  r.closure = scan("stabilizing-closure", pts,
                   [&](const Point& p) { return form_norm(ixdnu, p); }, tol, 0);
  r.min_pairing = std::numeric_limits<double>::infinity();
  for (const Point& p : pts) r.min_pairing = std::min(r.min_pairing, pairing.value(p));
  r.ok = r.closure.pass() && r.min_pairing > 0;
  return r;
}

double bernoulli(const ModelSolution& sol, const Point& pt) {
  if (!sol.metric || !sol.pressure)
    throw std::invalid_argument("bernoulli: needs metric and pressure");
  const Vec3 x = sol.X.value(pt);
  const double x2 = dot(x, sol.metric->value(pt) * x);
  return sol.pressure->value(pt) + 0.5 * x2;
}

Rescaled rescale_to_reeb(const ModelSolution& sol, const OneForm& nu,
                         const std::vector<Point>& pts) {
  const StabilizingReport s = check_stabilizing(nu, sol.X, pts);
  if (!s.ok) throw std::domain_error("rescale_to_reeb: nu is not stabilizing");
  using namespace chartcalc;
  const ScalarField pairing = interior_product(sol.X, nu);
  std::vector<std::array<Expr, 3>> comps;
  for (int c = 0; c < sol.X.num_charts(); ++c) {
    const auto& x = sol.X.comps(c);
    comps.push_back({x[0] / pairing.expr(c), x[1] / pairing.expr(c), x[2] / pairing.expr(c)});
  }
  Rescaled r;
  r.X = VectorField(std::move(comps));
  r.lambda = nu;
  r.omega = interior_product(sol.X, sol.mu);
  return r;
}

chartcalc::MetricField metric_from_pairing(const OneForm& lambda, const VectorField& X,
                                           const std::vector<Point>& pts) {
  using namespace chartcalc;
  const ScalarField pairing = interior_product(X, lambda);
  for (const Point& p : pts)
    if (pairing.value(p) <= 0)
      throw std::domain_error("metric_from_pairing: lambda(X) not positive at a sample");
  return pairing_metric(lambda, X);
}

}  // namespace verify
