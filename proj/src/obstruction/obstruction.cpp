#include "obstruction/obstruction.hpp"

#include <cmath>
#include <stdexcept>

#include "chartcalc/ops.hpp"
#include "flowlab/poincare.hpp"
#include "stabilize/stabilize.hpp"
#include "verify/residuals.hpp"

namespace obstruction {

using core::Expr;
using core::Vec3;

const char* feasibility_kind_name(FeasibilityKind k) {
  switch (k) {
    case FeasibilityKind::infeasible_nonzero_c: return "infeasible_nonzero_c";
    case FeasibilityKind::one_parameter_family: return "one_parameter_family";
    case FeasibilityKind::trivial_all: return "trivial_all";
  }
  return "unknown";
}

nlohmann::json FeasibilityCertificate::to_json() const {
  auto rat = [](const Rational& r) {
    return nlohmann::json{{"num", r.num}, {"den", r.den}, {"value", r.to_double()}};
  };
  return {{"T", {rat(T[0]), rat(T[1]), rat(T[2]), rat(T[3])}},
          {"fiber_coeff", fiber_coeff},
          {"system",
           {{rat(system[0][0]), rat(system[0][1])}, {rat(system[1][0]), rat(system[1][1])}}},
          {"kind", feasibility_kind_name(kind)},
          {"witness", rat(witness)},
          {"family_slope", rat(family_slope)}};
}

nlohmann::json HomologyData::to_json() const {
  return {{"genus", genus},
          {"relation_12", {{"coeff_F", a12}}},
          {"relation_34", {{"coeff_F", a34}}},
          {"boundary_relation", boundary_relation}};
}

FeasibilityCertificate gluing_feasibility(const std::array<Rational, 4>& T,
                                          int fiber_coeff) {
  for (const auto& t : T)
    if (t.to_double() <= 0)
      throw std::invalid_argument("gluing_feasibility: periods must be positive");
  if (fiber_coeff == 0)
    throw std::invalid_argument("gluing_feasibility: fiber coefficient must be nonzero");
  FeasibilityCertificate cert;
  cert.T = T;
  cert.fiber_coeff = fiber_coeff;
  const Rational d12 = T[1] - T[0];
  const Rational d34 = T[3] - T[2];
  const Rational f(-fiber_coeff);
  cert.system = {{{d12, f}, {d34, f}}};
  cert.witness = d12 - d34;
  if (!cert.witness.is_zero()) {
    cert.kind = FeasibilityKind::infeasible_nonzero_c;
  } else if (!d12.is_zero()) {
    cert.kind = FeasibilityKind::one_parameter_family;
    cert.family_slope = d12 / Rational(fiber_coeff);
  } else {
    cert.kind = FeasibilityKind::trivial_all;
  }
  return cert;
}

namespace {

Rational rational_from_double(double x) {
  if (x == std::floor(x) && std::abs(x) < 1e15)
    return Rational(static_cast<std::int64_t>(x));
  // continued-fraction convergents
  double v = x;
  std::int64_t p0 = 1, q0 = 0, p1 = static_cast<std::int64_t>(std::floor(v)), q1 = 1;
  double frac = v - std::floor(v);
  for (int i = 0; i < 40; ++i) {
    if (std::abs(x - static_cast<double>(p1) / q1) < 1e-12 * std::max(1.0, std::abs(x)))
      return Rational(p1, q1);
    if (frac < 1e-15) break;
    v = 1.0 / frac;
    const double ai = std::floor(v);
    frac = v - ai;
    const std::int64_t a = static_cast<std::int64_t>(ai);
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (q1 > 1000000000LL) break;
  }
  return Rational(p1, q1);
}

}  // namespace

FeasibilityCertificate gluing_feasibility(const std::array<double, 4>& T, int fiber_coeff) {
  return gluing_feasibility(
      std::array<Rational, 4>{rational_from_double(T[0]), rational_from_double(T[1]),
                              rational_from_double(T[2]), rational_from_double(T[3])},
      fiber_coeff);
}

FeasibilityKind feasibility_by_kernel(const std::array<Rational, 4>& T, int fiber_coeff) {
  // exact Gaussian elimination of the homogeneous 2x2 system in (c, F)
  std::array<std::array<Rational, 2>, 2> M{
      {{T[1] - T[0], Rational(-fiber_coeff)}, {T[3] - T[2], Rational(-fiber_coeff)}}};
  int rank = 0;
  for (int col = 0; col < 2 && rank < 2; ++col) {
    int pivot = -1;
    for (int r = rank; r < 2; ++r)
      if (!M[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(M[rank], M[pivot]);
    for (int r = 0; r < 2; ++r) {
      if (r == rank || M[r][col].is_zero()) continue;
      const Rational factor = M[r][col] / M[rank][col];
      for (int cc = 0; cc < 2; ++cc) M[r][cc] = M[r][cc] - factor * M[rank][cc];
    }
    ++rank;
  }
  if (rank == 2) return FeasibilityKind::infeasible_nonzero_c;
  // rank 1: kernel is a line; does it contain a vector with c != 0?
  // after elimination the single nonzero row is a1 c + a2 F = 0
  const auto& row = M[0][0].is_zero() && M[0][1].is_zero() ? M[1] : M[0];
  if (row[0].is_zero()) {
    // c unconstrained, F = 0
    return FeasibilityKind::trivial_all;
  }
  return FeasibilityKind::one_parameter_family;
}

AnsatzFit ansatz_decompose(const OneForm& nu, const OneForm& lambda,
                           const std::vector<Point>& pts) {
  using namespace chartcalc;
  const TwoForm dnu = exterior_derivative(nu);
  const TwoForm dl = exterior_derivative(lambda);
  double num = 0, den = 0;
  for (const Point& p : pts) {
    const Vec3 a = dnu.proxy(p);
    const Vec3 b = dl.proxy(p);
    num += dot(a, b);
    den += dot(b, b);
  }
  if (den < 1e-18)
    throw std::domain_error("ansatz_decompose: d(lambda) vanishes on the sample set");
  AnsatzFit fit;
  fit.c = num / den;
  for (const Point& p : pts)
    fit.closed_defect =
        std::max(fit.closed_defect, core::norm(dnu.proxy(p) - dl.proxy(p) * fit.c));
  return fit;
}

CriticalScan critical_set_scan(double T0, const models::CutoffProfile& chi, int grid) {
  // no validate() here: degenerate profiles (e.g. chi identically 1) are legal
  // inputs whose failing scan is itself informative
  const Expr x = Expr::var(0), y = Expr::var(1);
  const Expr r2 = x * x + y * y;
  const Expr H = Expr::constant(T0) + Expr::profile(chi.chi, r2) * (y * y - x * x);
  const double r_max = std::sqrt(chi.eps);
  // tight gradient tolerance: in the flat disk the gradient vanishes exactly,
  // while near-plateau stalls with chi ~ 1e-10 must not be accepted
  const auto crit = flowlab::critical_points(chartcalc::ScalarField(H), r_max, grid, 1e-13);

  const core::PiecewisePoly dchi = chi.chi.derivative();
  CriticalScan scan;
  scan.n_points = static_cast<int>(crit.size());
  scan.min_term = 0;
  for (const auto& c : crit) {
    const double rr = c.x * c.x + c.y * c.y;
    const double cv = chi.chi(rr);
    const double hv = T0 + cv * (c.y * c.y - c.x * c.x);
    scan.max_chi = std::max(scan.max_chi, std::abs(cv));
    scan.max_value_dev = std::max(scan.max_value_dev, std::abs(hv - T0));
    const double t1 = std::pow(c.y * c.y - c.x * c.x, 2) * dchi(rr);
    const double t2 = rr * cv;
    scan.min_term = std::min({scan.min_term, t1, t2});
  }
  scan.ok = scan.n_points > 0 && scan.max_chi < 1e-12 && scan.max_value_dev < 1e-9 &&
            scan.min_term >= -1e-14;
  return scan;
}

nlohmann::json counterexample_report(const std::array<double, 4>& T, double delta,
                                     int samples) {
  nlohmann::json report;
  std::string stage = "build";
  try {
    const models::GluedCounterexample g = models::glued_counterexample(
        T, delta, {0.3, 0.3, 0.3, 0.3}, nullptr, /*allow_equal_differences=*/true);
    report["params"] = {{"T", {T[0], T[1], T[2], T[3]}},
                        {"delta", delta},
                        {"r_core", {g.r_core[0], g.r_core[1], g.r_core[2], g.r_core[3]}},
                        {"samples", samples}};

    stage = "residuals";
    const auto pts = verify::sample_points(g.solution, samples);
    report["residuals"] = nlohmann::json::array();
    for (auto eq : {verify::EulerEq::momentum, verify::EulerEq::curlform,
                    verify::EulerEq::dualform, verify::EulerEq::volume})
      report["residuals"].push_back(verify::euler_residuals(g.solution, pts, eq).to_json());
    double min_pairing = std::numeric_limits<double>::infinity();
    for (const auto& p : pts)
      min_pairing = std::min(min_pairing, g.solution.lambda.pair(p, g.solution.X.value(p)));
    report["lambda_X_min"] = min_pairing;

    stage = "observation_O";
    const OneForm dz{{Expr::constant(0), Expr::constant(0), Expr::constant(1)}};
    auto obs = [&](const models::ExtensionTriple& t, double lo, double hi) {
      const auto o = stabilize::verify_observation_O(dz, t.sol.X,
                                                    stabilize::RegionBox{lo, hi}, 100);
      return nlohmann::json{{"spread", o.spread},
                            {"precondition_residual", o.precondition_residual}};
    };
    report["observation_O"] = {{"M12", obs(g.region12, 1, 2)}, {"M34", obs(g.region34, 3, 4)}};

    stage = "certificate";
    report["certificate"] = gluing_feasibility(T).to_json();
    report["homology"] = HomologyData{}.to_json();
  } catch (const std::exception& e) {
    throw std::runtime_error("counterexample_report[" + stage + "]: " + e.what());
  }
  return report;
}

}  // namespace obstruction
