#ifndef EULAB_CURRENTS_CURRENTS_HPP
#define EULAB_CURRENTS_CURRENTS_HPP

#include <array>
#include <ostream>
#include <string>

#include "core/poly.hpp"
#include "models/catalog.hpp"

namespace currents {

using chartcalc::OneForm;
using chartcalc::Point;
using chartcalc::VectorField;

// (a,d) x T^2 with X = rho(r) * (0, dir1, dir2) in chart axes (r, axis1, axis2)
// and the flow-invariant profile h(r) along for the drift identity.
struct IntegrableRegion {
  double a = 0, d = 1;
  std::array<double, 2> direction{0, 1};
  core::PiecewisePoly rho;
  core::PiecewisePoly h;
  VectorField X;  // rho(r) * direction, as expressions

  static IntegrableRegion make(double a, double d, const std::array<double, 2>& direction,
                               const core::PiecewisePoly& rho,
                               const core::PiecewisePoly& h);
};

IntegrableRegion region_from_extension(const models::ExtensionTriple& t);

// Largest mismatch between the region's synthetic X and an ambient field on a
// deterministic sample; the region invariant check.
double region_field_mismatch(const IntegrableRegion& region, const VectorField& ambient,
                             int n = 1000);

struct CurrentEstimate {
  double value = 0;
  std::string method;       // space_average | rational_orbit | birkhoff
  double horizon = 0;       // sample count or time horizon
  double error_bound = 0;   // empirical
  bool periodic_direction = false;
};

// Torus quadrature of alpha(Xbar) on {r} x T^2.
CurrentEstimate current_space_average(const OneForm& alpha, const IntegrableRegion& region,
                                      double r, int grid = 256);

// Average over the transversal of closed-orbit line integrals; requires a
// rational direction.
CurrentEstimate current_rational(const OneForm& alpha, const IntegrableRegion& region,
                                 double r, int transversal_samples = 256);

// Time average along the orbit through (r, 0, 0) up to the horizon, with a
// two-horizon empirical error bound.
CurrentEstimate current_birkhoff(const OneForm& alpha, const IntegrableRegion& region,
                                 double r, double horizon);

struct DriftCheck {
  double lhs = 0;   // c_{r2}(lambda) - c_{r1}(lambda)
  double rhs = 0;   // integral of h'(r)/rho(r)
  double diff = 0;
};

DriftCheck check_lambda_drift(const OneForm& lambda, const IntegrableRegion& region,
                              double r1, double r2);

struct BoundaryCurrents {
  double c_minus = 0;
  double c_plus = 0;
  bool matched = false;
};

BoundaryCurrents match_boundary_currents(const IntegrableRegion& region, const OneForm& nu,
                                         double tol = 1e-8, double margin = 1e-3);

void current_sweep_csv(const OneForm& alpha, const IntegrableRegion& region, int n,
                       std::ostream& os);

}  // namespace currents

#endif
