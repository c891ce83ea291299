#ifndef EULAB_STABILIZE_STABILIZE_HPP
#define EULAB_STABILIZE_STABILIZE_HPP

#include <stdexcept>
#include <vector>

#include "models/catalog.hpp"
#include "models/profiles.hpp"

namespace stabilize {

using chartcalc::OneForm;
using chartcalc::Point;
using chartcalc::ScalarField;
using chartcalc::VectorField;
using core::Vec3;

// Chart box [a,b] x T^2 in axes (r, theta, z) on which the toolbox operates.
struct RegionBox {
  double a = 0, b = 1;
};

// Raised when a 1-form on the region has nonvanishing torus periods and
// therefore no primitive.
struct CohomologyObstruction : std::runtime_error {
  double period_theta, period_z;
  CohomologyObstruction(double pt, double pz)
      : std::runtime_error("nonzero torus periods: no primitive exists"),
        period_theta(pt),
        period_z(pz) {}
};

// Primitive g with dg = delta, built by line integrals from (a,0,0). Requires
// d(delta) = 0 and vanishing torus periods; path independence is spot-checked
// on random loops. The result carries delta as its declared gradient, so
// downstream exterior derivatives are exact.
ScalarField find_primitive(const OneForm& delta, const RegionBox& box);

// nu0 + d(phi(r) g) where dg = nu1 - nu0; closed, equals nu0 near r=a and nu1
// near r=b.
OneForm interpolate_closed(const OneForm& nu0, const OneForm& nu1,
                           const core::PiecewisePoly& phi_cut, const RegionBox& box);

// Coefficient-wise average over the torus directions; a projection.
OneForm torus_average(const OneForm& nu, const RegionBox& box);

// (1/(d_gamma * z_period)) dz in tubular coordinates where the core orbit is
// {0} x S^1; requires X positively transverse to the fibers' dual.
OneForm normalized_orbit_form(const VectorField& X, int d_gamma,
                              const std::vector<Point>& pts, double z_period = 1.0);

struct ObservationO {
  double spread = 0;                  // max - min of the fiber integrals
  double precondition_residual = 0;   // max |i_X d(nu)| over the samples
  std::vector<double> integrals;
};

// Fiber integrals of nu over {p} x S^1 (the z-circles) for each base sample.
ObservationO verify_observation_O(const OneForm& nu, const VectorField& X,
                                  const RegionBox& box, int base_samples = 100);

// The closed coordinate form dx, which descends to the quotient and pairs to 1
// with the generator field.
OneForm stabilizer_for_klein(const models::ModelSolution& model);

}  // namespace stabilize

#endif
