#ifndef EULAB_FLOWLAB_INTEGRATE_HPP
#define EULAB_FLOWLAB_INTEGRATE_HPP

#include <functional>
#include <ostream>
#include <vector>

#include "models/catalog.hpp"

namespace flowlab {

using chartcalc::Point;
using chartcalc::VectorField;
using core::Vec3;
using models::Atlas;

// One accepted Runge-Kutta step with its dense-output data.
struct DenseStep {
  double t0 = 0, h = 0;
  std::vector<double> y0;
  std::vector<double> cont2, cont3, cont4, cont5;  // interpolant coefficients
  std::vector<double> eval(double t) const;        // t in [t0, t0+h]
};

// Generic adaptive 5th-order integrator (Dormand-Prince pair) with dense
// output. Used directly for augmented variational systems and wrapped below
// for orbits.
struct Dopri5 {
  std::function<void(double, const std::vector<double>&, std::vector<double>&)> rhs;
  double rtol = 1e-10;
  double atol = 1e-12;
  bool store_dense = true;

  std::vector<DenseStep> steps;
  std::vector<double> y;
  double t = 0;

  void init(double t0, std::vector<double> y0);
  // Advances to exactly t_end.
  void run(double t_end);
  // Single fixed-size step, no error control (order measurement harness).
  void fixed_step(double h);
};

// Orbit of a vector field in covering coordinates of one chart. Catalog field
// expressions are deck-equivariant, so integration never needs to renormalize;
// normalized points are produced for output and section logic.
struct OrbitSegment {
  int chart = 0;
  double tol = 0;
  bool escaped = false;  // orbit left the atlas; data truncated at the exit
  std::vector<double> times;
  std::vector<Vec3> raw;       // covering coordinates at step ends
  std::vector<Point> points;   // normalized representatives
  std::vector<DenseStep> steps;

  Vec3 raw_at(double t) const;
};

OrbitSegment integrate(const VectorField& X, const Atlas& atlas, const Point& p0,
                       double t_final, double tol = 1e-10);

// Fixed-step endpoint in covering coordinates; convergence-order harness.
Vec3 integrate_fixed_endpoint(const VectorField& X, const Point& p0, double t_final,
                              int nsteps);

void dump_orbit_csv(const OrbitSegment& seg, std::ostream& os);

}  // namespace flowlab

#endif
