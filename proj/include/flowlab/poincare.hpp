#ifndef EULAB_FLOWLAB_POINCARE_HPP
#define EULAB_FLOWLAB_POINCARE_HPP

#include <complex>
#include <vector>

#include "flowlab/integrate.hpp"
#include "json.hpp"

namespace flowlab {

using core::Mat2;

// Transverse section {u[axis] = value mod period} in one chart. `deck` is the
// linear action on the two transverse coordinates applied when a crossing
// wraps through an identification (identity for plain torus wraps, the
// monodromy block inverse for mapping tori).
struct SectionMap {
  int chart = 0;
  int axis = 2;
  double value = 0;
  double period = 1;
  Mat2 deck = Mat2::identity();
  std::array<bool, 2> transverse_periodic{true, true};
  double time_cap = 1e3;

  std::array<int, 2> transverse_axes() const {
    return axis == 0 ? std::array<int, 2>{1, 2}
                     : (axis == 1 ? std::array<int, 2>{0, 2} : std::array<int, 2>{0, 1});
  }
};

struct ReturnResult {
  Point point;        // normalized first-return point
  Vec3 raw;           // covering-coordinate hit
  double return_time = 0;
};

// First return of the forward orbit to the section; crossing time located to
// 1e-12 by bisection plus Newton on the dense interpolant.
ReturnResult poincare_map(const VectorField& X, const Atlas& atlas,
                          const SectionMap& section, const Point& w);

enum class OrbitClass { elliptic, hyperbolic, degenerate };

OrbitClass classify_monodromy(const Mat2& return_matrix, double tol = 1e-9);
OrbitClass classify_hessian(const Mat2& S, double tol = 1e-9);

const char* orbit_class_name(OrbitClass k);

struct PeriodicOrbit {
  Point base;
  double period = 0;
  Mat2 return_matrix;
  std::array<std::complex<double>, 2> multipliers;
  OrbitClass klass = OrbitClass::degenerate;
  int covering_number = 1;

  nlohmann::json to_json() const;
};

// Newton solve of the return-map fixed-point equation starting from `guess`,
// then monodromy, multipliers and classification.
PeriodicOrbit find_periodic(const VectorField& X, const Atlas& atlas,
                            const SectionMap& section, const Point& guess,
                            int max_iter = 30, double tol = 1e-10);

// Transverse monodromy over one return: variational integration along the
// orbit, projected onto the section along the flow, then the deck action.
Mat2 linearized_return(const VectorField& X, const Atlas& atlas, const SectionMap& section,
                       const Point& base);

// Same matrix by central differences of the return map; oracle.
Mat2 linearized_return_fd(const VectorField& X, const Atlas& atlas,
                          const SectionMap& section, const Point& base, double step = 1e-6);

struct RotationNumber {
  double value = 0;
  bool vertical = false;  // direction (0, b): slope is infinite
  bool rational = false;
  long long p = 0, q = 1;  // convergent used when rational
};

RotationNumber rotation_number(double a, double b, long long denominator_cap = 1000000);

// Orbit structure of the rotation i -> i+p on m arcs: n orbits, each of length d.
std::pair<int, int> arc_permutation_covering(int m, int p);

struct CriticalPoint {
  double x = 0, y = 0;
  Mat2 hessian;
  OrbitClass klass = OrbitClass::degenerate;
};

// Grid-seeded Newton on grad H over the disk of radius r_max (H read in the
// (x, y) coordinates of the chart, z ignored).
std::vector<CriticalPoint> critical_points(const chartcalc::ScalarField& H, double r_max,
                                           int grid = 64, double tol = 1e-10);

}  // namespace flowlab

#endif
