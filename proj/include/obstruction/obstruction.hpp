#ifndef EULAB_OBSTRUCTION_OBSTRUCTION_HPP
#define EULAB_OBSTRUCTION_OBSTRUCTION_HPP

#include <array>
#include <string>
#include <vector>

#include "core/rational.hpp"
#include "json.hpp"
#include "models/catalog.hpp"

namespace obstruction {

using chartcalc::OneForm;
using chartcalc::Point;
using core::Rational;

enum class FeasibilityKind { infeasible_nonzero_c, one_parameter_family, trivial_all };

const char* feasibility_kind_name(FeasibilityKind k);

// Exact solution set of the homogeneous system
//   c (T2-T1) - fiber_coeff F = 0
//   c (T4-T3) - fiber_coeff F = 0
// in the unknowns (c, F). A stabilizing form in the ansatz needs c != 0, so
// infeasible_nonzero_c certifies the obstruction.
struct FeasibilityCertificate {
  std::array<Rational, 4> T;
  int fiber_coeff = 2;
  std::array<std::array<Rational, 2>, 2> system;  // rows (difference, -fiber_coeff)
  FeasibilityKind kind = FeasibilityKind::trivial_all;
  Rational witness;       // (T2-T1) - (T4-T3)
  Rational family_slope;  // F/c on the solution line when c is free

  nlohmann::json to_json() const;
};

FeasibilityCertificate gluing_feasibility(const std::array<Rational, 4>& T,
                                          int fiber_coeff = 2);
FeasibilityCertificate gluing_feasibility(const std::array<double, 4>& T,
                                          int fiber_coeff = 2);

// Independent route: exact Gaussian elimination kernel of the 2x2 system.
FeasibilityKind feasibility_by_kernel(const std::array<Rational, 4>& T, int fiber_coeff = 2);

// Constant homology table for the genus-5 chain construction.
struct HomologyData {
  // relation [gamma_2] = [gamma_1] + a12 [F], likewise for (3,4), and the
  // boundary relation on the primed curves
  int a12 = -2;
  int a34 = -2;
  std::string boundary_relation = "[g2'] - [g1'] + 2[F] = [g3'] - [g4'] + 2[F] = 0";
  int genus = 5;

  nlohmann::json to_json() const;
};

struct AnsatzFit {
  double c = 0;
  double closed_defect = 0;  // max |d(nu) - c d(lambda)| over the samples
};

// Least-squares fit of d(nu) = c d(lambda) over sample points; the defect
// measures how far nu - c lambda is from closed.
AnsatzFit ansatz_decompose(const OneForm& nu, const OneForm& lambda,
                           const std::vector<Point>& pts);

struct CriticalScan {
  int n_points = 0;
  double max_chi = 0;        // max chi(r^2) over critical points
  double max_value_dev = 0;  // max |H - T0|
  double min_term = 0;       // min over grid of the two nonnegative terms
  bool ok = false;
};

// Confirms the critical set of H_chi sits inside {chi = 0} at level T0, via
// the identity 0 = (y^2-x^2)^2 chi'(r^2) + r^2 chi(r^2) at critical points.
CriticalScan critical_set_scan(double T0, const models::CutoffProfile& chi, int grid = 512);

// Full pipeline: build the glued model, residuals, fiber-integral spreads,
// feasibility certificate, homology table.
nlohmann::json counterexample_report(const std::array<double, 4>& T, double delta = 0.1,
                                     int samples = 2000);

}  // namespace obstruction

#endif
