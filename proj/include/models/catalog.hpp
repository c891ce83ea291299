#ifndef EULAB_MODELS_CATALOG_HPP
#define EULAB_MODELS_CATALOG_HPP

#include <array>
#include <optional>

#include "chartcalc/fields.hpp"
#include "core/linalg.hpp"
#include "models/atlas.hpp"
#include "models/profiles.hpp"

namespace models {

using chartcalc::MetricField;
using chartcalc::OneForm;
using chartcalc::ScalarField;
using chartcalc::ThreeForm;
using chartcalc::TwoForm;
using chartcalc::VectorField;

struct ModelSolution {
  Atlas atlas;
  VectorField X;
  OneForm lambda;
  TwoForm omega;
  ThreeForm mu;
  std::optional<MetricField> metric;
  ScalarField bernoulli;
  std::optional<ScalarField> pressure;
  std::string name;
};

// Mapping torus of (y,z) |-> (-y,-z) with X = d/dx, lambda = h(z) dx,
// omega = dy^dz, mu = dx^dy^dz, g = h dx^2 + dy^2 + h^{-1} dz^2.
// h must be positive, even, and 1-periodic.
ModelSolution klein_mapping_torus(const core::Expr& h_of_z);

// Same manifold and metric but with the triple lambda = h(z) dz,
// omega = dx^dy, p = h'(z)/2. This variant does not solve the equations;
// it exists so the residual checker can demonstrate the failure.
ModelSolution klein_dz_variant(const core::Expr& h_of_z);

// Pullback of the Klein model under the double cover T^3 -> M,
// (x,y,z) |-> [2x,y,z]. A solution on the 3-torus.
ModelSolution klein_double_cover(const core::Expr& h_of_z);

// Mapping torus of (y,z) |-> (y+l z, z) (reflect=false) or
// (y,z) |-> (-y+l z, -z) (reflect=true). l=0 with reflect reproduces the
// Klein model exactly.
ModelSolution shear_mapping_torus(int l, bool reflect, const core::Expr& h_of_z);

Point normalize_point(const Atlas& atlas, const Vec3& raw, int chart = 0);

// S^1-invariant contact form lambda = H(x,y) dz + lambda_D on D x S^1,
// together with its Reeb field. lambda_D = A dx + B dy with
// c = dB/dx - dA/dy > 0 on the disk of radius r_max.
ModelSolution solid_torus_invariant_contact(const core::Expr& H, const core::Expr& A,
                                            const core::Expr& B, double r_max);

// The normal form H = T0 + y^2 - x^2 with lambda_D = (r^2/2) dphi on the disk
// r^2 <= eps.
ModelSolution standardized_orbit_neighborhood(double T0, double eps);

// H replaced by H_chi = T0 + chi(r^2) (y^2 - x^2).
ModelSolution modified_contact(double T0, const CutoffProfile& chi);

// Extension data on [lo, lo+1] x T^2: lambda = b(s) dz + a(s) dphi,
// X = gfun(s) d/dz, bernoulli h(s) = int_lo^s gfun b'.
struct ExtensionTriple {
  ModelSolution sol;
  core::PiecewisePoly b, gfun, h, a;
  double T_left = 0, T_right = 0;
};

ExtensionTriple extension_profile(const core::PiecewisePoly& b,
                                  const core::PiecewisePoly& gfun,
                                  double r_left = 0.3, double r_right = 0.3);

struct GluedCounterexample {
  std::array<double, 4> T{};
  double delta = 0.1;
  std::array<double, 4> r_core{};
  ExtensionTriple region12;  // chart with s in [1,2]
  ExtensionTriple region34;  // chart with s in [3,4]
  ModelSolution solution;    // both charts combined
  std::array<ModelSolution, 4> cores;
  AffineMap glue12, glue34;  // collar maps in annulus (r,phi,z) coordinates
  TwoForm annulus_area;      // dr^dphi on the collars
};

GluedCounterexample glued_counterexample(
    const std::array<double, 4>& T, double delta = 0.1,
    const std::array<double, 4>& r_core = {0.3, 0.3, 0.3, 0.3},
    const std::array<CutoffProfile, 4>* chi = nullptr,
    bool allow_equal_differences = false);

// Geodesic period of a hyperbolic element of SL(2,R): 2 arccosh(|trace|/2).
double mobius_translation_length(const core::Mat2& m);

}  // namespace models

#endif
