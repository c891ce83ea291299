#ifndef EULAB_CHARTCALC_OPS_HPP
#define EULAB_CHARTCALC_OPS_HPP

#include "chartcalc/fields.hpp"

namespace chartcalc {

// Exterior derivative, chart-wise symbolic.
OneForm exterior_derivative(const ScalarField& f);
TwoForm exterior_derivative(const OneForm& a);
ThreeForm exterior_derivative(const TwoForm& w);
// Degree-3 input has no exterior derivative in dimension 3.
[[noreturn]] void exterior_derivative(const ThreeForm&);

ScalarField interior_product(const VectorField& X, const OneForm& a);
OneForm interior_product(const VectorField& X, const TwoForm& w);
TwoForm interior_product(const VectorField& X, const ThreeForm& mu);

// i_X g, the metric dual 1-form of X.
OneForm musical_flat(const MetricField& g, const VectorField& X);

// curl defined by d(i_X g) = i_{curl X} mu.
VectorField curl(const MetricField& g, const ThreeForm& mu, const VectorField& X);

// cross product defined by i_{X x Y} g = i_Y i_X mu.
VectorField cross(const MetricField& g, const ThreeForm& mu, const VectorField& X,
                  const VectorField& Y);

// divergence defined by L_X mu = (div X) mu.
ScalarField divergence(const ThreeForm& mu, const VectorField& X);

// Levi-Civita covariant derivative (nabla_X Y) at a point.
Vec3 covariant_derivative(const MetricField& g, const VectorField& X,
                          const VectorField& Y, const Point& pt);

// Metric gradient: flat(gradient f) = df.
VectorField gradient(const MetricField& g, const ScalarField& f);

// Central-difference jet of a scalar field; test oracle only.
Jet fd_jet(const ScalarField& f, const Point& pt, double step);

// Symbolic metric with i_X g = lambda: g = (lambda lambda^T)/lambda(X) + P^T P
// with P = I - X lambda^T / lambda(X). Positive definite wherever lambda(X)>0.
MetricField pairing_metric(const OneForm& lambda, const VectorField& X);

// Symbolic inverse metric entries (used by gradient/cross).
std::array<Expr, 6> inverse_metric_coeffs(const std::array<Expr, 6>& g);

}  // namespace chartcalc

#endif
