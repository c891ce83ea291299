#ifndef EULAB_VERIFY_RESIDUALS_HPP
#define EULAB_VERIFY_RESIDUALS_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "models/catalog.hpp"

namespace verify {

using chartcalc::OneForm;
using chartcalc::Point;
using chartcalc::TwoForm;
using chartcalc::VectorField;
using models::ModelSolution;

struct ResidualReport {
  std::string tag;
  double max_residual = 0;
  Point worst;
  int samples = 0;
  double tol = 1e-9;
  int seed = 0;

  bool pass() const { return max_residual < tol; }
  nlohmann::json to_json() const;
};

// Deterministic low-discrepancy sample points inside the atlas domain.
std::vector<Point> sample_points(const ModelSolution& sol, int n, int seed = 0);

enum class EulerEq { momentum, curlform, dualform, volume };

// Pointwise defect of one of the four stationary equations:
//   momentum  nabla_X X + grad p
//   curlform  curl X x X + grad h
//   dualform  i_X d(lambda) + dh
//   volume    L_X mu (as div X)
ResidualReport euler_residuals(const ModelSolution& sol, const std::vector<Point>& pts,
                               EulerEq which, double tol = 1e-9, int seed = 0);

struct ShsReport {
  ResidualReport closure;        // |i_X d(lambda)|
  ResidualReport kernel;         // |i_X omega|
  ResidualReport normalization;  // |lambda(X) - 1|
  double max() const;
  bool pass() const { return closure.pass() && kernel.pass() && normalization.pass(); }
};

ShsReport check_shs(const TwoForm& omega, const OneForm& lambda, const VectorField& X,
                    const std::vector<Point>& pts, double tol = 1e-9);

struct StabilizingReport {
  bool ok = false;
  ResidualReport closure;  // |i_X d(nu)|
  double min_pairing = 0;  // min nu(X)
};

StabilizingReport check_stabilizing(const OneForm& nu, const VectorField& X,
                                    const std::vector<Point>& pts, double tol = 1e-9);

double bernoulli(const ModelSolution& sol, const Point& pt);

struct Rescaled {
  VectorField X;
  OneForm lambda;
  TwoForm omega;
};

// X/nu(X) with the stable Hamiltonian pair (i_X mu, nu). Requires nu to pass
// the stabilizing check on the sample set.
Rescaled rescale_to_reeb(const ModelSolution& sol, const OneForm& nu,
                         const std::vector<Point>& pts);

// Metric with i_X g = lambda; rejects inputs with lambda(X) <= 0 at a sample.
chartcalc::MetricField metric_from_pairing(const OneForm& lambda, const VectorField& X,
                                           const std::vector<Point>& pts);

}  // namespace verify

#endif
