#ifndef EULAB_MODELS_PROFILES_HPP
#define EULAB_MODELS_PROFILES_HPP

#include "core/poly.hpp"

namespace models {

// Monotone cutoff [0, eps] -> [0, 1], flat near both ends. Smoothness comes
// from the quintic blend pieces (C^2).
struct CutoffProfile {
  core::PiecewisePoly chi;
  double eps = 1.0;
  int order = 5;

  double operator()(double s) const { return chi(s); }
  void validate() const;  // throws on non-monotone or bad end values
};

CutoffProfile default_cutoff(double eps, int order = 5);

// Profile on [lo, hi] equal to T1 near lo and T2 near hi, overshooting past
// max(T1, T2) in between so its derivative takes both signs.
core::PiecewisePoly rise_overshoot_fall(double lo, double hi, double T1, double T2);

// C^2 bump supported strictly inside (lo, hi), peak 1.
core::PiecewisePoly interior_bump(double lo, double hi);

// Positive profile with gfun = 1/T1 near lo, 1/T2 near hi, and
// integral of gfun * b' equal to zero (solved by bisection on a bump weight).
core::PiecewisePoly make_balanced_gfun(const core::PiecewisePoly& b, double T1, double T2);

}  // namespace models

#endif
