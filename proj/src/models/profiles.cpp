#include "models/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace models {

using core::PiecewisePoly;

void CutoffProfile::validate() const {
  if (eps <= 0) throw std::invalid_argument("CutoffProfile: eps must be positive");
  if (std::abs(chi(0.0)) > 1e-12 || std::abs(chi(eps) - 1.0) > 1e-12)
    throw std::invalid_argument("CutoffProfile: end values must be 0 and 1");
  const PiecewisePoly d = chi.derivative();
  if (d.min_on_grid(4096) < -1e-10)
    throw std::invalid_argument("CutoffProfile: not monotone");
  // flat intervals at both ends
  if (std::abs(chi(eps / 12.0)) > 1e-12 || std::abs(chi(eps * 11.0 / 12.0) - 1.0) > 1e-12)
    throw std::invalid_argument("CutoffProfile: missing flat end intervals");
}

CutoffProfile default_cutoff(double eps, int order) {
  if (eps <= 0) throw std::invalid_argument("default_cutoff: eps must be positive");
  if (order != 5) throw std::invalid_argument("default_cutoff: only the quintic blend is built in");
  PiecewisePoly p = PiecewisePoly::constant(0.0, eps / 3.0, 0.0)
                        .concat(PiecewisePoly::smoothstep(eps / 3.0, 2.0 * eps / 3.0, 0.0, 1.0))
                        .concat(PiecewisePoly::constant(2.0 * eps / 3.0, eps, 1.0));
  CutoffProfile c{std::move(p), eps, order};
  c.validate();
  return c;
}

PiecewisePoly rise_overshoot_fall(double lo, double hi, double T1, double T2) {
  if (T1 <= 0 || T2 <= 0) throw std::invalid_argument("rise_overshoot_fall: values must be positive");
  const double w = hi - lo;
  const double peak = std::max(T1, T2) + 1.0;
  auto at = [&](double t) { return lo + t * w; };
  return PiecewisePoly::constant(lo, at(0.15), T1)
      .concat(PiecewisePoly::smoothstep(at(0.15), at(0.45), T1, peak))
      .concat(PiecewisePoly::constant(at(0.45), at(0.55), peak))
      .concat(PiecewisePoly::smoothstep(at(0.55), at(0.85), peak, T2))
      .concat(PiecewisePoly::constant(at(0.85), hi, T2));
}

PiecewisePoly interior_bump(double lo, double hi) {
  const double w = hi - lo;
  auto at = [&](double t) { return lo + t * w; };
  return PiecewisePoly::constant(lo, at(0.2), 0.0)
      .concat(PiecewisePoly::smoothstep(at(0.2), at(0.4), 0.0, 1.0))
      .concat(PiecewisePoly::constant(at(0.4), at(0.6), 1.0))
      .concat(PiecewisePoly::smoothstep(at(0.6), at(0.8), 1.0, 0.0))
      .concat(PiecewisePoly::constant(at(0.8), hi, 0.0));
}

PiecewisePoly make_balanced_gfun(const PiecewisePoly& b, double T1, double T2) {
  const double lo = b.lo(), hi = b.hi();
  if (std::abs(b(lo) - T1) > 1e-12 || std::abs(b(hi) - T2) > 1e-12)
    throw std::invalid_argument("make_balanced_gfun: b does not match the boundary values");
  const PiecewisePoly db = b.derivative();
  const PiecewisePoly base =
      T1 == T2 ? PiecewisePoly::constant(lo, hi, 1.0 / T1)
               : PiecewisePoly::constant(lo, lo + 0.15 * (hi - lo), 1.0 / T1)
                     .concat(PiecewisePoly::smoothstep(lo + 0.15 * (hi - lo),
                                                       hi - 0.15 * (hi - lo), 1.0 / T1,
                                                       1.0 / T2))
                     .concat(PiecewisePoly::constant(hi - 0.15 * (hi - lo), hi, 1.0 / T2));
  const double I0 = (base * db).integral(lo, hi);
  if (std::abs(I0) < 1e-14) return base;

  if (db.min_on_grid(4096) > -1e-12 || db.max_on_grid(4096) < 1e-12)
    throw std::invalid_argument("make_balanced_gfun: b' does not change sign, no balanced profile");

  // Place a bump where b' has the sign that cancels I0, then grow its weight.
  const double w = hi - lo;
  const PiecewisePoly bump = I0 > 0 ? interior_bump(lo + 0.55 * w, lo + 0.85 * w)
                                    : interior_bump(lo + 0.15 * w, lo + 0.45 * w);
  const PiecewisePoly extended = PiecewisePoly::constant(lo, bump.lo(), 0.0)
                                     .concat(bump)
                                     .concat(PiecewisePoly::constant(bump.hi(), hi, 0.0));
  const PiecewisePoly weighted = base * extended;
  const double I1 = (weighted * db).integral(lo, hi);
  if (std::abs(I1) < 1e-14)
    throw std::invalid_argument("make_balanced_gfun: bump has no leverage on the balance integral");

  auto balance = [&](double s) { return I0 + s * I1; };
  double s_lo = 0.0, s_hi = -I0 / I1;
  if (s_hi < 0) throw std::logic_error("make_balanced_gfun: bump sign mismatch");
  s_hi *= 2.0;
  for (int it = 0; it < 200 && s_hi - s_lo > 0; ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    if ((balance(mid) > 0) == (balance(s_lo) > 0))
      s_lo = mid;
    else
      s_hi = mid;
    if (s_hi - s_lo < 1e-16 * (1.0 + s_hi)) break;
  }
  const double s = 0.5 * (s_lo + s_hi);
  PiecewisePoly g = base + weighted * s;
  if (g.min_on_grid(1 << 14) <= 0)
    throw std::runtime_error("make_balanced_gfun: positivity lost");
  if (std::abs((g * db).integral(lo, hi)) > 1e-12)
    throw std::runtime_error("make_balanced_gfun: balance integral not met");
  return g;
}

}  // namespace models
