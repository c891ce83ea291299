#include "flowlab/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace flowlab {

using chartcalc::ScalarField;

namespace {

double wrap_half(double d) {
  d -= std::round(d);
  return d;
}

// Earliest crossing of u[axis] with a multiple of the section period inside a
// dense step; returns false if none.
bool step_crossing(const DenseStep& step, const SectionMap& sec,
                   const std::function<double(double)>& axis_speed, double t_min,
                   double& t_hit, double& level) {
  auto s_of = [&](double t) { return step.eval(t)[sec.axis] - sec.value; };
  const double t0 = std::max(step.t0, t_min);
  const double t1 = step.t0 + step.h;
  if (t1 <= t0) return false;
  const double s0 = s_of(t0), s1 = s_of(t1);
  const double per = sec.period;
  // candidate levels strictly after the start of the step
  double lo = std::min(s0, s1), hi = std::max(s0, s1);
  long long nlo = static_cast<long long>(std::ceil(lo / per - 1e-12));
  long long nhi = static_cast<long long>(std::floor(hi / per + 1e-12));
  double best = t1 + 1;
  double best_level = 0;
  for (long long n = nlo; n <= nhi; ++n) {
    const double L = n * per;
    if ((s0 - L) * (s1 - L) > 0) continue;
    if (std::abs(s0 - L) < 1e-12) continue;  // crossing at the step start
    double a = t0, b = t1;
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
      const double mid = 0.5 * (a + b);
      if ((s_of(a) - L) * (s_of(mid) - L) <= 0)
        b = mid;
      else
        a = mid;
    }
    double t = 0.5 * (a + b);
    for (int it = 0; it < 5; ++it) {
      const double f = s_of(t) - L;
      const double fp = axis_speed(t);
      if (fp == 0) break;
      const double tn = t - f / fp;
      if (tn >= t0 - 1e-12 && tn <= t1 + 1e-12) t = tn;
    }
    if (t < best) {
      best = t;
      best_level = L;
    }
  }
  if (best > t1) return false;
  t_hit = best;
  level = best_level;
  return true;
}

}  // namespace

ReturnResult poincare_map(const VectorField& X, const Atlas& atlas,
                          const SectionMap& section, const Point& w) {
  const Point start = atlas.normalize(w);
  if (start.chart != section.chart)
    throw std::invalid_argument("poincare_map: point not in the section chart");
  double t_offset = 0;
  Point cur = start;
  double chunk = 4.0;
  while (t_offset < section.time_cap) {
    const OrbitSegment seg =
        integrate(X, atlas, cur, std::min(chunk, section.time_cap - t_offset), 1e-12);
    auto speed = [&](double t) {
      const Vec3 u = seg.raw_at(t);
      return X.value(Point{seg.chart, u})[section.axis];
    };
    for (const DenseStep& step : seg.steps) {
      double t_hit, level;
      if (step_crossing(step, section, speed, t_offset == 0 ? 1e-10 : 0.0, t_hit, level)) {
        const Vec3 raw = seg.raw_at(t_hit);
        if (std::abs(speed(t_hit)) < 1e-6)
          throw std::runtime_error("poincare_map: tangential crossing");
        ReturnResult r;
        r.raw = raw;
        r.return_time = t_offset + t_hit;
        r.point = atlas.normalize(Point{seg.chart, raw});
        // pin the section coordinate exactly
        r.point.u[section.axis] = section.value;
        return r;
      }
    }
    if (seg.escaped)
      throw std::runtime_error("poincare_map: orbit left the atlas before returning");
    t_offset += seg.times.back();
    cur = seg.points.back();
    chunk = std::min(2 * chunk, 64.0);
  }
  throw std::runtime_error("poincare_map: no return within the time cap");
}

OrbitClass classify_monodromy(const Mat2& m, double tol) {
  const core::Eig2 e = core::eigenvalues(m);
  if (std::abs(e.im[0]) > tol) {
    const double mod = std::hypot(e.re[0], e.im[0]);
    return std::abs(mod - 1.0) < 1e-6 ? OrbitClass::elliptic : OrbitClass::degenerate;
  }
  const double big = std::max(std::abs(e.re[0]), std::abs(e.re[1]));
  return big > 1.0 + tol ? OrbitClass::hyperbolic : OrbitClass::degenerate;
}

OrbitClass classify_hessian(const Mat2& S, double tol) {
  const double d = S.det();
  if (d < -tol) return OrbitClass::hyperbolic;
  if (d > tol) return OrbitClass::elliptic;
  return OrbitClass::degenerate;
}

const char* orbit_class_name(OrbitClass k) {
  switch (k) {
    case OrbitClass::elliptic: return "elliptic";
    case OrbitClass::hyperbolic: return "hyperbolic";
    case OrbitClass::degenerate: return "degenerate";
  }
  return "unknown";
}

nlohmann::json PeriodicOrbit::to_json() const {
  return {{"base", {{"chart", base.chart}, {"u", {base.u[0], base.u[1], base.u[2]}}}},
          {"period", period},
          {"return_matrix",
           {{return_matrix[0][0], return_matrix[0][1]},
            {return_matrix[1][0], return_matrix[1][1]}}},
          {"multipliers",
           {{multipliers[0].real(), multipliers[0].imag()},
            {multipliers[1].real(), multipliers[1].imag()}}},
          {"class", orbit_class_name(klass)},
          {"covering_number", covering_number}};
}

namespace {

std::array<double, 2> transverse_of(const SectionMap& sec, const Point& p) {
  const auto ax = sec.transverse_axes();
  return {p.u[ax[0]], p.u[ax[1]]};
}

Point point_of(const SectionMap& sec, const std::array<double, 2>& w) {
  const auto ax = sec.transverse_axes();
  Point p;
  p.chart = sec.chart;
  p.u[sec.axis] = sec.value;
  p.u[ax[0]] = w[0];
  p.u[ax[1]] = w[1];
  return p;
}

std::array<double, 2> return_diff(const SectionMap& sec, const std::array<double, 2>& img,
                                  const std::array<double, 2>& base) {
  std::array<double, 2> d{img[0] - base[0], img[1] - base[1]};
  for (int i = 0; i < 2; ++i)
    if (sec.transverse_periodic[i]) d[i] = wrap_half(d[i]);
  return d;
}

}  // namespace

Mat2 linearized_return(const VectorField& X, const Atlas& atlas, const SectionMap& section,
                       const Point& base) {
  const Point p0 = atlas.normalize(base);
  const double T = poincare_map(X, atlas, section, p0).return_time;
  Dopri5 ode;
  ode.rtol = 1e-12;
  ode.atol = 1e-14;
  ode.store_dense = false;
  const int chart = p0.chart;
  ode.rhs = [&X, chart](double, const std::vector<double>& y, std::vector<double>& dy) {
    const Point p{chart, {y[0], y[1], y[2]}};
    const Vec3 v = X.value(p);
    const core::Mat3 J = X.jacobian(p);
    dy[0] = v[0];
    dy[1] = v[1];
    dy[2] = v[2];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += J[i][k] * y[3 + 3 * k + j];
        dy[3 + 3 * i + j] = s;
      }
  };
  std::vector<double> y0{p0.u[0], p0.u[1], p0.u[2], 1, 0, 0, 0, 1, 0, 0, 0, 1};
  ode.init(0.0, std::move(y0));
  ode.run(T);

  const Point pT{chart, {ode.y[0], ode.y[1], ode.y[2]}};
  const Vec3 v = X.value(pT);
  const double vax = v[section.axis];
  if (std::abs(vax) < 1e-6)
    throw std::runtime_error("linearized_return: section not transverse at return");
  core::Mat3 M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M[i][j] = ode.y[3 + 3 * i + j];
  // project onto the section along the flow direction
  core::Mat3 PM;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) PM[i][j] = M[i][j] - v[i] / vax * M[section.axis][j];
  const auto ax = section.transverse_axes();
  Mat2 R;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) R[i][j] = PM[ax[i]][ax[j]];
  return section.deck * R;
}

Mat2 linearized_return_fd(const VectorField& X, const Atlas& atlas,
                          const SectionMap& section, const Point& base, double step) {
  const Point p0 = atlas.normalize(base);
  const std::array<double, 2> w0 = transverse_of(section, p0);
  const std::array<double, 2> img0 =
      transverse_of(section, poincare_map(X, atlas, section, p0).point);
  Mat2 J;
  for (int j = 0; j < 2; ++j) {
    std::array<double, 2> wp = w0, wm = w0;
    wp[j] += step;
    wm[j] -= step;
    const auto ip = transverse_of(section, poincare_map(X, atlas, section, point_of(section, wp)).point);
    const auto im = transverse_of(section, poincare_map(X, atlas, section, point_of(section, wm)).point);
    const auto dp = return_diff(section, ip, img0);
    const auto dm = return_diff(section, im, img0);
    for (int i = 0; i < 2; ++i) J[i][j] = (dp[i] - dm[i]) / (2 * step);
  }
  return J;
}

PeriodicOrbit find_periodic(const VectorField& X, const Atlas& atlas,
                            const SectionMap& section, const Point& guess, int max_iter,
                            double tol) {
  std::array<double, 2> w = transverse_of(section, atlas.normalize(guess));
  double period = 0;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const ReturnResult r = poincare_map(X, atlas, section, point_of(section, w));
    const std::array<double, 2> F =
        return_diff(section, transverse_of(section, r.point), w);
    period = r.return_time;
    // Newton step with a finite-difference Jacobian of the displacement map.
    // The Jacobian is probed even at a converged point: a singular one means
    // the fixed point is not isolated (a whole family returns), which callers
    // must hear about rather than get an arbitrary member back.
    const double fd = std::max(1e-7, 1e-3 * std::hypot(F[0], F[1]));
    Mat2 J;
    for (int j = 0; j < 2; ++j) {
      std::array<double, 2> wp = w, wm = w;
      wp[j] += fd;
      wm[j] -= fd;
      const auto rp = poincare_map(X, atlas, section, point_of(section, wp));
      const auto rm = poincare_map(X, atlas, section, point_of(section, wm));
      const auto Fp = return_diff(section, transverse_of(section, rp.point), wp);
      const auto Fm = return_diff(section, transverse_of(section, rm.point), wm);
      for (int i = 0; i < 2; ++i) J[i][j] = (Fp[i] - Fm[i]) / (2 * fd);
    }
    if (std::abs(J.det()) < 1e-12)
      throw std::runtime_error("find_periodic: singular Newton system (degenerate family)");
    if (std::hypot(F[0], F[1]) < tol) {
      converged = true;
      break;
    }
    const auto d = J.inverse() * std::array<double, 2>{-F[0], -F[1]};
    w[0] += d[0];
    w[1] += d[1];
    for (int i = 0; i < 2; ++i)
      if (section.transverse_periodic[i]) w[i] -= std::floor(w[i]);
  }
  if (!converged) throw std::runtime_error("find_periodic: Newton did not converge");

  PeriodicOrbit orb;
  orb.base = point_of(section, w);
  orb.period = period;
  orb.return_matrix = linearized_return(X, atlas, section, orb.base);
  const core::Eig2 e = core::eigenvalues(orb.return_matrix);
  orb.multipliers = {std::complex<double>(e.re[0], e.im[0]),
                     std::complex<double>(e.re[1], e.im[1])};
  orb.klass = classify_monodromy(orb.return_matrix);
  // the level-arc frame along the first transverse axis reverses iff the orbit
  // is doubly covered by neighboring invariant-surface boundaries
  orb.covering_number = orb.return_matrix[0][0] < 0 ? 2 : 1;
  return orb;
}

RotationNumber rotation_number(double a, double b, long long denominator_cap) {
  if (a == 0 && b == 0) throw std::invalid_argument("rotation_number: zero direction");
  RotationNumber r;
  if (a == 0) {
    r.vertical = true;
    r.rational = true;
    r.value = std::numeric_limits<double>::infinity();
    r.p = 1;
    r.q = 0;
    return r;
  }
  const double slope = b / a;
  r.value = slope;
  // continued-fraction convergents of the slope
  double x = slope;
  long long p_before = 1, q_before = 0;
  long long p_prev = static_cast<long long>(std::floor(x));
  long long q_prev = 1;
  double frac = x - std::floor(x);
  for (int it = 0; it < 64; ++it) {
    // a continued-fraction convergent of a generic irrational is only about
    // 1/q^2 away, so demand a fit far better than that before calling the
    // slope rational
    if (std::abs(slope - static_cast<double>(p_prev) / q_prev) *
            static_cast<double>(q_prev) * static_cast<double>(q_prev) <
        1e-9 * std::max(1.0, std::abs(slope))) {
      r.rational = q_prev <= denominator_cap;
      r.p = p_prev;
      r.q = q_prev;
      return r;
    }
    if (frac < 1e-15) break;
    x = 1.0 / frac;
    const double ai = std::floor(x);
    frac = x - ai;
    const long long a_i = static_cast<long long>(ai);
    const long long pn = a_i * p_prev + p_before;
    const long long qn = a_i * q_prev + q_before;
    p_before = p_prev;
    q_before = q_prev;
    p_prev = pn;
    q_prev = qn;
    if (q_prev > denominator_cap) break;
  }
  r.rational = false;
  r.p = p_prev;
  r.q = q_prev;
  return r;
}

std::pair<int, int> arc_permutation_covering(int m, int p) {
  if (m <= 0 || p < 0 || p >= m)
    throw std::invalid_argument("arc_permutation_covering: need 0 <= p < m");
  const int n = p == 0 ? m : std::gcd(p, m);
  return {n, m / n};
}

std::vector<CriticalPoint> critical_points(const ScalarField& H, double r_max, int grid,
                                           double tol) {
  std::vector<CriticalPoint> found;
  auto grad_hess = [&](double x, double y, std::array<double, 2>& g, Mat2& S) {
    const chartcalc::Jet j = H.jet(Point{0, {x, y, 0}});
    g = {j.d[0], j.d[1]};
    S[0][0] = j.H[0][0];
    S[0][1] = j.H[0][1];
    S[1][0] = j.H[1][0];
    S[1][1] = j.H[1][1];
  };
  for (int i = 0; i < grid; ++i)
    for (int jj = 0; jj < grid; ++jj) {
      double x = -r_max + (2.0 * r_max) * (i + 0.5) / grid;
      double y = -r_max + (2.0 * r_max) * (jj + 0.5) / grid;
      if (x * x + y * y > r_max * r_max) continue;
      std::array<double, 2> g;
      Mat2 S;
      bool ok = false;
      for (int it = 0; it < 50; ++it) {
        grad_hess(x, y, g, S);
        if (std::hypot(g[0], g[1]) < tol) {
          ok = true;
          break;
        }
        if (std::abs(S.det()) < 1e-14) break;  // flat direction, Newton stalls
        const auto d = S.inverse() * std::array<double, 2>{-g[0], -g[1]};
        x += d[0];
        y += d[1];
        if (x * x + y * y > r_max * r_max) break;
      }
      if (!ok) continue;
      bool dup = false;
      for (const auto& c : found)
        if (std::hypot(c.x - x, c.y - y) < 1e-6) {
          dup = true;
          break;
        }
      if (dup) continue;
      CriticalPoint c;
      c.x = x;
      c.y = y;
      c.hessian = S;
      c.klass = classify_hessian(S, 1e-9);
      found.push_back(c);
    }
  return found;
}

}  // namespace flowlab
