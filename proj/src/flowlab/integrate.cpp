#include "flowlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowlab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double A71 = 35.0 / 384, A73 = 500.0 / 1113, A74 = 125.0 / 192,
                 A75 = -2187.0 / 6784, A76 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
constexpr double D1 = -12715105075.0 / 11282082432.0, D3 = 87487479700.0 / 32700410799.0,
                 D4 = -10690763975.0 / 1880347072.0, D5 = 701980252875.0 / 199316789632.0,
                 D6 = -1453857185.0 / 822651844.0, D7 = 69997945.0 / 29380423.0;
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;

}  // namespace

std::vector<double> DenseStep::eval(double t) const {
  const double th = (t - t0) / h;
  const double th1 = 1.0 - th;
  std::vector<double> out(y0.size());
  for (size_t i = 0; i < y0.size(); ++i)
    out[i] = y0[i] + th * (cont2[i] + th1 * (cont3[i] + th * (cont4[i] + th1 * cont5[i])));
  return out;
}

void Dopri5::init(double t0, std::vector<double> y0) {
  t = t0;
  y = std::move(y0);
  steps.clear();
}

namespace {

struct StageBuf {
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  void resize(size_t n) {
    for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &ytmp, &ynew}) v->resize(n);
  }
};

}  // namespace

void Dopri5::fixed_step(double h) {
  const size_t n = y.size();
  StageBuf s;
  s.resize(n);
  auto f = rhs;
  f(t, y, s.k1);
  for (size_t i = 0; i < n; ++i) s.ytmp[i] = y[i] + h * A21 * s.k1[i];
  f(t + C2 * h, s.ytmp, s.k2);
  for (size_t i = 0; i < n; ++i) s.ytmp[i] = y[i] + h * (A31 * s.k1[i] + A32 * s.k2[i]);
  f(t + C3 * h, s.ytmp, s.k3);
  for (size_t i = 0; i < n; ++i)
    s.ytmp[i] = y[i] + h * (A41 * s.k1[i] + A42 * s.k2[i] + A43 * s.k3[i]);
  f(t + C4 * h, s.ytmp, s.k4);
  for (size_t i = 0; i < n; ++i)
    s.ytmp[i] = y[i] + h * (A51 * s.k1[i] + A52 * s.k2[i] + A53 * s.k3[i] + A54 * s.k4[i]);
  f(t + C5 * h, s.ytmp, s.k5);
  for (size_t i = 0; i < n; ++i)
    s.ytmp[i] = y[i] + h * (A61 * s.k1[i] + A62 * s.k2[i] + A63 * s.k3[i] + A64 * s.k4[i] +
                            A65 * s.k5[i]);
  f(t + h, s.ytmp, s.k6);
  for (size_t i = 0; i < n; ++i)
    s.ynew[i] = y[i] + h * (A71 * s.k1[i] + A73 * s.k3[i] + A74 * s.k4[i] + A75 * s.k5[i] +
                            A76 * s.k6[i]);
  t += h;
  y = s.ynew;
}

void Dopri5::run(double t_end) {
  if (t_end == t) return;
  const double dir = t_end > t ? 1.0 : -1.0;
  const size_t n = y.size();
  StageBuf s;
  s.resize(n);
  rhs(t, y, s.k1);
  double h = dir * std::min(0.01, std::abs(t_end - t));
  int rejected_in_a_row = 0;
  while (dir * (t_end - t) > 1e-14 * std::max(1.0, std::abs(t_end))) {
    if (dir * (t + h) > dir * t_end) h = t_end - t;
    for (size_t i = 0; i < n; ++i) s.ytmp[i] = y[i] + h * A21 * s.k1[i];
    rhs(t + C2 * h, s.ytmp, s.k2);
    for (size_t i = 0; i < n; ++i) s.ytmp[i] = y[i] + h * (A31 * s.k1[i] + A32 * s.k2[i]);
    rhs(t + C3 * h, s.ytmp, s.k3);
    for (size_t i = 0; i < n; ++i)
      s.ytmp[i] = y[i] + h * (A41 * s.k1[i] + A42 * s.k2[i] + A43 * s.k3[i]);
    rhs(t + C4 * h, s.ytmp, s.k4);
    for (size_t i = 0; i < n; ++i)
      s.ytmp[i] = y[i] + h * (A51 * s.k1[i] + A52 * s.k2[i] + A53 * s.k3[i] + A54 * s.k4[i]);
    rhs(t + C5 * h, s.ytmp, s.k5);
    for (size_t i = 0; i < n; ++i)
      s.ytmp[i] = y[i] + h * (A61 * s.k1[i] + A62 * s.k2[i] + A63 * s.k3[i] + A64 * s.k4[i] +
                              A65 * s.k5[i]);
    rhs(t + h, s.ytmp, s.k6);
    for (size_t i = 0; i < n; ++i)
      s.ynew[i] = y[i] + h * (A71 * s.k1[i] + A73 * s.k3[i] + A74 * s.k4[i] + A75 * s.k5[i] +
                              A76 * s.k6[i]);
    rhs(t + h, s.ynew, s.k7);

    double err = 0;
    for (size_t i = 0; i < n; ++i) {
      const double ei = h * (E1 * s.k1[i] + E3 * s.k3[i] + E4 * s.k4[i] + E5 * s.k5[i] +
                             E6 * s.k6[i] + E7 * s.k7[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(s.ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / n);

    if (err <= 1.0) {
      if (store_dense) {
        DenseStep d;
        d.t0 = t;
        d.h = h;
        d.y0 = y;
        d.cont2.resize(n);
        d.cont3.resize(n);
        d.cont4.resize(n);
        d.cont5.resize(n);
        for (size_t i = 0; i < n; ++i) {
          const double ydiff = s.ynew[i] - y[i];
          const double bspl = h * s.k1[i] - ydiff;
          d.cont2[i] = ydiff;
          d.cont3[i] = bspl;
          d.cont4[i] = ydiff - h * s.k7[i] - bspl;
          d.cont5[i] = h * (D1 * s.k1[i] + D3 * s.k3[i] + D4 * s.k4[i] + D5 * s.k5[i] +
                            D6 * s.k6[i] + D7 * s.k7[i]);
        }
        steps.push_back(std::move(d));
      }
      t += h;
      y = s.ynew;
      s.k1 = s.k7;  // first-same-as-last
      rejected_in_a_row = 0;
      const double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      if (++rejected_in_a_row > 50)
        throw std::runtime_error("integrator: repeated step rejection");
    }
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("integrator: step size underflow");
  }
}

Vec3 OrbitSegment::raw_at(double t) const {
  if (steps.empty()) return raw.empty() ? Vec3{} : raw.front();
  size_t lo = 0, hi = steps.size() - 1;
  if (t <= steps.front().t0) lo = 0;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (steps[mid].t0 + steps[mid].h < t)
      lo = mid + 1;
    else
      hi = mid;
  }
  const auto v = steps[lo].eval(std::clamp(t, steps[lo].t0, steps[lo].t0 + steps[lo].h));
  return {v[0], v[1], v[2]};
}

OrbitSegment integrate(const VectorField& X, const Atlas& atlas, const Point& p0,
                       double t_final, double tol) {
  if (tol <= 0) throw std::invalid_argument("integrate: tol must be positive");
  const Point start = atlas.normalize(p0);
  Dopri5 ode;
  ode.rtol = tol;
  ode.atol = tol * 1e-2;
  const int chart = start.chart;
  ode.rhs = [&X, chart](double, const std::vector<double>& y, std::vector<double>& dy) {
    const Vec3 v = X.value(Point{chart, {y[0], y[1], y[2]}});
    dy[0] = v[0];
    dy[1] = v[1];
    dy[2] = v[2];
  };
  ode.init(0.0, {start.u[0], start.u[1], start.u[2]});

  OrbitSegment seg;
  seg.chart = chart;
  seg.tol = tol;
  seg.times.push_back(0.0);
  seg.raw.push_back(start.u);
  seg.points.push_back(start);
  ode.run(t_final);
  seg.steps = std::move(ode.steps);
  size_t kept = 0;
  for (const DenseStep& d : seg.steps) {
    const double te = d.t0 + d.h;
    const auto yv = d.eval(te);
    const Vec3 ye{yv[0], yv[1], yv[2]};
    try {
      seg.points.push_back(atlas.normalize(Point{chart, ye}));
    } catch (const models::OutsideAtlas&) {
      // keep the step itself: an event may still lie inside it
      seg.escaped = true;
      ++kept;
      break;
    }
    seg.times.push_back(te);
    seg.raw.push_back(ye);
    ++kept;
  }
  if (seg.escaped) seg.steps.resize(kept);
  return seg;
}

Vec3 integrate_fixed_endpoint(const VectorField& X, const Point& p0, double t_final,
                              int nsteps) {
  if (nsteps <= 0) throw std::invalid_argument("integrate_fixed_endpoint: need steps");
  Dopri5 ode;
  ode.store_dense = false;
  const int chart = p0.chart;
  ode.rhs = [&X, chart](double, const std::vector<double>& y, std::vector<double>& dy) {
    const Vec3 v = X.value(Point{chart, {y[0], y[1], y[2]}});
    dy[0] = v[0];
    dy[1] = v[1];
    dy[2] = v[2];
  };
  ode.init(0.0, {p0.u[0], p0.u[1], p0.u[2]});
  const double h = t_final / nsteps;
  for (int i = 0; i < nsteps; ++i) ode.fixed_step(h);
  return {ode.y[0], ode.y[1], ode.y[2]};
}

void dump_orbit_csv(const OrbitSegment& seg, std::ostream& os) {
  os << "t,chart,x,y,z\n";
  for (size_t i = 0; i < seg.times.size(); ++i) {
    const Point& p = seg.points[i];
    os << seg.times[i] << ',' << p.chart << ',' << p.u[0] << ',' << p.u[1] << ','
       << p.u[2] << '\n';
  }
}

}  // namespace flowlab
