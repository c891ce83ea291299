#include "models/catalog.hpp"

#include <cmath>
#include <stdexcept>

#include "chartcalc/ops.hpp"

namespace models {

using core::Expr;
using core::Mat2;
using core::PiecewisePoly;

namespace {

Expr cvar(int axis) { return Expr::var(axis); }

void check_h_profile(const Expr& h, bool need_even) {
  for (int i = 0; i <= 200; ++i) {
    const double z = -1.0 + i * 0.013;
    const double v = h({0, 0, z});
    if (v <= 0) throw std::invalid_argument("h must be positive");
    if (std::abs(h({0, 0, z + 1}) - v) > 1e-9)
      throw std::invalid_argument("h must be 1-periodic in z");
    if (need_even && std::abs(h({0, 0, -z}) - v) > 1e-9)
      throw std::invalid_argument("h must be even in z");
  }
}

// Integer power of a 2x2 integer matrix (generator blocks acting on (y,z)).
Mat2 ipow(Mat2 m, int k) {
  Mat2 base = k >= 0 ? m : m.inverse();
  int n = k >= 0 ? k : -k;
  Mat2 r = Mat2::identity();
  for (int i = 0; i < n; ++i) r = r * base;
  return r;
}

Atlas mapping_torus_atlas(const Mat2& B) {
  std::vector<ChartBox> charts{{Vec3{0, 0, 0}, Vec3{1, 1, 1}}};
  std::vector<AffineMap> gens;
  AffineMap ty, tz, gx;
  ty.b = {0, 1, 0};
  tz.b = {0, 0, 1};
  gx.b = {1, 0, 0};
  gx.A = Mat3::identity();
  gx.A[1][1] = B[0][0];
  gx.A[1][2] = B[0][1];
  gx.A[2][1] = B[1][0];
  gx.A[2][2] = B[1][1];
  gens = {gx, ty, tz};
  auto normalizer = [B](const Point& p) {
    if (p.chart != 0) throw OutsideAtlas("mapping torus has a single chart");
    const int k = static_cast<int>(std::floor(p.u[0]));
    const Mat2 Bk = ipow(B, -k);
    const auto yz = Bk * std::array<double, 2>{p.u[1], p.u[2]};
    return Point{0, {wrap_unit(p.u[0] - k), wrap_unit(yz[0]), wrap_unit(yz[1])}};
  };
  return Atlas(std::move(charts), std::move(gens), normalizer);
}

}  // namespace

ModelSolution shear_mapping_torus(int l, bool reflect, const Expr& h) {
  check_h_profile(h, reflect);
  const double p = reflect ? -1.0 : 1.0;  // diagonal of the (y,z) block
  Mat2 B;
  B[0][0] = p;
  B[0][1] = l;
  B[1][0] = 0;
  B[1][1] = p;

  // Transverse metric block interpolates Q0 = diag(1, 1/h) at x=0 with its
  // pushforward B^{-T} Q0 B^{-1} at x=1, so the metric descends.
  const Expr s = Expr::profile(PiecewisePoly::smoothstep(0, 1, 0, 1), cvar(0));
  const double pq = -p * l;  // off-diagonal of B^{-T} Q0 B^{-1}
  std::array<Expr, 6> g;
  g[0] = h;                                   // g_xx
  g[1] = Expr::constant(0);                   // g_xy
  g[2] = Expr::constant(0);                   // g_xz
  g[3] = Expr::constant(1);                   // g_yy
  g[4] = s * pq;                              // g_yz
  g[5] = 1.0 / h + s * double(l * l);         // g_zz

  ModelSolution m;
  m.name = reflect ? (l == 0 ? "klein" : "shear-reflect") : "shear";
  m.atlas = mapping_torus_atlas(B);
  m.X = VectorField({Expr::constant(1), Expr::constant(0), Expr::constant(0)});
  m.lambda = OneForm({h, Expr::constant(0), Expr::constant(0)});
  m.omega = TwoForm({Expr::constant(1), Expr::constant(0), Expr::constant(0)});
  m.mu = ThreeForm(Expr::constant(1));
  m.metric = MetricField(g);
  m.bernoulli = ScalarField(h);
  m.pressure = ScalarField(h * 0.5);
  return m;
}

ModelSolution klein_mapping_torus(const Expr& h) {
  ModelSolution m = shear_mapping_torus(0, true, h);
  m.name = "klein";
  return m;
}

ModelSolution klein_dz_variant(const Expr& h) {
  ModelSolution m = klein_mapping_torus(h);
  m.name = "klein-dz-variant";
  m.lambda = OneForm({Expr::constant(0), Expr::constant(0), h});
  m.omega = TwoForm({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
  m.pressure = ScalarField(h.diff(2) * 0.5);
  return m;
}

ModelSolution klein_double_cover(const Expr& h) {
  check_h_profile(h, true);
  ModelSolution m;
  m.name = "klein-double-cover";
  std::vector<ChartBox> charts{{Vec3{0, 0, 0}, Vec3{1, 1, 1}}};
  std::vector<AffineMap> gens(3);
  gens[0].b = {1, 0, 0};
  gens[1].b = {0, 1, 0};
  gens[2].b = {0, 0, 1};
  m.atlas = Atlas(std::move(charts), std::move(gens), [](const Point& p) {
    return Point{0, {wrap_unit(p.u[0]), wrap_unit(p.u[1]), wrap_unit(p.u[2])}};
  });
  m.X = VectorField({Expr::constant(0.5), Expr::constant(0), Expr::constant(0)});
  m.lambda = OneForm({h * 2.0, Expr::constant(0), Expr::constant(0)});
  m.omega = TwoForm({Expr::constant(1), Expr::constant(0), Expr::constant(0)});
  m.mu = ThreeForm(Expr::constant(2));
  m.metric = MetricField(std::array<Expr, 6>{h * 4.0, Expr::constant(0), Expr::constant(0),
                                             Expr::constant(1), Expr::constant(0), 1.0 / h});
  m.bernoulli = ScalarField(h);
  m.pressure = ScalarField(h * 0.5);
  return m;
}

Point normalize_point(const Atlas& atlas, const Vec3& raw, int chart) {
  return atlas.normalize(Point{chart, raw});
}

ModelSolution solid_torus_invariant_contact(const Expr& H, const Expr& A, const Expr& B,
                                            double r_max) {
  const Expr Hx = H.diff(0), Hy = H.diff(1);
  const Expr c = B.diff(0) - A.diff(1);
  const Expr T = H + (A * Hy - B * Hx) / c;

  // sample the open disk for the contact and positivity conditions
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      const double x = r_max * i / 20.5, y = r_max * j / 20.5;
      if (x * x + y * y > r_max * r_max) continue;
      const Vec3 u{x, y, 0};
      if (c(u) <= 0) throw std::domain_error("contact condition violated: d(lambda_D) not positive");
      if (H(u) <= 0) throw std::domain_error("contact condition violated: H not positive");
      if (T(u) <= 0) throw std::domain_error("contact condition violated: return time not positive");
    }

  ModelSolution m;
  m.name = "contact";
  std::vector<ChartBox> charts{{Vec3{-r_max, -r_max, 0}, Vec3{r_max, r_max, 1}}};
  std::vector<AffineMap> gens(1);
  gens[0].b = {0, 0, 1};
  m.atlas = Atlas(std::move(charts), std::move(gens), [r_max](const Point& p) {
    if (p.chart != 0) throw OutsideAtlas("solid torus has a single chart");
    if (p.u[0] * p.u[0] + p.u[1] * p.u[1] > r_max * r_max + 1e-12)
      throw OutsideAtlas("point left the solid torus");
    return Point{0, {p.u[0], p.u[1], wrap_unit(p.u[2])}};
  });
  m.lambda = OneForm({A, B, H});
  m.X = VectorField({Hy / (c * T), -Hx / (c * T), 1.0 / T});
  m.omega = TwoForm({Hy, -Hx, c});  // = d(lambda)
  m.mu = ThreeForm(c * T);          // = lambda ^ d(lambda)
  m.metric = chartcalc::pairing_metric(m.lambda, m.X);
  m.bernoulli = ScalarField(Expr::constant(0));
  m.pressure = ScalarField(Expr::constant(-0.5));
  return m;
}

ModelSolution standardized_orbit_neighborhood(double T0, double eps) {
  if (!(T0 > 0)) throw std::invalid_argument("T0 must be positive");
  if (!(eps > 0) || eps >= T0)
    throw std::invalid_argument("eps must satisfy 0 < eps < T0 to keep H positive");
  const Expr x = cvar(0), y = cvar(1);
  const Expr H = Expr::constant(T0) + y * y - x * x;
  ModelSolution m = solid_torus_invariant_contact(H, -0.5 * y, 0.5 * x, std::sqrt(eps));
  m.name = "standardized";
  return m;
}

ModelSolution modified_contact(double T0, const CutoffProfile& chi) {
  chi.validate();
  if (!(T0 > 0)) throw std::invalid_argument("T0 must be positive");
  const Expr x = cvar(0), y = cvar(1);
  const Expr r2 = x * x + y * y;
  const Expr H = Expr::constant(T0) + Expr::profile(chi.chi, r2) * (y * y - x * x);
  const double r_max = std::sqrt(chi.eps);
  for (int i = -64; i <= 64; ++i)
    for (int j = -64; j <= 64; ++j) {
      const Vec3 u{r_max * i / 64.0, r_max * j / 64.0, 0};
      if (u[0] * u[0] + u[1] * u[1] <= r_max * r_max && H(u) <= 0)
        throw std::domain_error("modified_contact: H_chi not positive");
    }
  ModelSolution m = solid_torus_invariant_contact(H, -0.5 * y, 0.5 * x, r_max);
  m.name = "modified-contact";
  return m;
}

ExtensionTriple extension_profile(const PiecewisePoly& b, const PiecewisePoly& gfun,
                                  double r_left, double r_right) {
  const double lo = b.lo(), hi = b.hi(), w = hi - lo;
  if (std::abs(gfun.lo() - lo) > 1e-12 || std::abs(gfun.hi() - hi) > 1e-12)
    throw std::invalid_argument("extension_profile: b and gfun domains differ");
  if (b.min_on_grid(4096) <= 0 || gfun.min_on_grid(4096) <= 0)
    throw std::invalid_argument("extension_profile: profiles must be positive");
  if (std::abs(b(lo) * gfun(lo) - 1.0) > 1e-9 || std::abs(b(hi) * gfun(hi) - 1.0) > 1e-9)
    throw std::invalid_argument("extension_profile: boundary values must pair to 1");
  const PiecewisePoly db = b.derivative();
  if (std::abs((gfun * db).integral(lo, hi)) > 1e-10)
    throw std::invalid_argument("extension_profile: balance integral nonzero");

  // lambda_D coefficient: r dphi written in the chart coordinate, with the
  // phi flip of the far gluing absorbed into the sign near s=hi.
  const PiecewisePoly lin_near = PiecewisePoly::linear(lo, hi, r_left, 1.0);
  const PiecewisePoly lin_far = PiecewisePoly::linear(lo, hi, -(r_right + w), 1.0);
  const PiecewisePoly blend =
      PiecewisePoly::constant(lo, lo + 0.4 * w, 0.0)
          .concat(PiecewisePoly::smoothstep(lo + 0.4 * w, hi - 0.4 * w, 0.0, 1.0))
          .concat(PiecewisePoly::constant(hi - 0.4 * w, hi, 1.0));
  const PiecewisePoly a = lin_near + (lin_far - lin_near) * blend;
  const PiecewisePoly h = (gfun * db).antiderivative(0.0);

  const Expr s = cvar(0);
  const Expr be = Expr::profile(b, s);
  const Expr ge = Expr::profile(gfun, s);
  const Expr ae = Expr::profile(a, s);
  const Expr he = Expr::profile(h, s);

  ExtensionTriple t;
  t.b = b;
  t.gfun = gfun;
  t.h = h;
  t.a = a;
  t.T_left = b(lo);
  t.T_right = b(hi);

  ModelSolution& m = t.sol;
  m.name = "extension";
  std::vector<ChartBox> charts{{Vec3{lo, 0, 0}, Vec3{hi, 1, 1}}};
  std::vector<AffineMap> gens(2);
  gens[0].b = {0, 1, 0};
  gens[1].b = {0, 0, 1};
  m.atlas = Atlas(std::move(charts), std::move(gens), [lo, hi](const Point& p) {
    if (p.chart != 0) throw OutsideAtlas("extension region has a single chart");
    if (p.u[0] < lo - 1e-12 || p.u[0] > hi + 1e-12)
      throw OutsideAtlas("point left the extension region");
    return Point{0, {p.u[0], wrap_unit(p.u[1]), wrap_unit(p.u[2])}};
  });
  m.X = VectorField({Expr::constant(0), Expr::constant(0), ge});
  m.lambda = OneForm({Expr::constant(0), ae, be});
  m.omega = TwoForm({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
  m.mu = ThreeForm(1.0 / ge);
  m.metric = chartcalc::pairing_metric(m.lambda, m.X);
  m.bernoulli = ScalarField(he);
  m.pressure = ScalarField(he - be * ge * 0.5);
  return t;
}

GluedCounterexample glued_counterexample(const std::array<double, 4>& T, double delta,
                                         const std::array<double, 4>& r_core,
                                         const std::array<CutoffProfile, 4>* chi,
                                         bool allow_equal_differences) {
  for (double t : T)
    if (!(t > 0)) throw std::invalid_argument("glued_counterexample: periods must be positive");
  if (!(delta > 0)) throw std::invalid_argument("glued_counterexample: delta must be positive");
  const double d12 = T[1] - T[0], d34 = T[3] - T[2];
  if (std::abs(d12 - d34) < 1e-12 && !allow_equal_differences)
    throw std::invalid_argument(
        "glued_counterexample: equal period differences carry no obstruction; override to build anyway");

  GluedCounterexample g;
  g.T = T;
  g.delta = delta;
  g.r_core = r_core;

  const PiecewisePoly b12 = rise_overshoot_fall(1, 2, T[0], T[1]);
  const PiecewisePoly g12 = make_balanced_gfun(b12, T[0], T[1]);
  g.region12 = extension_profile(b12, g12, r_core[0], r_core[1]);
  const PiecewisePoly b34 = rise_overshoot_fall(3, 4, T[2], T[3]);
  const PiecewisePoly g34 = make_balanced_gfun(b34, T[2], T[3]);
  g.region34 = extension_profile(b34, g34, r_core[2], r_core[3]);

  std::array<CutoffProfile, 4> cut;
  if (chi) {
    cut = *chi;
  } else {
    for (int i = 0; i < 4; ++i) cut[i] = default_cutoff(r_core[i] * r_core[i]);
  }
  for (int i = 0; i < 4; ++i) g.cores[i] = modified_contact(T[i], cut[i]);

  // Two-chart solution: chart 0 carries M12, chart 1 carries M34.
  auto merge1 = [](const ScalarField& p, const ScalarField& q) {
    return ScalarField(std::vector<Expr>{p.expr(0), q.expr(0)});
  };
  auto merge3v = [](const VectorField& p, const VectorField& q) {
    return VectorField(std::vector<std::array<Expr, 3>>{p.comps(0), q.comps(0)});
  };
  const ModelSolution& a = g.region12.sol;
  const ModelSolution& b = g.region34.sol;
  ModelSolution& m = g.solution;
  m.name = "glued-counterexample";
  m.X = merge3v(a.X, b.X);
  m.lambda = OneForm(std::vector<std::array<Expr, 3>>{a.lambda.coeffs(0), b.lambda.coeffs(0)});
  m.omega = TwoForm(std::vector<std::array<Expr, 3>>{a.omega.coeffs(0), b.omega.coeffs(0)});
  m.mu = ThreeForm(std::vector<Expr>{a.mu.expr(0), b.mu.expr(0)});
  m.metric = MetricField(
      std::vector<std::array<Expr, 6>>{a.metric->coeffs(0), b.metric->coeffs(0)});
  m.bernoulli = merge1(a.bernoulli, b.bernoulli);
  m.pressure = merge1(*a.pressure, *b.pressure);

  std::vector<ChartBox> charts{{Vec3{1, 0, 0}, Vec3{2, 1, 1}}, {Vec3{3, 0, 0}, Vec3{4, 1, 1}}};
  std::vector<AffineMap> gens;
  for (int c = 0; c < 2; ++c)
    for (int ax = 1; ax <= 2; ++ax) {
      AffineMap t;
      t.chart_from = t.chart_to = c;
      t.b[ax] = 1;
      gens.push_back(t);
    }
  m.atlas = Atlas(std::move(charts), std::move(gens), [](const Point& p) {
    const double lo = p.chart == 0 ? 1.0 : 3.0;
    if (p.chart < 0 || p.chart > 1 || p.u[0] < lo - 1e-12 || p.u[0] > lo + 1 + 1e-12)
      throw OutsideAtlas("point outside the glued regions");
    return Point{p.chart, {p.u[0], wrap_unit(p.u[1]), wrap_unit(p.u[2])}};
  });

  auto reflect_glue = [](double shift) {
    AffineMap f;
    f.A = Mat3::diagonal(-1, -1, 1);
    f.b = {shift, 0, 0};
    return f;
  };
  g.glue12 = reflect_glue(r_core[1] + delta + r_core[0]);
  g.glue34 = reflect_glue(r_core[3] + delta + r_core[2]);
  g.annulus_area = TwoForm({Expr::constant(0), Expr::constant(0), Expr::constant(1)});
  return g;
}

double mobius_translation_length(const Mat2& m) {
  if (std::abs(m.det() - 1.0) > 1e-9)
    throw std::invalid_argument("mobius_translation_length: determinant must be 1");
  const double t = std::abs(m.trace());
  if (t <= 2.0)
    throw std::domain_error("mobius_translation_length: elliptic or parabolic element");
  return 2.0 * std::acosh(t / 2.0);
}

}  // namespace models
