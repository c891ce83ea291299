#include "chartcalc/ops.hpp"

#include <stdexcept>

namespace chartcalc {

namespace {

int charts_of(int a, int b) {
  if (a != b) throw std::invalid_argument("chartcalc: chart count mismatch");
  return a;
}

}  // namespace

OneForm exterior_derivative(const ScalarField& f) {
  std::vector<std::array<Expr, 3>> out;
  for (int c = 0; c < f.num_charts(); ++c)
    out.push_back({f.expr(c).diff(0), f.expr(c).diff(1), f.expr(c).diff(2)});
  return OneForm(std::move(out));
}

TwoForm exterior_derivative(const OneForm& a) {
  std::vector<std::array<Expr, 3>> out;
  for (int c = 0; c < a.num_charts(); ++c) {
    const auto& e = a.coeffs(c);
    // proxy of da is the coefficient curl.
    out.push_back({e[2].diff(1) - e[1].diff(2), e[0].diff(2) - e[2].diff(0),
                   e[1].diff(0) - e[0].diff(1)});
  }
  return TwoForm(std::move(out));
}

ThreeForm exterior_derivative(const TwoForm& w) {
  std::vector<Expr> out;
  for (int c = 0; c < w.num_charts(); ++c) {
    const auto& e = w.coeffs(c);
    out.push_back(e[0].diff(0) + e[1].diff(1) + e[2].diff(2));
  }
  return ThreeForm(std::move(out));
}

void exterior_derivative(const ThreeForm&) {
  throw std::invalid_argument("exterior_derivative: degree-3 input rejected");
}

ScalarField interior_product(const VectorField& X, const OneForm& a) {
  std::vector<Expr> out;
  for (int c = 0; c < charts_of(X.num_charts(), a.num_charts()); ++c) {
    const auto& x = X.comps(c);
    const auto& e = a.coeffs(c);
    out.push_back(x[0] * e[0] + x[1] * e[1] + x[2] * e[2]);
  }
  return ScalarField(std::move(out));
}

OneForm interior_product(const VectorField& X, const TwoForm& w) {
  std::vector<std::array<Expr, 3>> out;
  for (int c = 0; c < charts_of(X.num_charts(), w.num_charts()); ++c) {
    const auto& x = X.comps(c);
    const auto& p = w.coeffs(c);
    // coefficients of i_X w are proxy x X.
    out.push_back({p[1] * x[2] - p[2] * x[1], p[2] * x[0] - p[0] * x[2],
                   p[0] * x[1] - p[1] * x[0]});
  }
  return OneForm(std::move(out));
}

TwoForm interior_product(const VectorField& X, const ThreeForm& mu) {
  std::vector<std::array<Expr, 3>> out;
  for (int c = 0; c < charts_of(X.num_charts(), mu.num_charts()); ++c) {
    const auto& x = X.comps(c);
    const Expr& m = mu.expr(c);
    out.push_back({m * x[0], m * x[1], m * x[2]});
  }
  return TwoForm(std::move(out));
}

OneForm musical_flat(const MetricField& g, const VectorField& X) {
  std::vector<std::array<Expr, 3>> out;
  for (int c = 0; c < charts_of(g.num_charts(), X.num_charts()); ++c) {
    const auto& gc = g.coeffs(c);
    const auto& x = X.comps(c);
    // rows of the symmetric matrix (00,01,02,11,12,22).
    out.push_back({gc[0] * x[0] + gc[1] * x[1] + gc[2] * x[2],
                   gc[1] * x[0] + gc[3] * x[1] + gc[4] * x[2],
                   gc[2] * x[0] + gc[4] * x[1] + gc[5] * x[2]});
  }
  return OneForm(std::move(out));
}

std::array<Expr, 6> inverse_metric_coeffs(const std::array<Expr, 6>& g) {
  const Expr& a = g[0];
  const Expr& b = g[1];
  const Expr& c = g[2];
  const Expr& d = g[3];
  const Expr& e = g[4];
  const Expr& f = g[5];
  Expr det = a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c);
  return {(d * f - e * e) / det, (c * e - b * f) / det, (b * e - c * d) / det,
          (a * f - c * c) / det, (b * c - a * e) / det, (a * d - b * b) / det};
}

namespace {

std::array<Expr, 3> apply_sym6(const std::array<Expr, 6>& s, const std::array<Expr, 3>& v) {
  return {s[0] * v[0] + s[1] * v[1] + s[2] * v[2],
          s[1] * v[0] + s[3] * v[1] + s[4] * v[2],
          s[2] * v[0] + s[4] * v[1] + s[5] * v[2]};
}

std::array<Expr, 3> expr_cross(const std::array<Expr, 3>& a, const std::array<Expr, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

VectorField curl(const MetricField& g, const ThreeForm& mu, const VectorField& X) {
  TwoForm dflat = exterior_derivative(musical_flat(g, X));
  std::vector<std::array<Expr, 3>> out;
  for (int c = 0; c < charts_of(dflat.num_charts(), mu.num_charts()); ++c) {
    const auto& p = dflat.coeffs(c);
    const Expr& m = mu.expr(c);
    out.push_back({p[0] / m, p[1] / m, p[2] / m});
  }
  return VectorField(std::move(out));
}

VectorField cross(const MetricField& g, const ThreeForm& mu, const VectorField& X,
                  const VectorField& Y) {
  std::vector<std::array<Expr, 3>> out;
  for (int c = 0; c < charts_of(X.num_charts(), Y.num_charts()); ++c) {
    const auto ginv = inverse_metric_coeffs(g.coeffs(c));
    const Expr& m = mu.expr(c);
    auto cr = expr_cross(X.comps(c), Y.comps(c));
    for (auto& e : cr) e = m * e;
    out.push_back(apply_sym6(ginv, cr));
  }
  return VectorField(std::move(out));
}

ScalarField divergence(const ThreeForm& mu, const VectorField& X) {
  // L_X mu = d(i_X mu) by Cartan, since mu is top degree.
  ThreeForm lie = exterior_derivative(interior_product(X, mu));
  std::vector<Expr> out;
  for (int c = 0; c < lie.num_charts(); ++c) out.push_back(lie.expr(c) / mu.expr(c));
  return ScalarField(std::move(out));
}

std::array<Mat3, 3> MetricField::christoffel(const Point& p) const {
  const Mat3 ginv = value(p).inverse();
  const auto dg = partials(p);
  std::array<Mat3, 3> G;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int l = 0; l < 3; ++l)
          s += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        G[k][i][j] = 0.5 * s;
      }
  return G;
}

Vec3 covariant_derivative(const MetricField& g, const VectorField& X,
                          const VectorField& Y, const Point& pt) {
  const Mat3 gm = g.value(pt);
  // positive-definiteness via leading principal minors.
  if (gm[0][0] <= 0 || gm[0][0] * gm[1][1] - gm[0][1] * gm[0][1] <= 0 || gm.det() <= 0)
    throw std::domain_error("covariant_derivative: metric not positive definite");
  const Vec3 x = X.value(pt);
  const Vec3 y = Y.value(pt);
  const Mat3 Jy = Y.jacobian(pt);
  const auto G = g.christoffel(pt);
  Vec3 r = Jy * x;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[k] += G[k][i][j] * x[i] * y[j];
  return r;
}

VectorField gradient(const MetricField& g, const ScalarField& f) {
  std::vector<std::array<Expr, 3>> out;
  for (int c = 0; c < charts_of(g.num_charts(), f.num_charts()); ++c) {
    const auto ginv = inverse_metric_coeffs(g.coeffs(c));
    out.push_back(apply_sym6(ginv, {f.expr(c).diff(0), f.expr(c).diff(1), f.expr(c).diff(2)}));
  }
  return VectorField(std::move(out));
}

MetricField pairing_metric(const OneForm& lambda, const VectorField& X) {
  std::vector<std::array<Expr, 6>> out;
  for (int c = 0; c < charts_of(lambda.num_charts(), X.num_charts()); ++c) {
    const auto& l = lambda.coeffs(c);
    const auto& x = X.comps(c);
    Expr pair = l[0] * x[0] + l[1] * x[1] + l[2] * x[2];
    std::array<std::array<Expr, 3>, 3> P;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        P[i][j] = Expr::constant(i == j ? 1.0 : 0.0) - x[i] * l[j] / pair;
      }
    auto entry = [&](int i, int j) {
      Expr e = l[i] * l[j] / pair;
      for (int k = 0; k < 3; ++k) e = e + P[k][i] * P[k][j];
      return e;
    };
    out.push_back({entry(0, 0), entry(0, 1), entry(0, 2), entry(1, 1), entry(1, 2),
                   entry(2, 2)});
  }
  return MetricField(std::move(out));
}

Jet fd_jet(const ScalarField& f, const Point& pt, double step) {
  if (step <= 0) throw std::invalid_argument("fd_jet: step must be positive");
  auto at = [&](double dx, double dy, double dz) {
    Point q = pt;
    q.u[0] += dx;
    q.u[1] += dy;
    q.u[2] += dz;
    return f.value(q);
  };
  Jet j;
  j.v = at(0, 0, 0);
  const double h = step;
  for (int a = 0; a < 3; ++a) {
    double off[3] = {0, 0, 0};
    off[a] = h;
    j.d[a] = (at(off[0], off[1], off[2]) - at(-off[0], -off[1], -off[2])) / (2 * h);
  }
  for (int a = 0; a < 3; ++a) {
    double off[3] = {0, 0, 0};
    off[a] = h;
    j.H[a][a] =
        (at(off[0], off[1], off[2]) - 2 * j.v + at(-off[0], -off[1], -off[2])) / (h * h);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      double pa[3] = {0, 0, 0}, pb[3] = {0, 0, 0};
      pa[a] = h;
      pb[b] = h;
      const double pp = at(pa[0] + pb[0], pa[1] + pb[1], pa[2] + pb[2]);
      const double pm = at(pa[0] - pb[0], pa[1] - pb[1], pa[2] - pb[2]);
      const double mp = at(pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]);
      const double mm = at(-pa[0] - pb[0], -pa[1] - pb[1], -pa[2] - pb[2]);
      j.H[a][b] = j.H[b][a] = (pp - pm - mp + mm) / (4 * h * h);
    }
  return j;
}

}  // namespace chartcalc
