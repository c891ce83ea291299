#ifndef EULAB_CHARTCALC_FIELDS_HPP
#define EULAB_CHARTCALC_FIELDS_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "core/expr.hpp"
#include "core/linalg.hpp"

namespace chartcalc {

using core::Expr;
using core::Mat3;
using core::Vec3;

// A point on a model manifold: chart id plus chart coordinates.
struct Point {
  int chart = 0;
  Vec3 u;
};

// Value with first and second partials at a point. The Hessian is stored
// symmetric by construction.
struct Jet {
  double v = 0;
  Vec3 d;
  Mat3 H;
};

namespace detail {

template <int N>
class ComponentField {
 public:
  ComponentField() : comps_(1) {}
  explicit ComponentField(std::array<Expr, N> single_chart) : comps_{single_chart} {}
  explicit ComponentField(std::vector<std::array<Expr, N>> per_chart)
      : comps_(std::move(per_chart)) {
    if (comps_.empty()) throw std::invalid_argument("field needs at least one chart");
  }

  int num_charts() const { return static_cast<int>(comps_.size()); }

  const std::array<Expr, N>& chart(int c) const {
    if (c < 0 || c >= num_charts()) throw std::out_of_range("field: bad chart id");
    return comps_[c];
  }

  std::array<double, N> value(const Point& p) const {
    const auto& e = chart(p.chart);
    std::array<double, N> r;
    for (int i = 0; i < N; ++i) r[i] = e[i](p.u);
    return r;
  }

  Jet jet(const Point& p, int component) const {
    const Expr& e = chart(p.chart)[component];
    Jet j;
    j.v = e(p.u);
    for (int a = 0; a < 3; ++a) j.d[a] = e.diff(a)(p.u);
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) j.H[a][b] = j.H[b][a] = e.diff(a).diff(b)(p.u);
    return j;
  }

 private:
  std::vector<std::array<Expr, N>> comps_;
};

}  // namespace detail

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Expr e) : f_(std::array<Expr, 1>{std::move(e)}) {}
  explicit ScalarField(std::vector<Expr> per_chart) : f_(wrap(std::move(per_chart))) {}

  static constexpr int degree = 0;

  double value(const Point& p) const { return f_.value(p)[0]; }
  Jet jet(const Point& p) const { return f_.jet(p, 0); }
  const Expr& expr(int chart = 0) const { return f_.chart(chart)[0]; }
  int num_charts() const { return f_.num_charts(); }

 private:
  static std::vector<std::array<Expr, 1>> wrap(std::vector<Expr> es) {
    std::vector<std::array<Expr, 1>> r;
    for (auto& e : es) r.push_back({std::move(e)});
    return r;
  }
  detail::ComponentField<1> f_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::array<Expr, 3> comps) : f_(std::move(comps)) {}
  explicit VectorField(std::vector<std::array<Expr, 3>> per_chart) : f_(std::move(per_chart)) {}

  Vec3 value(const Point& p) const {
    auto a = f_.value(p);
    return {a[0], a[1], a[2]};
  }
  // Jacobian J[i][j] = d X^i / d u^j.
  Mat3 jacobian(const Point& p) const {
    Mat3 J;
    for (int i = 0; i < 3; ++i) {
      Jet j = f_.jet(p, i);
      for (int a = 0; a < 3; ++a) J[i][a] = j.d[a];
    }
    return J;
  }
  Jet jet(const Point& p, int component) const { return f_.jet(p, component); }
  const std::array<Expr, 3>& comps(int chart = 0) const { return f_.chart(chart); }
  int num_charts() const { return f_.num_charts(); }

 private:
  detail::ComponentField<3> f_;
};

// 1-form a0 du0 + a1 du1 + a2 du2.
class OneForm {
 public:
  OneForm() = default;
  explicit OneForm(std::array<Expr, 3> coeffs) : f_(std::move(coeffs)) {}
  explicit OneForm(std::vector<std::array<Expr, 3>> per_chart) : f_(std::move(per_chart)) {}

  static constexpr int degree = 1;

  Vec3 value(const Point& p) const {
    auto a = f_.value(p);
    return {a[0], a[1], a[2]};
  }
  double pair(const Point& p, const Vec3& X) const { return dot(value(p), X); }
  Jet jet(const Point& p, int component) const { return f_.jet(p, component); }
  const std::array<Expr, 3>& coeffs(int chart = 0) const { return f_.chart(chart); }
  int num_charts() const { return f_.num_charts(); }

 private:
  detail::ComponentField<3> f_;
};

// 2-form stored via its proxy coefficients: c0 du1^du2 + c1 du2^du0 + c2 du0^du1,
// so that omega(u, v) = dot(c, cross(u, v)).
class TwoForm {
 public:
  TwoForm() = default;
  explicit TwoForm(std::array<Expr, 3> proxy) : f_(std::move(proxy)) {}
  explicit TwoForm(std::vector<std::array<Expr, 3>> per_chart) : f_(std::move(per_chart)) {}

  static constexpr int degree = 2;

  Vec3 proxy(const Point& p) const {
    auto a = f_.value(p);
    return {a[0], a[1], a[2]};
  }
  double pair(const Point& p, const Vec3& u, const Vec3& v) const {
    return dot(proxy(p), cross(u, v));
  }
  Jet jet(const Point& p, int component) const { return f_.jet(p, component); }
  const std::array<Expr, 3>& coeffs(int chart = 0) const { return f_.chart(chart); }
  int num_charts() const { return f_.num_charts(); }

 private:
  detail::ComponentField<3> f_;
};

class ThreeForm {
 public:
  ThreeForm() = default;
  explicit ThreeForm(Expr density) : f_(std::array<Expr, 1>{std::move(density)}) {}
  explicit ThreeForm(std::vector<Expr> per_chart) {
    std::vector<std::array<Expr, 1>> r;
    for (auto& e : per_chart) r.push_back({std::move(e)});
    f_ = detail::ComponentField<1>(std::move(r));
  }

  static constexpr int degree = 3;

  double density(const Point& p) const { return f_.value(p)[0]; }
  double pair(const Point& p, const Vec3& u, const Vec3& v, const Vec3& w) const {
    return density(p) * dot(u, cross(v, w));
  }
  const Expr& expr(int chart = 0) const { return f_.chart(chart)[0]; }
  int num_charts() const { return f_.num_charts(); }

 private:
  detail::ComponentField<1> f_;
};

// Symmetric metric coefficients g00,g01,g02,g11,g12,g22 per chart.
class MetricField {
 public:
  MetricField() = default;
  explicit MetricField(std::array<Expr, 6> coeffs) : f_(std::move(coeffs)) {}
  explicit MetricField(std::vector<std::array<Expr, 6>> per_chart) : f_(std::move(per_chart)) {}

  static MetricField euclidean() {
    using core::Expr;
    return MetricField(std::array<Expr, 6>{Expr::constant(1), Expr::constant(0),
                                           Expr::constant(0), Expr::constant(1),
                                           Expr::constant(0), Expr::constant(1)});
  }

  Mat3 value(const Point& p) const {
    auto a = f_.value(p);
    Mat3 g;
    g[0][0] = a[0];
    g[0][1] = g[1][0] = a[1];
    g[0][2] = g[2][0] = a[2];
    g[1][1] = a[3];
    g[1][2] = g[2][1] = a[4];
    g[2][2] = a[5];
    return g;
  }

  // First partials of the full matrix: dg[a][i][j] = d g_ij / d u^a.
  std::array<Mat3, 3> partials(const Point& p) const {
    std::array<Mat3, 3> dg;
    static constexpr int row[6] = {0, 0, 0, 1, 1, 2};
    static constexpr int col[6] = {0, 1, 2, 1, 2, 2};
    for (int k = 0; k < 6; ++k) {
      Jet j = f_.jet(p, k);
      for (int a = 0; a < 3; ++a) {
        dg[a][row[k]][col[k]] = j.d[a];
        dg[a][col[k]][row[k]] = j.d[a];
      }
    }
    return dg;
  }

  // Christoffel symbols of the Levi-Civita connection: Gamma[k][i][j].
  std::array<Mat3, 3> christoffel(const Point& p) const;

  const std::array<Expr, 6>& coeffs(int chart = 0) const { return f_.chart(chart); }
  int num_charts() const { return f_.num_charts(); }

 private:
  detail::ComponentField<6> f_;
};

}  // namespace chartcalc

#endif
