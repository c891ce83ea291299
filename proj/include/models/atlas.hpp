#ifndef EULAB_MODELS_ATLAS_HPP
#define EULAB_MODELS_ATLAS_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chartcalc/fields.hpp"

namespace models {

using chartcalc::Point;
using core::Mat3;
using core::Vec3;

struct OutsideAtlas : std::runtime_error {
  explicit OutsideAtlas(const std::string& what) : std::runtime_error(what) {}
};

// Affine identification p |-> A p + b, possibly between different charts.
struct AffineMap {
  Mat3 A = Mat3::identity();
  Vec3 b;
  int chart_from = 0;
  int chart_to = 0;

  Point apply(const Point& p) const {
    if (p.chart != chart_from) throw std::invalid_argument("AffineMap: wrong chart");
    return Point{chart_to, A * p.u + b};
  }
  AffineMap inverse() const {
    AffineMap inv;
    inv.A = A.inverse();
    inv.b = -(inv.A * b);
    inv.chart_from = chart_to;
    inv.chart_to = chart_from;
    return inv;
  }
};

struct ChartBox {
  Vec3 lo;
  Vec3 hi;
  bool contains(const Vec3& u, double tol = 1e-12) const {
    for (int i = 0; i < 3; ++i)
      if (u[i] < lo[i] - tol || u[i] > hi[i] + tol) return false;
    return true;
  }
};

// Charts with explicit identification generators and a canonicalizing map onto
// the fundamental domain.
class Atlas {
 public:
  Atlas() = default;
  Atlas(std::vector<ChartBox> charts, std::vector<AffineMap> generators,
        std::function<Point(const Point&)> normalizer)
      : charts_(std::move(charts)),
        generators_(std::move(generators)),
        normalizer_(std::move(normalizer)) {}

  const std::vector<ChartBox>& charts() const { return charts_; }
  const std::vector<AffineMap>& generators() const { return generators_; }

  Point normalize(const Point& p) const { return normalizer_(p); }
  Point normalize_raw(const Vec3& raw, int chart = 0) const {
    return normalize(Point{chart, raw});
  }

 private:
  std::vector<ChartBox> charts_;
  std::vector<AffineMap> generators_;
  std::function<Point(const Point&)> normalizer_;
};

inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // guard against floor rounding at integers
  return r;
}

}  // namespace models

#endif
