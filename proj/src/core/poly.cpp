#include "core/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace core {

PiecewisePoly::PiecewisePoly(std::vector<double> breaks,
                             std::vector<std::vector<double>> coeffs)
    : breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {
  if (breaks_.size() < 2 || coeffs_.size() + 1 != breaks_.size())
    throw std::invalid_argument("PiecewisePoly: inconsistent breaks/coeffs");
  for (size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1]))
      throw std::invalid_argument("PiecewisePoly: breaks not increasing");
}

PiecewisePoly PiecewisePoly::constant(double lo, double hi, double c) {
  return PiecewisePoly({lo, hi}, {{c}});
}

PiecewisePoly PiecewisePoly::smoothstep(double lo, double hi, double y0, double y1) {
  const double w = hi - lo;
  const double a = y1 - y0;
  // y0 + a*(10 u^3 - 15 u^4 + 6 u^5), u = t/w, t local.
  std::vector<double> c(6, 0.0);
  c[0] = y0;
  c[3] = 10 * a / (w * w * w);
  c[4] = -15 * a / (w * w * w * w);
  c[5] = 6 * a / (w * w * w * w * w);
  return PiecewisePoly({lo, hi}, {c});
}

PiecewisePoly PiecewisePoly::linear(double lo, double hi, double value_lo, double slope) {
  return PiecewisePoly({lo, hi}, {{value_lo, slope}});
}

int PiecewisePoly::piece_index(double x) const {
  if (x <= breaks_.front()) return 0;
  if (x >= breaks_.back()) return static_cast<int>(coeffs_.size()) - 1;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return static_cast<int>(it - breaks_.begin()) - 1;
}

double PiecewisePoly::operator()(double x) const {
  const double xc = std::clamp(x, breaks_.front(), breaks_.back());
  const int i = piece_index(xc);
  const double t = xc - breaks_[i];
  const auto& c = coeffs_[i];
  double r = 0;
  for (size_t k = c.size(); k-- > 0;) r = r * t + c[k];
  return r;
}

double PiecewisePoly::eval_derivative(double x, int order) const {
  PiecewisePoly p = *this;
  for (int k = 0; k < order; ++k) p = p.derivative();
  return p(x);
}

PiecewisePoly PiecewisePoly::derivative() const {
  std::vector<std::vector<double>> dc;
  dc.reserve(coeffs_.size());
  for (const auto& c : coeffs_) {
    std::vector<double> d;
    for (size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
    if (d.empty()) d.push_back(0.0);
    dc.push_back(std::move(d));
  }
  return PiecewisePoly(breaks_, dc);
}

PiecewisePoly PiecewisePoly::antiderivative(double value_at_lo) const {
  std::vector<std::vector<double>> ac;
  double acc = value_at_lo;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    const auto& c = coeffs_[i];
    std::vector<double> a(c.size() + 1, 0.0);
    a[0] = acc;
    for (size_t k = 0; k < c.size(); ++k) a[k + 1] = c[k] / static_cast<double>(k + 1);
    const double w = breaks_[i + 1] - breaks_[i];
    double end = 0;
    for (size_t k = a.size(); k-- > 0;) end = end * w + a[k];
    acc = end;
    ac.push_back(std::move(a));
  }
  return PiecewisePoly(breaks_, ac);
}

double PiecewisePoly::integral(double a, double b) const {
  PiecewisePoly f = antiderivative();
  return f(b) - f(a);
}

std::vector<double> PiecewisePoly::merge_breaks(const std::vector<double>& a,
                                                const std::vector<double>& b) {
  std::vector<double> m;
  m.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
  m.erase(std::unique(m.begin(), m.end(),
                      [](double x, double y) { return std::abs(x - y) < 1e-14; }),
          m.end());
  return m;
}

PiecewisePoly PiecewisePoly::refined(const std::vector<double>& breaks) const {
  std::vector<std::vector<double>> rc;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    const int j = piece_index(std::clamp(mid, breaks_.front(), breaks_.back()));
    // Shift piece j from origin breaks_[j] to origin breaks[i].
    const double s = breaks[i] - breaks_[j];
    const auto& c = coeffs_[j];
    std::vector<double> sc(c.size(), 0.0);
    // p(t + s) expansion via binomial sums.
    for (size_t k = 0; k < c.size(); ++k) {
      double binom = 1.0;
      double spow = 1.0;
      for (size_t m = 0; m + k < c.size(); ++m) {
        if (m > 0) {
          binom = binom * static_cast<double>(k + m) / static_cast<double>(m);
          spow *= s;
        }
        sc[k] += c[k + m] * binom * spow;
      }
    }
    rc.push_back(std::move(sc));
  }
  return PiecewisePoly(breaks, rc);
}

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& o) const {
  auto br = merge_breaks(breaks_, o.breaks_);
  PiecewisePoly a = refined(br), b = o.refined(br);
  std::vector<std::vector<double>> c;
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    std::vector<double> s(std::max(a.coeffs_[i].size(), b.coeffs_[i].size()), 0.0);
    for (size_t k = 0; k < a.coeffs_[i].size(); ++k) s[k] += a.coeffs_[i][k];
    for (size_t k = 0; k < b.coeffs_[i].size(); ++k) s[k] += b.coeffs_[i][k];
    c.push_back(std::move(s));
  }
  return PiecewisePoly(br, c);
}

PiecewisePoly PiecewisePoly::operator-(const PiecewisePoly& o) const {
  return *this + o * (-1.0);
}

PiecewisePoly PiecewisePoly::operator*(const PiecewisePoly& o) const {
  auto br = merge_breaks(breaks_, o.breaks_);
  PiecewisePoly a = refined(br), b = o.refined(br);
  std::vector<std::vector<double>> c;
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    std::vector<double> p(a.coeffs_[i].size() + b.coeffs_[i].size() - 1, 0.0);
    for (size_t k = 0; k < a.coeffs_[i].size(); ++k)
      for (size_t m = 0; m < b.coeffs_[i].size(); ++m)
        p[k + m] += a.coeffs_[i][k] * b.coeffs_[i][m];
    c.push_back(std::move(p));
  }
  return PiecewisePoly(br, c);
}

PiecewisePoly PiecewisePoly::operator*(double s) const {
  std::vector<std::vector<double>> c = coeffs_;
  for (auto& p : c)
    for (auto& v : p) v *= s;
  return PiecewisePoly(breaks_, c);
}

PiecewisePoly PiecewisePoly::operator+(double k) const {
  std::vector<std::vector<double>> c = coeffs_;
  for (auto& p : c) p[0] += k;
  return PiecewisePoly(breaks_, c);
}

PiecewisePoly PiecewisePoly::concat(const PiecewisePoly& o) const {
  if (std::abs(hi() - o.lo()) > 1e-12)
    throw std::invalid_argument("PiecewisePoly::concat: domains not adjacent");
  std::vector<double> br = breaks_;
  br.insert(br.end(), o.breaks_.begin() + 1, o.breaks_.end());
  std::vector<std::vector<double>> c = coeffs_;
  c.insert(c.end(), o.coeffs_.begin(), o.coeffs_.end());
  return PiecewisePoly(br, c);
}

double PiecewisePoly::min_on_grid(int n) const {
  double r = (*this)(lo());
  for (int i = 1; i <= n; ++i)
    r = std::min(r, (*this)(lo() + (hi() - lo()) * i / n));
  return r;
}

double PiecewisePoly::max_on_grid(int n) const {
  double r = (*this)(lo());
  for (int i = 1; i <= n; ++i)
    r = std::max(r, (*this)(lo() + (hi() - lo()) * i / n));
  return r;
}

}  // namespace core
