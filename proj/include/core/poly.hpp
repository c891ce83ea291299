#ifndef EULAB_CORE_POLY_HPP
#define EULAB_CORE_POLY_HPP

#include <vector>

namespace core {

// Piecewise polynomial on [breaks.front(), breaks.back()], each piece stored in
// the local coordinate (x - breaks[i]). Evaluation clamps outside the domain,
// which matches the profiles used here (constant near both ends).
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> coeffs);

  static PiecewisePoly constant(double lo, double hi, double c);
  // C^2 quintic blend from value y0 at lo to y1 at hi (flat to second order at
  // both ends).
  static PiecewisePoly smoothstep(double lo, double hi, double y0, double y1);
  // The identity map x on [lo, hi].
  static PiecewisePoly linear(double lo, double hi, double value_lo, double slope);

  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }

  double operator()(double x) const;
  double eval_derivative(double x, int order) const;

  PiecewisePoly derivative() const;
  PiecewisePoly antiderivative(double value_at_lo = 0.0) const;
  double integral(double a, double b) const;

  PiecewisePoly operator+(const PiecewisePoly& o) const;
  PiecewisePoly operator-(const PiecewisePoly& o) const;
  PiecewisePoly operator*(const PiecewisePoly& o) const;
  PiecewisePoly operator*(double s) const;
  PiecewisePoly operator+(double c) const;

  // Appends a piecewise poly starting where this one ends (hi() == o.lo()).
  PiecewisePoly concat(const PiecewisePoly& o) const;

  double min_on_grid(int n) const;
  double max_on_grid(int n) const;

  const std::vector<double>& breaks() const { return breaks_; }

 private:
  int piece_index(double x) const;
  PiecewisePoly refined(const std::vector<double>& breaks) const;
  static std::vector<double> merge_breaks(const std::vector<double>& a,
                                          const std::vector<double>& b);

  std::vector<double> breaks_;                 // size n+1
  std::vector<std::vector<double>> coeffs_;    // size n, ascending powers
};

}  // namespace core

#endif
