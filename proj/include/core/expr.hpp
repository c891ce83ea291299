#ifndef EULAB_CORE_EXPR_HPP
#define EULAB_CORE_EXPR_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "core/linalg.hpp"
#include "core/poly.hpp"

namespace core {

struct ExprNode;

// Immutable scalar expression in up to three chart coordinates, with exact
// symbolic differentiation. Fields across the project carry these so that
// first and second derivative jets are closed-form, not finite differences.
class Expr {
 public:
  Expr();  // the zero expression
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

  static Expr constant(double c);
  static Expr var(int axis);  // coordinate function, axis in {0,1,2}
  // Piecewise-polynomial profile applied to a sub-expression, e.g. chi(r^2).
  static Expr profile(PiecewisePoly p, Expr inner);
  // Numerically defined scalar with a declared (lazily built) gradient.
  static Expr opaque(std::function<double(const Vec3&)> fn,
                     std::function<Expr(int)> grad, std::string label = "opaque");

  double operator()(const Vec3& x) const;
  Expr diff(int axis) const;

  bool is_constant() const;
  bool is_zero() const;
  double constant_value() const;  // valid only when is_constant()

  const std::shared_ptr<const ExprNode>& node() const { return node_; }

 private:
  std::shared_ptr<const ExprNode> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr operator+(Expr a, double b);
Expr operator+(double a, Expr b);
Expr operator-(Expr a, double b);
Expr operator-(double a, Expr b);
Expr operator*(Expr a, double b);
Expr operator*(double a, Expr b);
Expr operator/(Expr a, double b);
Expr operator/(double a, Expr b);

Expr sin(Expr a);
Expr cos(Expr a);
Expr exp(Expr a);
Expr sqrt(Expr a);
Expr pow_int(Expr a, int n);  // n >= 0

}  // namespace core

#endif
