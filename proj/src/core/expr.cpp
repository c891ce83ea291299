#include "core/expr.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace core {

struct ExprNode {
  enum class Kind {
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
    Pow,
    Profile,
    Opaque
  };

  Kind kind;
  double value = 0;  // Const
  int index = 0;     // Var axis, or Pow exponent
  // leaf nodes leave the children null; Expr's public default ctor cannot be
  // used here since it allocates a node itself
  Expr a{nullptr}, b{nullptr};
  std::shared_ptr<const PiecewisePoly> pp;
  std::function<double(const Vec3&)> fn;
  std::function<Expr(int)> grad_fn;
  std::string label;

  mutable std::once_flag donce[3];
  mutable std::optional<Expr> dcache[3];
};

namespace {

Expr make(ExprNode::Kind k) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr make1(ExprNode::Kind k, Expr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr make2(ExprNode::Kind k, Expr a, Expr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

}  // namespace

Expr::Expr() : node_(Expr::constant(0.0).node()) {}

Expr Expr::constant(double c) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Const;
  n->value = c;
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr Expr::var(int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("Expr::var: axis out of range");
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Var;
  n->index = axis;
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr Expr::profile(PiecewisePoly p, Expr inner) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Profile;
  n->pp = std::make_shared<PiecewisePoly>(std::move(p));
  n->a = std::move(inner);
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr Expr::opaque(std::function<double(const Vec3&)> fn, std::function<Expr(int)> grad,
                  std::string label) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::Opaque;
  n->fn = std::move(fn);
  n->grad_fn = std::move(grad);
  n->label = std::move(label);
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

bool Expr::is_constant() const { return node_->kind == ExprNode::Kind::Const; }

bool Expr::is_zero() const { return is_constant() && node_->value == 0.0; }

double Expr::constant_value() const { return node_->value; }

double Expr::operator()(const Vec3& x) const {
  const ExprNode& n = *node_;
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Const: return n.value;
    case K::Var: return x[n.index];
    case K::Add: return n.a(x) + n.b(x);
    case K::Sub: return n.a(x) - n.b(x);
    case K::Mul: return n.a(x) * n.b(x);
    case K::Div: return n.a(x) / n.b(x);
    case K::Neg: return -n.a(x);
    case K::Sin: return std::sin(n.a(x));
    case K::Cos: return std::cos(n.a(x));
    case K::Exp: return std::exp(n.a(x));
    case K::Sqrt: return std::sqrt(n.a(x));
    case K::Pow: {
      const double v = n.a(x);
      double r = 1;
      for (int i = 0; i < n.index; ++i) r *= v;
      return r;
    }
    case K::Profile: return (*n.pp)(n.a(x));
    case K::Opaque: return n.fn(x);
  }
  return 0;
}

namespace {

bool is_one(const Expr& e) { return e.is_constant() && e.constant_value() == 1.0; }

}  // namespace

Expr operator+(Expr a, Expr b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() + b.constant_value());
  return make2(ExprNode::Kind::Add, std::move(a), std::move(b));
}

Expr operator-(Expr a, Expr b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -std::move(b);
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() - b.constant_value());
  return make2(ExprNode::Kind::Sub, std::move(a), std::move(b));
}

Expr operator*(Expr a, Expr b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() * b.constant_value());
  return make2(ExprNode::Kind::Mul, std::move(a), std::move(b));
}

Expr operator/(Expr a, Expr b) {
  if (a.is_zero()) return a;
  if (is_one(b)) return a;
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.constant_value() / b.constant_value());
  return make2(ExprNode::Kind::Div, std::move(a), std::move(b));
}

Expr operator-(Expr a) {
  if (a.is_constant()) return Expr::constant(-a.constant_value());
  return make1(ExprNode::Kind::Neg, std::move(a));
}

Expr operator+(Expr a, double b) { return std::move(a) + Expr::constant(b); }
Expr operator+(double a, Expr b) { return Expr::constant(a) + std::move(b); }
Expr operator-(Expr a, double b) { return std::move(a) - Expr::constant(b); }
Expr operator-(double a, Expr b) { return Expr::constant(a) - std::move(b); }
Expr operator*(Expr a, double b) { return std::move(a) * Expr::constant(b); }
Expr operator*(double a, Expr b) { return Expr::constant(a) * std::move(b); }
Expr operator/(Expr a, double b) { return std::move(a) / Expr::constant(b); }
Expr operator/(double a, Expr b) { return Expr::constant(a) / std::move(b); }

Expr sin(Expr a) {
  if (a.is_constant()) return Expr::constant(std::sin(a.constant_value()));
  return make1(ExprNode::Kind::Sin, std::move(a));
}
Expr cos(Expr a) {
  if (a.is_constant()) return Expr::constant(std::cos(a.constant_value()));
  return make1(ExprNode::Kind::Cos, std::move(a));
}
Expr exp(Expr a) {
  if (a.is_constant()) return Expr::constant(std::exp(a.constant_value()));
  return make1(ExprNode::Kind::Exp, std::move(a));
}
Expr sqrt(Expr a) {
  if (a.is_constant()) return Expr::constant(std::sqrt(a.constant_value()));
  return make1(ExprNode::Kind::Sqrt, std::move(a));
}
Expr pow_int(Expr a, int n) {
  if (n < 0) throw std::invalid_argument("pow_int: negative exponent");
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return a;
  if (a.is_constant()) {
    double r = 1;
    for (int i = 0; i < n; ++i) r *= a.constant_value();
    return Expr::constant(r);
  }
  auto e = make1(ExprNode::Kind::Pow, std::move(a));
  const_cast<ExprNode&>(*e.node()).index = n;
  return e;
}

Expr Expr::diff(int axis) const {
  const ExprNode& n = *node_;
  std::call_once(n.donce[axis], [&] {
    using K = ExprNode::Kind;
    Expr d;
    switch (n.kind) {
      case K::Const: d = Expr::constant(0.0); break;
      case K::Var: d = Expr::constant(n.index == axis ? 1.0 : 0.0); break;
      case K::Add: d = n.a.diff(axis) + n.b.diff(axis); break;
      case K::Sub: d = n.a.diff(axis) - n.b.diff(axis); break;
      case K::Mul: d = n.a.diff(axis) * n.b + n.a * n.b.diff(axis); break;
      case K::Div:
        d = (n.a.diff(axis) * n.b - n.a * n.b.diff(axis)) / (n.b * n.b);
        break;
      case K::Neg: d = -n.a.diff(axis); break;
      case K::Sin: d = cos(n.a) * n.a.diff(axis); break;
      case K::Cos: d = -sin(n.a) * n.a.diff(axis); break;
      case K::Exp: d = exp(n.a) * n.a.diff(axis); break;
      case K::Sqrt: d = n.a.diff(axis) / (2.0 * sqrt(n.a)); break;
      case K::Pow:
        d = Expr::constant(n.index) * pow_int(n.a, n.index - 1) * n.a.diff(axis);
        break;
      case K::Profile:
        d = Expr::profile(n.pp->derivative(), n.a) * n.a.diff(axis);
        break;
      case K::Opaque:
        if (!n.grad_fn)
          throw std::runtime_error("Expr: opaque node '" + n.label +
                                   "' has no declared gradient");
        d = n.grad_fn(axis);
        break;
    }
    n.dcache[axis] = std::move(d);
  });
  return *n.dcache[axis];
}

}  // namespace core
