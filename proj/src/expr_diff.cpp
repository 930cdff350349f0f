#include <functional>

#include "punctlab/errors.hpp"
#include "punctlab/expr.hpp"

namespace punctlab {
namespace ast {
namespace {

NodePtr make(Op op, cplx value, int exponent, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->exponent = exponent;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::Const; }
bool is_value(const NodePtr& n, cplx c) { return n->op == Op::Const && n->value == c; }
bool is_zero(const NodePtr& n) { return is_value(n, {0.0, 0.0}); }
bool is_one(const NodePtr& n) { return is_value(n, {1.0, 0.0}); }

bool is_negative_real(const NodePtr& n) {
  return n->op == Op::Const && n->value.imag() == 0.0 && n->value.real() < 0.0;
}

cplx const_pow(cplx base, int n) {
  cplx r{1.0, 0.0};
  const bool inverse = n < 0;
  for (int i = 0; i < (inverse ? -n : n); ++i) r *= base;
  return inverse ? 1.0 / r : r;
}

}  // namespace

NodePtr constant(cplx c) { return make(Op::Const, c, 0, nullptr, nullptr); }
NodePtr var() { return make(Op::Var, {}, 0, nullptr, nullptr); }
NodePtr param() { return make(Op::Param, {}, 0, nullptr, nullptr); }
NodePtr binary(Op op, NodePtr a, NodePtr b) { return make(op, {}, 0, std::move(a), std::move(b)); }
NodePtr unary(Op op, NodePtr a) { return make(op, {}, 0, std::move(a), nullptr); }
NodePtr power(NodePtr a, int n) { return make(Op::Pow, {}, n, std::move(a), nullptr); }

bool equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == Op::Const && a->value != b->value) return false;
  if (a->op == Op::Pow && a->exponent != b->exponent) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

NodePtr neg(NodePtr a) {
  if (is_const(a)) return constant(-a->value);
  if (a->op == Op::Neg) return a->lhs;
  return unary(Op::Neg, std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (is_const(a) && is_const(b)) return constant(a->value + b->value);
  if (b->op == Op::Neg) return sub(std::move(a), b->lhs);
  if (is_negative_real(b)) return sub(std::move(a), constant(-b->value));
  return binary(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return neg(std::move(b));
  if (is_const(a) && is_const(b)) return constant(a->value - b->value);
  if (b->op == Op::Neg) return add(std::move(a), b->lhs);
  return binary(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_zero(a) || is_zero(b)) return constant({0.0, 0.0});
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (is_const(a) && is_const(b)) return constant(a->value * b->value);
  if (is_value(a, {-1.0, 0.0})) return neg(std::move(b));
  if (is_value(b, {-1.0, 0.0})) return neg(std::move(a));
  if (a->op == Op::Neg) return neg(mul(a->lhs, std::move(b)));
  if (b->op == Op::Neg) return neg(mul(std::move(a), b->lhs));
  // Constants first.
  if (is_const(b)) return mul(std::move(b), std::move(a));
  if (b->op == Op::Div) return div(mul(std::move(a), b->lhs), b->rhs);
  // Left-associate products.
  if (b->op == Op::Mul) return mul(mul(std::move(a), b->lhs), b->rhs);
  return binary(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_zero(a)) return constant({0.0, 0.0});
  if (is_one(b)) return a;
  if (is_const(a) && is_const(b) && !is_zero(b)) return constant(a->value / b->value);
  if (is_negative_real(a)) return neg(div(constant(-a->value), std::move(b)));
  if (a->op == Op::Neg) return neg(div(a->lhs, std::move(b)));
  if (b->op == Op::Neg) return neg(div(std::move(a), b->lhs));
  return binary(Op::Div, std::move(a), std::move(b));
}

NodePtr pow(NodePtr a, int n) {
  if (n == 0) return constant({1.0, 0.0});
  if (n == 1) return a;
  if (is_const(a) && !(is_zero(a) && n < 0)) return constant(const_pow(a->value, n));
  return power(std::move(a), n);
}

}  // namespace ast

namespace {

NodePtr differentiate(const NodePtr& n) {
  using namespace ast;
  switch (n->op) {
    case Op::Const:
    case Op::Param:
      return constant({0.0, 0.0});
    case Op::Var:
      return constant({1.0, 0.0});
    case Op::Add:
      return add(differentiate(n->lhs), differentiate(n->rhs));
    case Op::Sub:
      return sub(differentiate(n->lhs), differentiate(n->rhs));
    case Op::Mul:
      return add(mul(differentiate(n->lhs), n->rhs), mul(n->lhs, differentiate(n->rhs)));
    case Op::Div: {
      const NodePtr da = differentiate(n->lhs);
      const NodePtr db = differentiate(n->rhs);
      return div(sub(mul(da, n->rhs), mul(n->lhs, db)), pow(n->rhs, 2));
    }
    case Op::Neg:
      return neg(differentiate(n->lhs));
    case Op::Pow: {
      const int e = n->exponent;
      if (e == 0) return constant({0.0, 0.0});
      return mul(mul(constant({static_cast<double>(e), 0.0}), pow(n->lhs, e - 1)), differentiate(n->lhs));
    }
    case Op::Exp:
      return mul(n, differentiate(n->lhs));
    case Op::Sin:
      return mul(unary(Op::Cos, n->lhs), differentiate(n->lhs));
    case Op::Cos:
      return neg(mul(unary(Op::Sin, n->lhs), differentiate(n->lhs)));
  }
  return constant({0.0, 0.0});
}

NodePtr replace(const NodePtr& n, const std::function<NodePtr(const Node&)>& leaf) {
  if (NodePtr r = leaf(*n)) return r;
  if (!n->lhs && !n->rhs) return n;
  auto copy = std::make_shared<Node>(*n);
  if (n->lhs) copy->lhs = replace(n->lhs, leaf);
  if (n->rhs) copy->rhs = replace(n->rhs, leaf);
  return copy;
}

}  // namespace

HoloExpr HoloExpr::derivative() const { return HoloExpr(differentiate(root_)); }

HoloExpr HoloExpr::compose(const HoloExpr& inner) const {
  const NodePtr sub = inner.root();
  return HoloExpr(replace(root_, [&](const Node& n) -> NodePtr { return n.op == Op::Var ? sub : nullptr; }));
}

HoloExpr HoloExpr::pullback(cplx center, cplx scale) const {
  // center + scale*z, kept unsimplified so that evaluation computes exactly
  // center + scale*z in floating point.
  const NodePtr inner =
      ast::binary(Op::Add, ast::constant(center), ast::binary(Op::Mul, ast::constant(scale), ast::var()));
  return HoloExpr(replace(root_, [&](const Node& n) -> NodePtr { return n.op == Op::Var ? inner : nullptr; }));
}

HoloExpr HoloExpr::bind(int k) const {
  if (!uses_param_) return *this;
  const NodePtr c = ast::constant({static_cast<double>(k), 0.0});
  return HoloExpr(replace(root_, [&](const Node& n) -> NodePtr { return n.op == Op::Param ? c : nullptr; }));
}

}  // namespace punctlab
