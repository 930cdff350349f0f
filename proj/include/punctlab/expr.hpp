#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "punctlab/sphere.hpp"

namespace punctlab {

enum class Op : std::uint8_t { Const, Var, Param, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression tree node. `lhs` holds the only operand of unary
/// nodes (Neg, Pow, Exp, Sin, Cos).
struct Node {
  Op op = Op::Const;
  cplx value{};      // Const
  int exponent = 0;  // Pow
  NodePtr lhs;
  NodePtr rhs;
};

enum class EvalStatus : std::uint8_t {
  Ok,
  Indeterminate,  // 0/0, 0*inf, inf-inf
  Essential,      // exp/sin/cos evaluated at infinity
};

struct EvalResult {
  SpherePoint point;
  EvalStatus status = EvalStatus::Ok;
  bool ok() const noexcept { return status == EvalStatus::Ok; }
};

/// Homogeneous 1-jet of a meromorphic function: f = p/q near the sample
/// point, with dp, dq the derivatives of a holomorphic representative pair.
/// The pair is defined up to a common constant factor.
struct Jet {
  cplx p{};
  cplx q{1.0, 0.0};
  cplx dp{};
  cplx dq{};
  EvalStatus status = EvalStatus::Ok;

  bool ok() const noexcept { return status == EvalStatus::Ok; }
  SpherePoint point() const noexcept;
  /// 2|f'| / (1 + |f|^2), finite at poles.
  double spherical_derivative() const noexcept;
  /// f'/f; infinite at zeros and poles.
  cplx log_derivative() const noexcept;
};

/// Logarithmic 1-jet: L = log f on some branch, dL = f'/f. Used where f
/// itself under- or overflows. Evaluation fails (status != Ok) at zeros and
/// poles of f or of any subterm; callers fall back to Jet there.
struct LogJet {
  cplx L{};
  cplx dL{};
  EvalStatus status = EvalStatus::Ok;

  bool ok() const noexcept { return status == EvalStatus::Ok; }
  /// log f# = log|f'/f| - log cosh(log|f|).
  double log_spherical_derivative() const noexcept;
};

/// Parsed holomorphic (meromorphic) expression in z, optionally depending on
/// an integer family parameter k. Immutable; all methods are thread-safe.
class HoloExpr {
 public:
  /// Grammar:
  ///   expr    := term (("+"|"-") term)*
  ///   term    := "-" term | product
  ///   product := factor (("*"|"/") factor)*
  ///   factor  := base ("^" ["+"|"-"] integer)?
  ///   base    := number | "i" | "z" | "k" | "(" expr ")" | func "(" expr ")"
  ///   func    := "exp" | "sin" | "cos"
  /// Numbers are decimal literals with optional exponent; an "i" suffix
  /// makes them imaginary.
  static HoloExpr parse(std::string_view text);

  explicit HoloExpr(NodePtr root, std::string source_text = {});

  const NodePtr& root() const noexcept { return root_; }
  const std::string& source_text() const noexcept { return source_; }
  bool uses_parameter() const noexcept { return uses_param_; }

  /// Canonical infix form; print(parse(print(e))) == print(e).
  std::string to_string() const;

  /// Extended-arithmetic evaluation; never throws.
  EvalResult evaluate(cplx z, double k = 0.0) const noexcept;

  /// Value of f(z); a nonzero-over-zero division returns infinity.
  /// Throws IndeterminateError on 0/0 forms, EvaluationError at essential
  /// points, InvalidArgument if the expression uses k and none is given.
  SpherePoint eval(cplx z, std::optional<int> k = std::nullopt) const;

  Jet jet(cplx z, double k = 0.0) const noexcept;
  LogJet log_jet(cplx z, double k = 0.0) const noexcept;

  /// Symbolic derivative in z, simplified.
  HoloExpr derivative() const;

  /// f(inner(z)).
  HoloExpr compose(const HoloExpr& inner) const;
  /// f(center + scale * z).
  HoloExpr pullback(cplx center, cplx scale) const;
  /// Replaces the parameter k by the given integer.
  HoloExpr bind(int k) const;

 private:
  struct Instr {
    Op op;
    int exponent;
    cplx value;
  };

  void compile();

  NodePtr root_;
  std::string source_;
  std::vector<Instr> program_;
  std::size_t max_depth_ = 0;
  bool uses_param_ = false;
};

/// f#(z) = lim chordal(f(z), f(w)) / |z - w| = 2|f'(z)| / (1 + |f(z)|^2).
/// Poles are handled in the reciprocal chart. Throws EvaluationError at
/// essential points and IndeterminateError at 0/0 points.
double spherical_derivative(const HoloExpr& f, cplx z, std::optional<int> k = std::nullopt);

namespace ast {

NodePtr constant(cplx c);
NodePtr var();
NodePtr param();
NodePtr binary(Op op, NodePtr a, NodePtr b);
NodePtr unary(Op op, NodePtr a);
NodePtr power(NodePtr a, int n);

/// Structural equality.
bool equal(const NodePtr& a, const NodePtr& b);

/// Simplifying constructors used by the differentiator.
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr neg(NodePtr a);
NodePtr pow(NodePtr a, int n);

}  // namespace ast

}  // namespace punctlab
