#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "punctlab/errors.hpp"
#include "punctlab/expr.hpp"

namespace punctlab {
namespace {

// exp overflows a double beyond this real part.
constexpr double kExpOverflow = 709.0;
// Below this |Im w|, sin/cos are evaluated directly.
constexpr double kTrigDirect = 20.0;

/// Value of the extended complex plane during direct evaluation.
struct Value {
  cplx v{};
  bool inf = false;
};

cplx ipow(cplx base, unsigned n) {
  cplx result{1.0, 0.0};
  while (n != 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n != 0) base *= base;
  }
  return result;
}

bool has_inf(cplx c) { return std::isinf(c.real()) || std::isinf(c.imag()); }
bool has_nan(cplx c) { return std::isnan(c.real()) || std::isnan(c.imag()); }
bool is_zero(cplx c) { return c.real() == 0.0 && c.imag() == 0.0; }

// Normalises an arithmetic result; returns false on NaN.
bool settle(cplx c, Value& out) {
  if (has_nan(c)) return false;
  if (has_inf(c)) {
    out = Value{{}, true};
  } else {
    out = Value{c, false};
  }
  return true;
}

struct Step {
  Value value;
  EvalStatus status = EvalStatus::Ok;
};

Step apply_binary(Op op, const Value& a, const Value& b) {
  Value out;
  switch (op) {
    case Op::Add:
    case Op::Sub:
      if (a.inf && b.inf) return {{}, EvalStatus::Indeterminate};
      if (a.inf || b.inf) return {{{}, true}};
      if (!settle(op == Op::Add ? a.v + b.v : a.v - b.v, out)) return {{}, EvalStatus::Indeterminate};
      return {out};
    case Op::Mul:
      if ((a.inf && !b.inf && is_zero(b.v)) || (b.inf && !a.inf && is_zero(a.v))) {
        return {{}, EvalStatus::Indeterminate};
      }
      if (a.inf || b.inf) return {{{}, true}};
      if (!settle(a.v * b.v, out)) return {{}, EvalStatus::Indeterminate};
      return {out};
    case Op::Div:
      if (a.inf && b.inf) return {{}, EvalStatus::Indeterminate};
      if (a.inf) return {{{}, true}};
      if (b.inf) return {{cplx{0.0, 0.0}, false}};
      if (is_zero(b.v)) {
        if (is_zero(a.v)) return {{}, EvalStatus::Indeterminate};
        return {{{}, true}};
      }
      if (!settle(a.v / b.v, out)) return {{}, EvalStatus::Indeterminate};
      return {out};
    default:
      return {{}, EvalStatus::Indeterminate};
  }
}

Step apply_unary(Op op, int exponent, const Value& a) {
  Value out;
  switch (op) {
    case Op::Neg:
      if (a.inf) return {a};
      return {{-a.v, false}};
    case Op::Pow: {
      if (exponent == 0) return {{cplx{1.0, 0.0}, false}};
      const unsigned n = static_cast<unsigned>(exponent < 0 ? -static_cast<long>(exponent) : exponent);
      if (a.inf) return exponent > 0 ? Step{{{}, true}} : Step{{cplx{0.0, 0.0}, false}};
      if (exponent < 0) {
        if (is_zero(a.v)) return {{{}, true}};
        const cplx p = ipow(a.v, n);
        if (has_inf(p)) return {{cplx{0.0, 0.0}, false}};
        if (is_zero(p)) return {{{}, true}};
        if (!settle(1.0 / p, out)) return {{}, EvalStatus::Indeterminate};
        return {out};
      }
      if (!settle(ipow(a.v, n), out)) return {{}, EvalStatus::Indeterminate};
      return {out};
    }
    case Op::Exp:
      if (a.inf) return {{}, EvalStatus::Essential};
      if (a.v.real() > kExpOverflow) return {{{}, true}};
      if (!settle(std::exp(a.v), out)) return {{}, EvalStatus::Indeterminate};
      return {out};
    case Op::Sin:
    case Op::Cos:
      if (a.inf) return {{}, EvalStatus::Essential};
      if (std::abs(a.v.imag()) > kExpOverflow) return {{{}, true}};
      if (!settle(op == Op::Sin ? std::sin(a.v) : std::cos(a.v), out)) return {{}, EvalStatus::Indeterminate};
      return {out};
    default:
      return {{}, EvalStatus::Indeterminate};
  }
}

// Jet arithmetic ------------------------------------------------------------

void normalise(Jet& j) {
  const double s = std::max({std::abs(j.p.real()), std::abs(j.p.imag()), std::abs(j.q.real()), std::abs(j.q.imag())});
  if (s == 0.0 || std::isnan(s)) {
    j.status = EvalStatus::Indeterminate;
    return;
  }
  if (std::isinf(s)) {
    j.status = EvalStatus::Indeterminate;
    return;
  }
  const double inv = 1.0 / s;
  j.p *= inv;
  j.q *= inv;
  j.dp *= inv;
  j.dq *= inv;
}

Jet jet_const(cplx c) { return Jet{c, {1.0, 0.0}, {}, {}, EvalStatus::Ok}; }

Jet jet_binary(Op op, const Jet& a, const Jet& b) {
  Jet r;
  switch (op) {
    case Op::Add:
    case Op::Sub: {
      const double sgn = op == Op::Add ? 1.0 : -1.0;
      r.p = a.p * b.q + sgn * b.p * a.q;
      r.q = a.q * b.q;
      r.dp = a.dp * b.q + a.p * b.dq + sgn * (b.dp * a.q + b.p * a.dq);
      r.dq = a.dq * b.q + a.q * b.dq;
      break;
    }
    case Op::Mul:
      r.p = a.p * b.p;
      r.q = a.q * b.q;
      r.dp = a.dp * b.p + a.p * b.dp;
      r.dq = a.dq * b.q + a.q * b.dq;
      break;
    case Op::Div:
      r.p = a.p * b.q;
      r.q = a.q * b.p;
      r.dp = a.dp * b.q + a.p * b.dq;
      r.dq = a.dq * b.p + a.q * b.dp;
      break;
    default:
      r.status = EvalStatus::Indeterminate;
      return r;
  }
  normalise(r);
  return r;
}

// Finite argument value and derivative of a jet, or nullopt at infinity.
bool finite_arg(const Jet& a, cplx& w, cplx& dw) {
  if (is_zero(a.q)) return false;
  w = a.p / a.q;
  dw = (a.dp * a.q - a.p * a.dq) / (a.q * a.q);
  return !(has_inf(w) || has_nan(w));
}

Jet jet_unary(Op op, int exponent, const Jet& a) {
  Jet r;
  switch (op) {
    case Op::Neg:
      r = Jet{-a.p, a.q, -a.dp, a.dq, EvalStatus::Ok};
      return r;
    case Op::Pow: {
      if (exponent == 0) return jet_const({1.0, 0.0});
      const bool inverse = exponent < 0;
      const unsigned n = static_cast<unsigned>(inverse ? -static_cast<long>(exponent) : exponent);
      const cplx pn = ipow(a.p, n);
      const cplx qn = ipow(a.q, n);
      const cplx dpn = static_cast<double>(n) * ipow(a.p, n - 1) * a.dp;
      const cplx dqn = static_cast<double>(n) * ipow(a.q, n - 1) * a.dq;
      r = inverse ? Jet{qn, pn, dqn, dpn, EvalStatus::Ok} : Jet{pn, qn, dpn, dqn, EvalStatus::Ok};
      normalise(r);
      return r;
    }
    case Op::Exp: {
      cplx w;
      cplx dw;
      if (!finite_arg(a, w, dw)) {
        r.status = EvalStatus::Essential;
        return r;
      }
      if (w.real() > 0.0) {
        // e^w = e^{i Im w} / e^{-Re w}; the scale is a local constant.
        r.p = std::polar(1.0, w.imag());
        r.q = cplx{std::exp(-w.real()), 0.0};
      } else {
        r.p = std::exp(w);
        r.q = cplx{1.0, 0.0};
      }
      r.dp = r.p * dw;
      r.dq = cplx{};
      return r;
    }
    case Op::Sin:
    case Op::Cos: {
      cplx w;
      cplx dw;
      if (!finite_arg(a, w, dw)) {
        r.status = EvalStatus::Essential;
        return r;
      }
      const double y = w.imag();
      if (std::abs(y) < kTrigDirect) {
        r.p = op == Op::Sin ? std::sin(w) : std::cos(w);
        r.dp = (op == Op::Sin ? std::cos(w) : -std::sin(w)) * dw;
        r.q = cplx{1.0, 0.0};
        r.dq = cplx{};
        normalise(r);
        return r;
      }
      // Scaled by e^{-|y|}: A = e^{iw - |y|}, B = e^{-iw - |y|}.
      const cplx iw{-y, w.real()};
      const cplx A = std::exp(iw - std::abs(y));
      const cplx B = std::exp(-iw - std::abs(y));
      const cplx sin_s = (A - B) / cplx{0.0, 2.0};
      const cplx cos_s = (A + B) / 2.0;
      r.p = op == Op::Sin ? sin_s : cos_s;
      r.dp = (op == Op::Sin ? cos_s : -sin_s) * dw;
      r.q = cplx{std::exp(-std::abs(y)), 0.0};
      r.dq = cplx{};
      normalise(r);
      return r;
    }
    default:
      r.status = EvalStatus::Indeterminate;
      return r;
  }
}

// Log-jet arithmetic ---------------------------------------------------------

constexpr double kPi = 3.14159265358979323846;

LogJet log_fail() { return LogJet{{}, {}, EvalStatus::Indeterminate}; }

LogJet log_const(cplx c) {
  if (is_zero(c)) return log_fail();
  return LogJet{std::log(c), {}, EvalStatus::Ok};
}

LogJet log_sum(const LogJet& a, const LogJet& b) {
  // log(e^A + e^B) = A + log(1 + e^{B-A}) with Re A >= Re B.
  const bool a_big = a.L.real() >= b.L.real();
  const LogJet& m = a_big ? a : b;
  const LogJet& n = a_big ? b : a;
  const cplx e = std::exp(n.L - m.L);
  const cplx s = 1.0 + e;
  if (std::abs(s) < 1e-300) return log_fail();
  return LogJet{m.L + std::log(s), (m.dL + e * n.dL) / s, EvalStatus::Ok};
}

LogJet log_binary(Op op, const LogJet& a, const LogJet& b) {
  switch (op) {
    case Op::Add:
      return log_sum(a, b);
    case Op::Sub:
      return log_sum(a, LogJet{b.L + cplx{0.0, kPi}, b.dL, EvalStatus::Ok});
    case Op::Mul:
      return LogJet{a.L + b.L, a.dL + b.dL, EvalStatus::Ok};
    case Op::Div:
      return LogJet{a.L - b.L, a.dL - b.dL, EvalStatus::Ok};
    default:
      return log_fail();
  }
}

LogJet log_unary(Op op, int exponent, const LogJet& a) {
  switch (op) {
    case Op::Neg:
      return LogJet{a.L + cplx{0.0, kPi}, a.dL, EvalStatus::Ok};
    case Op::Pow:
      return LogJet{static_cast<double>(exponent) * a.L, static_cast<double>(exponent) * a.dL, EvalStatus::Ok};
    case Op::Exp: {
      if (a.L.real() > kExpOverflow) return log_fail();
      const cplx w = std::exp(a.L);
      return LogJet{w, w * a.dL, EvalStatus::Ok};
    }
    case Op::Sin:
    case Op::Cos: {
      if (a.L.real() > kExpOverflow) return log_fail();
      const cplx w = std::exp(a.L);
      const cplx dw = w * a.dL;
      const bool is_sin = op == Op::Sin;
      if (std::abs(w.imag()) < kTrigDirect) {
        const cplx s = std::sin(w);
        const cplx c = std::cos(w);
        const cplx v = is_sin ? s : c;
        if (is_zero(v)) return log_fail();
        return LogJet{std::log(v), (is_sin ? c / s : -s / c) * dw, EvalStatus::Ok};
      }
      // sin w = e^{-iw}(E-1)/(2i), cos w = e^{-iw}(E+1)/2 with E = e^{2iw}
      // when Im w > 0; mirrored otherwise. |E| < 1 in both cases.
      const cplx I{0.0, 1.0};
      const bool upper = w.imag() > 0.0;
      const cplx E = upper ? std::exp(2.0 * I * w) : std::exp(-2.0 * I * w);
      const cplx lead = upper ? -I * w : I * w;
      const cplx minus = upper ? E - 1.0 : 1.0 - E;
      const cplx plus = E + 1.0;
      const cplx cot = I * plus / minus;
      if (is_sin) return LogJet{lead + std::log(minus / (2.0 * I)), cot * dw, EvalStatus::Ok};
      return LogJet{lead + std::log(plus / 2.0), -dw / cot, EvalStatus::Ok};
    }
    default:
      return log_fail();
  }
}

void collect(const Node& n, std::vector<const Node*>& order) {
  if (n.lhs) collect(*n.lhs, order);
  if (n.rhs) collect(*n.rhs, order);
  order.push_back(&n);
}

constexpr std::size_t kInlineStack = 32;

template <typename T>
struct Stack {
  explicit Stack(std::size_t depth) {
    if (depth > kInlineStack) heap.resize(depth);
    data = depth > kInlineStack ? heap.data() : inline_buf.data();
  }
  std::array<T, kInlineStack> inline_buf{};
  std::vector<T> heap;
  T* data;
};

}  // namespace

void HoloExpr::compile() {
  std::vector<const Node*> order;
  collect(*root_, order);
  program_.clear();
  program_.reserve(order.size());
  std::size_t depth = 0;
  max_depth_ = 0;
  for (const Node* node : order) {
    program_.push_back(Instr{node->op, node->exponent, node->value});
    switch (node->op) {
      case Op::Const:
      case Op::Var:
      case Op::Param:
        ++depth;
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
        --depth;
        break;
      default:
        break;
    }
    max_depth_ = std::max(max_depth_, depth);
  }
}

EvalResult HoloExpr::evaluate(cplx z, double k) const noexcept {
  Stack<Value> stack(max_depth_);
  Value* s = stack.data;
  std::size_t top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::Const:
        s[top++] = Value{in.value, false};
        break;
      case Op::Var:
        s[top++] = Value{z, false};
        break;
      case Op::Param:
        s[top++] = Value{cplx{k, 0.0}, false};
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        const Step r = apply_binary(in.op, s[top - 2], s[top - 1]);
        if (r.status != EvalStatus::Ok) return EvalResult{{}, r.status};
        --top;
        s[top - 1] = r.value;
        break;
      }
      default: {
        const Step r = apply_unary(in.op, in.exponent, s[top - 1]);
        if (r.status != EvalStatus::Ok) return EvalResult{{}, r.status};
        s[top - 1] = r.value;
        break;
      }
    }
  }
  const Value& v = s[0];
  return EvalResult{v.inf ? SpherePoint::infinity() : SpherePoint{v.v}, EvalStatus::Ok};
}

Jet HoloExpr::jet(cplx z, double k) const noexcept {
  Stack<Jet> stack(max_depth_);
  Jet* s = stack.data;
  std::size_t top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::Const:
        s[top++] = jet_const(in.value);
        break;
      case Op::Var:
        s[top++] = Jet{z, {1.0, 0.0}, {1.0, 0.0}, {}, EvalStatus::Ok};
        break;
      case Op::Param:
        s[top++] = jet_const(cplx{k, 0.0});
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        Jet r = jet_binary(in.op, s[top - 2], s[top - 1]);
        if (!r.ok()) return r;
        --top;
        s[top - 1] = r;
        break;
      }
      default: {
        Jet r = jet_unary(in.op, in.exponent, s[top - 1]);
        if (!r.ok()) return r;
        s[top - 1] = r;
        break;
      }
    }
  }
  return s[0];
}

LogJet HoloExpr::log_jet(cplx z, double k) const noexcept {
  Stack<LogJet> stack(max_depth_);
  LogJet* s = stack.data;
  std::size_t top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::Const:
        s[top++] = log_const(in.value);
        break;
      case Op::Var:
        if (is_zero(z)) return log_fail();
        s[top++] = LogJet{std::log(z), 1.0 / z, EvalStatus::Ok};
        break;
      case Op::Param:
        s[top++] = log_const(cplx{k, 0.0});
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        const LogJet r = log_binary(in.op, s[top - 2], s[top - 1]);
        if (!r.ok()) return r;
        --top;
        s[top - 1] = r;
        break;
      }
      default: {
        const LogJet r = log_unary(in.op, in.exponent, s[top - 1]);
        if (!r.ok()) return r;
        s[top - 1] = r;
        break;
      }
    }
    if (!std::isfinite(s[top - 1].L.real()) || !std::isfinite(s[top - 1].dL.real()) ||
        !std::isfinite(s[top - 1].dL.imag())) {
      return log_fail();
    }
  }
  return s[0];
}

double LogJet::log_spherical_derivative() const noexcept {
  // f# = |f'/f| / cosh(log|f|); log cosh u = |u| + log1p(e^{-2|u|}) - log 2.
  const double u = std::abs(L.real());
  return std::log(std::abs(dL)) - (u + std::log1p(std::exp(-2.0 * u)) - std::log(2.0));
}

SpherePoint HoloExpr::eval(cplx z, std::optional<int> k) const {
  if (uses_param_ && !k) throw InvalidArgument("expression '" + source_ + "' uses the parameter k");
  const EvalResult r = evaluate(z, k ? static_cast<double>(*k) : 0.0);
  switch (r.status) {
    case EvalStatus::Ok:
      return r.point;
    case EvalStatus::Indeterminate:
      throw IndeterminateError("indeterminate form evaluating '" + source_ + "'");
    case EvalStatus::Essential:
      throw EvaluationError("essential singularity evaluating '" + source_ + "'");
  }
  return r.point;
}

SpherePoint Jet::point() const noexcept {
  if (is_zero(q)) return SpherePoint::infinity();
  const cplx v = p / q;
  if (has_inf(v) || has_nan(v)) return SpherePoint::infinity();
  return SpherePoint{v};
}

double Jet::spherical_derivative() const noexcept {
  const double num = std::abs(dp * q - p * dq);
  const double den = std::norm(p) + std::norm(q);
  return 2.0 * num / den;
}

cplx Jet::log_derivative() const noexcept {
  // f'/f = (p'q - pq') / (pq)
  const cplx den = p * q;
  if (is_zero(den)) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
  }
  return (dp * q - p * dq) / den;
}

double spherical_derivative(const HoloExpr& f, cplx z, std::optional<int> k) {
  if (f.uses_parameter() && !k) throw InvalidArgument("expression uses the parameter k");
  const Jet j = f.jet(z, k ? static_cast<double>(*k) : 0.0);
  if (j.status == EvalStatus::Essential) throw EvaluationError("essential singularity at sample point");
  if (j.status == EvalStatus::Indeterminate) throw IndeterminateError("indeterminate form at sample point");
  const double d = j.spherical_derivative();
  if (!std::isfinite(d)) throw EvaluationError("non-finite spherical derivative");
  return d;
}

}  // namespace punctlab
