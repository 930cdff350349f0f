#include <cctype>
#include <charconv>
#include <limits>
#include <string>

#include "punctlab/errors.hpp"
#include "punctlab/expr.hpp"

namespace punctlab {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "empty expression");
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = ast::binary(Op::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = ast::binary(Op::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    if (accept('-')) {
      NodePtr operand = parse_term();
      // The parser never folds, so a Const operand is a literal; negating it
      // in place makes printed negative constants re-parse to the same tree.
      if (operand->op == Op::Const) return ast::constant(-operand->value);
      return ast::unary(Op::Neg, operand);
    }
    return parse_product();
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = ast::binary(Op::Mul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = ast::binary(Op::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_base();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      bool negative = false;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
        negative = text_[pos_] == '-';
        ++pos_;
      }
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (digits == pos_) throw SyntaxError(start, "expected integer exponent");
      int n = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, n);
      if (ec != std::errc{}) throw SyntaxError(start, "exponent out of range");
      return ast::power(base, negative ? -n : n);
    }
    return base;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "z") return ast::var();
      if (name == "k") return ast::param();
      if (name == "i") return ast::constant(cplx{0.0, 1.0});
      Op fn;
      if (name == "exp") {
        fn = Op::Exp;
      } else if (name == "sin") {
        fn = Op::Sin;
      } else if (name == "cos") {
        fn = Op::Cos;
      } else {
        throw UnknownIdentifier(start, std::string(name));
      }
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      return ast::unary(fn, arg);
    }
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, x);
    if (ec != std::errc{} || ptr != text_.data() + pos_) throw SyntaxError(start, "malformed number");
    bool imaginary = false;
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 == text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_ + 1])))) {
      imaginary = true;
      ++pos_;
    }
    return ast::constant(imaginary ? cplx{0.0, x} : cplx{x, 0.0});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Printing ------------------------------------------------------------------

constexpr int kPrecSum = 1;
constexpr int kPrecProduct = 2;
constexpr int kPrecPower = 4;
constexpr int kPrecAtom = 5;

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub:
    case Op::Neg:
      return kPrecSum;
    case Op::Mul:
    case Op::Div:
      return kPrecProduct;
    case Op::Pow:
      return kPrecPower;
    case Op::Const: {
      const double re = n.value.real();
      const double im = n.value.imag();
      if (re != 0.0 && im != 0.0) return kPrecSum;
      if (std::signbit(re) && im == 0.0 && re != 0.0) return kPrecSum;
      if (re == 0.0 && im < 0.0) return kPrecSum;
      return kPrecAtom;
    }
    default:
      return kPrecAtom;
  }
}

std::string print_const(cplx c) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) return format_double(re == 0.0 ? 0.0 : re);
  if (re == 0.0) return format_double(im) + "i";
  std::string s = format_double(re);
  if (im < 0.0) return s + "-" + format_double(-im) + "i";
  return s + "+" + format_double(im) + "i";
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Const:
      out += print_const(n.value);
      return;
    case Op::Var:
      out += 'z';
      return;
    case Op::Param:
      out += 'k';
      return;
    case Op::Add:
    case Op::Sub:
      print_child(*n.lhs, kPrecSum, out);
      out += n.op == Op::Add ? '+' : '-';
      print_child(*n.rhs, kPrecSum + 1, out);
      return;
    case Op::Mul:
    case Op::Div:
      print_child(*n.lhs, kPrecProduct, out);
      out += n.op == Op::Mul ? '*' : '/';
      print_child(*n.rhs, kPrecProduct + 1, out);
      return;
    case Op::Neg:
      out += '-';
      // "-" applies to a whole product; a sum must be parenthesised.
      if (n.lhs->op == Op::Add || n.lhs->op == Op::Sub ||
          (n.lhs->op == Op::Const && precedence(*n.lhs) == kPrecSum)) {
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
      } else {
        print_node(*n.lhs, out);
      }
      return;
    case Op::Pow:
      print_child(*n.lhs, kPrecAtom, out);
      out += '^';
      out += std::to_string(n.exponent);
      return;
    case Op::Exp:
    case Op::Sin:
    case Op::Cos:
      out += n.op == Op::Exp ? "exp(" : n.op == Op::Sin ? "sin(" : "cos(";
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

bool contains_param(const Node& n) {
  if (n.op == Op::Param) return true;
  if (n.lhs && contains_param(*n.lhs)) return true;
  if (n.rhs && contains_param(*n.rhs)) return true;
  return false;
}

}  // namespace

HoloExpr HoloExpr::parse(std::string_view text) {
  Parser p(text);
  return HoloExpr(p.parse_all(), std::string(text));
}

HoloExpr::HoloExpr(NodePtr root, std::string source_text) : root_(std::move(root)), source_(std::move(source_text)) {
  if (!root_) throw InvalidArgument("null expression");
  uses_param_ = contains_param(*root_);
  if (source_.empty()) source_ = to_string();
  compile();
}

std::string HoloExpr::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

}  // namespace punctlab
