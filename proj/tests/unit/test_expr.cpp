#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "punctlab/errors.hpp"
#include "punctlab/expr.hpp"

using namespace punctlab;

namespace {

cplx value_of(const HoloExpr& f, cplx z, std::optional<int> k = std::nullopt) {
  const SpherePoint p = f.eval(z, k);
  REQUIRE(p.is_finite());
  return p.value();
}

NodePtr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  switch (pick(rng)) {
    case 0:
      return ast::constant({coef(rng), coef(rng)});
    case 1:
      return ast::var();
    case 2:
      return ast::binary(Op::Add, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 3:
      return ast::binary(Op::Sub, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 4:
    case 5:
      return ast::binary(Op::Mul, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 6:
      return ast::binary(Op::Div, random_tree(rng, depth - 1),
                         ast::binary(Op::Add, ast::constant({3.0, 0.0}), random_tree(rng, depth - 1)));
    case 7:
      return ast::power(random_tree(rng, depth - 1), std::uniform_int_distribution<int>(-2, 3)(rng));
    case 8:
      return ast::unary(Op::Exp, random_tree(rng, depth - 1));
    default:
      return ast::unary(std::uniform_int_distribution<int>(0, 1)(rng) ? Op::Sin : Op::Cos, random_tree(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parse: identity, exp(1/z), parameter") {
  const HoloExpr id = HoloExpr::parse("z");
  CHECK(id.root()->op == Op::Var);
  CHECK(value_of(id, {0.3, -0.7}) == cplx{0.3, -0.7});

  const HoloExpr e = HoloExpr::parse("exp(1/z)");
  REQUIRE(e.root()->op == Op::Exp);
  REQUIRE(e.root()->lhs->op == Op::Div);
  CHECK(e.root()->lhs->lhs->op == Op::Const);
  CHECK(e.root()->lhs->lhs->value == cplx{1.0, 0.0});
  CHECK(e.root()->lhs->rhs->op == Op::Var);

  const HoloExpr kz = HoloExpr::parse("k*z");
  CHECK(kz.uses_parameter());
  CHECK(value_of(kz, 2.0, 3) == cplx{6.0, 0.0});
  CHECK_THROWS_AS(kz.eval(2.0), InvalidArgument);
}

TEST_CASE("parse: errors carry positions") {
  CHECK_THROWS_AS(HoloExpr::parse(""), SyntaxError);
  CHECK_THROWS_AS(HoloExpr::parse("z +"), SyntaxError);
  CHECK_THROWS_AS(HoloExpr::parse("(z"), SyntaxError);
  CHECK_THROWS_AS(HoloExpr::parse("z^1.5"), SyntaxError);
  CHECK_THROWS_AS(HoloExpr::parse("log(z)"), UnknownIdentifier);
  try {
    HoloExpr::parse("z + w");
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.position() == 4);
    CHECK(e.name() == "w");
  }
}

TEST_CASE("parse: literals, unary minus and imaginary suffix") {
  CHECK(value_of(HoloExpr::parse("2i*z"), 1.0) == cplx{0.0, 2.0});
  CHECK(value_of(HoloExpr::parse("-z^2"), 3.0) == cplx{-9.0, 0.0});
  CHECK(value_of(HoloExpr::parse("1.5e2"), 0.0) == cplx{150.0, 0.0});
  CHECK(value_of(HoloExpr::parse("z^-2"), 2.0) == cplx{0.25, 0.0});
  CHECK(value_of(HoloExpr::parse("i*i"), 0.0) == cplx{-1.0, 0.0});
  CHECK(value_of(HoloExpr::parse("2-3-4"), 0.0) == cplx{-5.0, 0.0});
  CHECK(value_of(HoloExpr::parse("8/2/2"), 0.0) == cplx{2.0, 0.0});
}

TEST_CASE("print-parse round trip is idempotent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const HoloExpr e(random_tree(rng, 4));
    const std::string once = e.to_string();
    const std::string twice = HoloExpr::parse(once).to_string();
    CHECK_MESSAGE(once == twice, once);
  }
  for (const char* s : {"z", "exp(1/z)", "-(z+1)*2", "k*z^2", "(1+2i)*z", "-2*z", "z-(-3)", "-(-z)"}) {
    const std::string once = HoloExpr::parse(s).to_string();
    CHECK(HoloExpr::parse(once).to_string() == once);
  }
}

TEST_CASE("eval examples") {
  CHECK(std::abs(value_of(HoloExpr::parse("z^2"), {1.0, 1.0}) - cplx{0.0, 2.0}) < 1e-15);
  CHECK(HoloExpr::parse("1/z").eval(0.0).is_infinite());
  CHECK(std::abs(value_of(HoloExpr::parse("exp(1/z)"), 1.0) - std::exp(1.0)) < 1e-15);
}

TEST_CASE("eval: indeterminate and essential points are reported") {
  CHECK_THROWS_AS(HoloExpr::parse("z/z").eval(0.0), IndeterminateError);
  CHECK_THROWS_AS(HoloExpr::parse("exp(1/z)").eval(0.0), EvaluationError);
  CHECK(HoloExpr::parse("1/z").evaluate(0.0).ok());
  CHECK(HoloExpr::parse("1/z - 1/z").evaluate(0.0).status == EvalStatus::Indeterminate);
  CHECK(HoloExpr::parse("1/(1/z)").eval(0.0) == SpherePoint{cplx{0.0, 0.0}});
  CHECK(HoloExpr::parse("exp(z)").eval(1000.0).is_infinite());
}

TEST_CASE("eval respects f+g = f+g in the same order") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    const NodePtr f = random_tree(rng, 3);
    const NodePtr g = random_tree(rng, 3);
    const HoloExpr sum(ast::binary(Op::Add, f, g));
    const cplx z{u(rng), u(rng)};
    const EvalResult a = HoloExpr(f).evaluate(z);
    const EvalResult b = HoloExpr(g).evaluate(z);
    const EvalResult s = sum.evaluate(z);
    if (!a.ok() || !b.ok() || !s.ok() || a.point.is_infinite() || b.point.is_infinite()) continue;
    CHECK(s.point == SpherePoint{a.point.value() + b.point.value()});
  }
}

TEST_CASE("derivative strings") {
  CHECK(HoloExpr::parse("z").derivative().to_string() == "1");
  CHECK(HoloExpr::parse("exp(1/z)").derivative().to_string() == "-exp(1/z)/z^2");
  CHECK(HoloExpr::parse("k*z^2").derivative().to_string() == "2*k*z");
  CHECK(HoloExpr::parse("5").derivative().to_string() == "0");
}

TEST_CASE("derivative agrees with central differences on random expressions") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 100; ++i) {
    const HoloExpr f(random_tree(rng, 4));
    const HoloExpr df = f.derivative();
    const cplx z{u(rng), u(rng)};
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    const EvalResult d = df.evaluate(z);
    const EvalResult fp = f.evaluate(z + h);
    const EvalResult fm = f.evaluate(z - h);
    const EvalResult f0 = f.evaluate(z);
    if (!d.ok() || !fp.ok() || !fm.ok() || !f0.ok()) continue;
    if (d.point.is_infinite() || fp.point.is_infinite() || fm.point.is_infinite()) continue;
    const cplx exact = d.point.value();
    // Away from poles: keep values and derivatives moderate.
    if (std::abs(exact) > 1e2 || std::abs(f0.point.value()) > 1e2) continue;
    const cplx fd = (fp.point.value() - fm.point.value()) / (2.0 * h);
    CHECK_MESSAGE(std::abs(exact - fd) / (1.0 + std::abs(exact)) <= 1e-6, f.to_string());
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("spherical derivative examples") {
  CHECK(spherical_derivative(HoloExpr::parse("z"), 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  const HoloExpr e = HoloExpr::parse("exp(1/z)");
  for (double t : {1.0, 0.1, 1e-3, 1e-6}) {
    const double fs = spherical_derivative(e, {0.0, t});
    CHECK(fs == doctest::Approx(1.0 / (t * t)).epsilon(1e-9));
  }
  CHECK(spherical_derivative(HoloExpr::parse("3+2i"), {0.4, 0.1}) == 0.0);
  // Finite at a pole: f = 1/z at 0 has f# = 2 there.
  CHECK(spherical_derivative(HoloExpr::parse("1/z"), 0.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(spherical_derivative(e, 0.0), EvaluationError);
}

TEST_CASE("spherical derivative is invariant under f -> 1/f") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const NodePtr f = random_tree(rng, 4);
    const HoloExpr a(f);
    const HoloExpr b(ast::binary(Op::Div, ast::constant({1.0, 0.0}), f));
    const cplx z{u(rng), u(rng)};
    const Jet ja = a.jet(z);
    const Jet jb = b.jet(z);
    if (!ja.ok() || !jb.ok()) continue;
    const double sa = ja.spherical_derivative();
    const double sb = jb.spherical_derivative();
    if (!std::isfinite(sa) || sa == 0.0) continue;
    CHECK(std::abs(sa - sb) <= 1e-9 * sa);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("jet agrees with the direct formula 2|f'|/(1+|f|^2)") {
  const HoloExpr f = HoloExpr::parse("sin(z)*exp(z)/(z^2+2)");
  const HoloExpr df = f.derivative();
  for (cplx z : {cplx{0.3, 0.2}, cplx{-1.0, 0.5}, cplx{2.0, -1.0}}) {
    const cplx v = value_of(f, z);
    const cplx d = value_of(df, z);
    const double direct = 2.0 * std::abs(d) / (1.0 + std::norm(v));
    CHECK(spherical_derivative(f, z) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("large arguments stay finite through local scaling") {
  const HoloExpr s = HoloExpr::parse("sin(1/z)");
  const double fs = spherical_derivative(s, {0.0, 1e-3});
  // |sin(i/t)| ~ e^{1/t}/2, so f# ~ 2|cos|/(|sin|^2 t^2) ~ 4 e^{-1/t} / t^2 = tiny but finite.
  CHECK(std::isfinite(fs));
  CHECK(fs >= 0.0);
  CHECK(HoloExpr::parse("exp(1/z)").jet({1e-6, 0.0}).point().is_infinite());
}

TEST_CASE("compose, pullback, bind") {
  const HoloExpr f = HoloExpr::parse("z^2+1");
  const HoloExpr g = HoloExpr::parse("z+1");
  CHECK(value_of(f.compose(g), 2.0) == cplx{10.0, 0.0});
  CHECK(value_of(f.pullback({1.0, 0.0}, {2.0, 0.0}), 1.0) == cplx{10.0, 0.0});
  const HoloExpr kz = HoloExpr::parse("k*z").bind(4);
  CHECK_FALSE(kz.uses_parameter());
  CHECK(value_of(kz, 2.5) == cplx{10.0, 0.0});
}
