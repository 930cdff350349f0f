#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "punctlab/errors.hpp"
#include "punctlab/kernels.hpp"
#include "punctlab/metrics.hpp"

using namespace punctlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson rule for the metric density R/(R^2 - t^2) along [0, x].
double quadrature_distance(double R, double x) {
  const int n = 2000;
  const double h = x / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * R / (R * R - t * t);
  }
  return s * h / 3.0;
}

cplx random_in_disk(std::mt19937_64& rng, cplx a, double R) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return a + std::polar(R * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

}  // namespace

TEST_CASE("chordal distance examples and bounds") {
  const SpherePoint zero{cplx{0.0, 0.0}};
  const SpherePoint one{cplx{1.0, 0.0}};
  CHECK(chordal(zero, SpherePoint::infinity()) == doctest::Approx(2.0));
  CHECK(chordal(one, one) == 0.0);
  CHECK(chordal(SpherePoint::infinity(), SpherePoint::infinity()) == 0.0);
  CHECK(chordal(zero, one) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // Against the textbook formula for moderate values.
  const cplx p{0.3, -2.0};
  const cplx q{-4.0, 1.5};
  const double direct = 2.0 * std::abs(p - q) / std::sqrt((1.0 + std::norm(p)) * (1.0 + std::norm(q)));
  CHECK(chordal(SpherePoint{p}, SpherePoint{q}) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(chordal(SpherePoint{p}, SpherePoint::infinity()) == doctest::Approx(2.0 / std::sqrt(1.0 + std::norm(p))));
  // Huge moduli do not overflow.
  CHECK(chordal(SpherePoint{cplx{1e300, 0.0}}, SpherePoint{cplx{-1e300, 0.0}}) == doctest::Approx(4e-300).epsilon(1e-12));
}

TEST_CASE("chordal and punctured distances satisfy the metric axioms") {
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> mod(0.0, 3.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint a{std::polar(mod(rng), ang(rng))};
    const SpherePoint b{std::polar(mod(rng), ang(rng))};
    const SpherePoint c = i % 10 == 0 ? SpherePoint::infinity() : SpherePoint{std::polar(mod(rng), ang(rng))};
    CHECK(chordal(a, b) == doctest::Approx(chordal(b, a)).epsilon(1e-15));
    CHECK(chordal(a, a) == 0.0);
    CHECK(chordal(a, b) <= 2.0);
    CHECK(chordal(a, c) <= chordal(a, b) + chordal(b, c) + 1e-9);
  }
  for (int i = 0; i < 1000; ++i) {
    const cplx a = random_in_disk(rng, 0.0, 0.999);
    const cplx b = random_in_disk(rng, 0.0, 0.999);
    const cplx c = random_in_disk(rng, 0.0, 0.999);
    CHECK(punctured_distance(a, b) == doctest::Approx(punctured_distance(b, a)).epsilon(1e-12));
    CHECK(punctured_distance(a, a) == 0.0);
    CHECK(punctured_distance(a, c) <= punctured_distance(a, b) + punctured_distance(b, c) + 1e-9);
  }
}

TEST_CASE("Poincare distance examples") {
  const Disk unit(0.0, 1.0);
  CHECK(poincare_distance(unit, 0.0, 0.0) == 0.0);
  const double q = quadrature_distance(1.0, 0.5);
  CHECK(q == doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
  CHECK(poincare_distance(unit, 0.0, 0.5) == doctest::Approx(q).epsilon(1e-12));
  CHECK(poincare_distance(unit, 0.0, 0.5) == doctest::Approx(0.549306).epsilon(1e-6));
  // Radius-R disk: quadrature of R/(R^2 - t^2) on [0, x].
  CHECK(poincare_distance(Disk(0.0, 2.0), 0.0, 1.2) == doctest::Approx(quadrature_distance(2.0, 1.2)).epsilon(1e-10));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Disk d(cplx{0.3, -0.2}, 1.7);
    const cplx shift{-4.0, 2.5};
    const Disk moved(d.center + shift, d.radius);
    const cplx z = random_in_disk(rng, d.center, 1.69);
    const cplx w = random_in_disk(rng, d.center, 1.69);
    CHECK(poincare_distance(moved, z + shift, w + shift) == doctest::Approx(poincare_distance(d, z, w)).epsilon(1e-9));
    CHECK(poincare_distance(d, z, w) == doctest::Approx(poincare_distance(d, w, z)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(poincare_distance(unit, 0.0, 1.0), OutsideDomain);
}

TEST_CASE("comparison bounds") {
  const ComparisonBounds b = comparison_bounds(Disk(0.0, 1.0), 0.5, 0.0, 0.5);
  CHECK(b.lower == doctest::Approx(0.5));
  CHECK(b.upper == doctest::Approx(2.0 / 3.0));
  const double d = poincare_distance(Disk(0.0, 1.0), 0.0, 0.5);
  CHECK(b.lower <= d);
  CHECK(d <= b.upper);
  const ComparisonBounds same = comparison_bounds(Disk(0.0, 1.0), 0.5, 0.25, 0.25);
  CHECK(same.lower == 0.0);
  CHECK(same.upper == 0.0);
  const ComparisonBounds c = comparison_bounds(Disk(0.0, 2.0), 1.0, 0.0, 1.0);
  CHECK(c.lower == doctest::Approx(0.5));
  CHECK(c.upper == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(comparison_bounds(Disk(0.0, 1.0), 0.5, 0.0, 0.6), OutsideDomain);
}

TEST_CASE("comparison sandwich on random configurations") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double R = 2.0 * (1e-3 + u(rng));
    const double r = R * (1e-3 + 0.998 * u(rng));
    const Disk d(cplx{4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0}, R);
    const cplx z = random_in_disk(rng, d.center, r);
    const cplx w = random_in_disk(rng, d.center, r);
    const ComparisonBounds b = comparison_bounds(d, r, z, w);
    const double dist = poincare_distance(d, z, w);
    CHECK(dist - b.lower >= -1e-12);
    CHECK(b.upper - dist >= -1e-12);
  }
}

TEST_CASE("punctured disk examples") {
  const double r0 = std::exp(-2.0 * kPi);
  CHECK(punctured_distance(r0, r0) == 0.0);
  CHECK(punctured_distance(r0, -r0) == doctest::Approx(std::acosh(1.125)).epsilon(1e-12));
  // arccosh(1.125) = 0.4949329...
  CHECK(std::abs(punctured_distance(r0, -r0) - 0.4949329) < 1e-7);
  CHECK(punctured_circle_length(r0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(punctured_circle_length(std::exp(-1.0)) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  double prev = punctured_circle_length(0.9);
  for (double r = 0.5; r > 1e-12; r *= 0.1) {
    const double l = punctured_circle_length(r);
    CHECK(l < prev);
    CHECK(std::abs(l * (-std::log(r)) - 2.0 * kPi) <= 1e-12);
    prev = l;
  }
  CHECK_THROWS_AS(punctured_distance(0.0, 0.5), OutsideDomain);
  CHECK_THROWS_AS(punctured_circle_length(1.0), OutsideDomain);
}

TEST_CASE("points on a circle are within half its length") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = std::pow(10.0, -8.0 * u(rng)) * 0.99;
    const cplx z = std::polar(r, 2.0 * kPi * u(rng));
    const cplx w = std::polar(r, 2.0 * kPi * u(rng));
    CHECK(punctured_distance(z, w) <= punctured_circle_length(r) / 2.0 + 1e-9);
  }
}

TEST_CASE("circle image diameters") {
  CHECK(diam_circle_image(HoloExpr::parse("3+i"), 0.5).diameter == 0.0);
  const CircleDiameter id = diam_circle_image(HoloExpr::parse("z"), 0.5);
  CHECK(id.diameter == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(std::abs(std::abs(id.theta1 - id.theta2) - kPi) < 1e-9);
  CHECK(diam_circle_image(HoloExpr::parse("exp(1/z)"), 0.1).diameter >= 1.99);
  // Pole on a sample point: 1/(z-1/2) on |z| = 1/2 hits it at theta = 0.
  const CircleDiameter pole = diam_circle_image(HoloExpr::parse("1/(z-0.5)+1/(z-0.5)-2/(z-0.5)"), 0.5);
  CHECK(pole.diameter == 0.0);
  CHECK_THROWS_AS(diam_circle_image(HoloExpr::parse("exp(1/(z-0.5))"), 0.5), EvaluationError);
}

TEST_CASE("diameters are invariant under rotating the argument") {
  for (const char* s : {"z^2+1/z", "exp(z)/(z-0.3)", "sin(2*z)+z^3"}) {
    const HoloExpr f = HoloExpr::parse(s);
    const double alpha = 0.7;
    const HoloExpr g = f.pullback(0.0, std::polar(1.0, alpha));
    const double a = diam_circle_image(f, 0.6).diameter;
    const double b = diam_circle_image(g, 0.6).diameter;
    CHECK(std::abs(a - b) <= 1e-6);
  }
}

TEST_CASE("diameter profiles") {
  const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const DiameterProfile id = diameter_profile(HoloExpr::parse("z"), radii);
  for (std::size_t i = 1; i < id.entries.size(); ++i) CHECK(id.entries[i].diameter < id.entries[i - 1].diameter);
  CHECK(id.entries.back().diameter <= 1e-5);
  const DiameterProfile inv = diameter_profile(HoloExpr::parse("1/z"), radii);
  for (std::size_t i = 1; i < inv.entries.size(); ++i) {
    // Image circle of radius 1/r about infinity: chordal diameter 4r/(1+r^2).
    const double r = radii[i];
    CHECK(inv.entries[i].diameter == doctest::Approx(4.0 * r / (1.0 + r * r)).epsilon(1e-9));
  }
  const DiameterProfile ess = diameter_profile(HoloExpr::parse("exp(1/z)"), radii);
  for (const DiameterEntry& e : ess.entries) CHECK(e.diameter >= 1.99);

  std::ostringstream csv;
  write_csv(csv, id);
  CHECK(csv.str().rfind("radius,diameter,theta1,theta2\n", 0) == 0);
  const std::vector<double> bad{1e-2, 1e-1};
  CHECK_THROWS_AS(diameter_profile(HoloExpr::parse("z"), bad), InvalidArgument);
}

TEST_CASE("serial and parallel kernels agree exactly") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<cplx> z(5000);
  for (cplx& v : z) v = {u(rng), u(rng)};
  const HoloMap f = make_map(HoloExpr::parse("exp(1/z)*sin(z)"));

  const std::vector<EvalResult> a = evaluate_points(f, z, Exec::Serial);
  const std::vector<EvalResult> b = evaluate_points(f, z, Exec::Parallel);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(a[i].point == b[i].point);

  const std::vector<double> la = log_densities(f, z, Exec::Serial);
  const std::vector<double> lb = log_densities(f, z, Exec::Parallel);
  CHECK(la == lb);

  const IndexedMax ma = argmax(la, Exec::Serial);
  const IndexedMax mb = argmax(la, Exec::Parallel);
  CHECK(ma.index == mb.index);
  CHECK(ma.value == mb.value);

  // Ties resolve to the smallest index.
  const std::vector<double> ties(1000, 1.0);
  CHECK(argmax(ties, Exec::Parallel).index == 0);

  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < 1500; ++i) pts.push_back(to_unit_sphere(a[i].point));
  const FarPair pa = farthest_pair(pts, Exec::Serial);
  const FarPair pb = farthest_pair(pts, Exec::Parallel);
  CHECK(pa.i == pb.i);
  CHECK(pa.j == pb.j);
  CHECK(pa.distance == pb.distance);

  std::vector<SpherePoint> p1;
  std::vector<SpherePoint> p2;
  for (std::size_t i = 0; i < 1000; ++i) {
    p1.push_back(a[i].point);
    p2.push_back(a[i + 1000].point);
  }
  const IndexedMax ra = max_chordal_residual(p1, p2, Exec::Serial);
  const IndexedMax rb = max_chordal_residual(p1, p2, Exec::Parallel);
  CHECK(ra.index == rb.index);
  CHECK(ra.value == rb.value);
}

TEST_CASE("log jet matches the homogeneous jet") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const char* s : {"exp(1/z)", "sin(z)*z^2-3", "cos(1/z)+z", "(z-1)/(z+2)^3", "-exp(z)+2i"}) {
    const HoloExpr f = HoloExpr::parse(s);
    for (int i = 0; i < 50; ++i) {
      const cplx z{u(rng), u(rng)};
      const Jet j = f.jet(z);
      const LogJet l = f.log_jet(z);
      if (!j.ok() || !l.ok()) continue;
      const double sd = j.spherical_derivative();
      if (sd < 1e-200) continue;
      CHECK(l.log_spherical_derivative() == doctest::Approx(std::log(sd)).epsilon(1e-9));
    }
  }
  // Where f# underflows, the log form stays finite: exp(1/z) at z = 1e-4 i + 1e-5.
  const HoloMap m = make_map(HoloExpr::parse("exp(1/z)"));
  const double ld = log_spherical_derivative(m, cplx{1e-5, 1e-4});
  CHECK(std::isfinite(ld));
  CHECK(ld < -500.0);
}
