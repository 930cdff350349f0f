#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "punctlab/errors.hpp"
#include "punctlab/zalcman.hpp"

using namespace punctlab;

namespace {

// Fine-grid oracle for sup ((r^2 - |z|^2)/r^2) f#(z), using the closed form of f# for k z.
double linear_family_sup(double k, double r) {
  double best = 0.0;
  const int n = 801;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx z{-r + 2.0 * r * i / (n - 1), -r + 2.0 * r * j / (n - 1)};
      if (std::abs(z) >= r) continue;
      const double fs = 2.0 * k / (1.0 + k * k * std::norm(z));
      best = std::max(best, (r * r - std::norm(z)) / (r * r) * fs);
    }
  }
  return best;
}

ZalcmanOptions fast_options() {
  ZalcmanOptions opt;
  opt.budget = 1000;
  return opt;
}

}  // namespace

TEST_CASE("weighted sup examples") {
  const HoloExpr fam = HoloExpr::parse("k*z");
  const ExtremalPair p = weighted_sup_Mk(make_map(fam, 100.0), 0.5, fast_options());
  CHECK(std::abs(p.M - linear_family_sup(100.0, 0.5)) < 1e-3 * p.M);
  CHECK(std::abs(p.M - 200.0) < 0.2);
  CHECK(std::abs(p.z) < 1e-2);
  CHECK(p.z != p.w);
  CHECK(p.weight >= p.M / 2.0);

  const ExtremalPair id = weighted_sup_Mk(make_map(HoloExpr::parse("z")), 0.5, fast_options());
  CHECK(std::abs(id.M - 2.0) < 1e-6);
  CHECK(std::abs(id.z) < 1e-2);

  CHECK_THROWS_AS(weighted_sup_Mk(make_map(HoloExpr::parse("7")), 0.5, fast_options()), Degenerate);
}

TEST_CASE("rescaled maps satisfy the definitional identities") {
  const HoloExpr fam = HoloExpr::parse("k*z");
  const double r = 0.5;
  for (double k : {3.0, 100.0, 4096.0}) {
    const HoloMap f = make_map(fam, k);
    const ExtremalPair p = weighted_sup_Mk(f, r, fast_options());
    const Rescaled g = build_rescaled(f, r, p.z, p.w);
    CHECK(std::abs(g.ratio - 1.0) < 1e-12);
    CHECK(std::abs(g.R * g.rho - (r - std::abs(p.z))) <= 1e-15 * r);
    CHECK(g.rho * p.M <= 2.0 + 1e-9);
    CHECK(g.R >= p.M / 2.0 * (r / 2.0) - 1e-9);
    CHECK(g.rho * 2.0 * k > 0.5);
    CHECK(g.rho * 2.0 * k < 2.0);
  }
  const HoloMap f = make_map(fam, 2.0);
  CHECK_THROWS_AS(build_rescaled(f, r, 0.1, 0.1), Degenerate);
}

TEST_CASE("random pairs give exact normalization") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  const HoloMap f = make_map(HoloExpr::parse("exp(z)/(z-0.9)"));
  for (int t = 0; t < 50; ++t) {
    const cplx z{u(rng), u(rng)};
    const cplx w = z + cplx{u(rng), u(rng)} * 1e-3;
    CHECK(std::abs(build_rescaled(f, 0.5, z, w).ratio - 1.0) < 1e-12);
  }
}

TEST_CASE("linear family has a plane limit") {
  const RescalingResult res = extract_rescaling(HoloExpr::parse("k*z"), 0.5, default_k_schedule(), fast_options());
  CHECK(res.case_tag == CaseTag::PlaneLimit);
  CHECK(res.residual <= 1e-3);
  CHECK(res.spread >= 0.5);
  REQUIRE(res.levels.size() == 20);
  for (const RescalingLevel& l : res.levels) {
    CHECK(std::abs(l.ratio - 1.0) < 1e-9);
    CHECK(l.rho * l.M <= 2.0 + 1e-9);
    CHECK(l.R >= l.M / 2.0 * 0.25 - 1e-9);
  }
  for (std::size_t i = 1; i < res.scales.size(); ++i) CHECK(res.scales[i] < res.scales[i - 1]);

  // Local Lipschitz bound of the rescaled maps on D(R_k/2).
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const HoloExpr fam = HoloExpr::parse("k*z");
  for (const RescalingLevel& l : res.levels) {
    const HoloMap g = affine_pullback(make_map(fam, static_cast<double>(l.k)), l.z, l.rho);
    for (int t = 0; t < 50; ++t) {
      const double span = std::min(l.R / 2.0, 10.0);
      const cplx x = std::polar(span * u(rng), 2.0 * std::numbers::pi * u(rng));
      const cplx y = x + std::polar(1e-3 * span * u(rng) + 1e-9, 2.0 * std::numbers::pi * u(rng));
      if (std::abs(y) >= l.R / 2.0) continue;
      const double q = chordal(g.value(x).point, g.value(y).point) / std::abs(x - y);
      CHECK(q <= 4.0 / (1.0 - std::abs(x) / l.R) + 0.1);
    }
  }
}

TEST_CASE("normal and constant families") {
  std::vector<long> ks;
  for (long k = 1; k <= 12; ++k) ks.push_back(k);
  const RescalingResult res = extract_rescaling(HoloExpr::parse("z+1/k"), 0.5, ks, fast_options());
  CHECK(res.case_tag == CaseTag::Inconclusive);
  for (const RescalingLevel& l : res.levels) CHECK(l.M < 3.0);
  CHECK_THROWS_AS(extract_rescaling(HoloExpr::parse("k"), 0.5, ks, fast_options()), Degenerate);
}

TEST_CASE("double rescaling") {
  const HoloExpr fam = HoloExpr::parse("k*z");
  std::vector<double> radii;
  std::vector<long> ks;
  for (int j = 1; j <= 14; ++j) {
    radii.push_back(std::ldexp(1.0, -j));
    ks.push_back(1L << (2 * j));
  }
  const RescalingResult res = double_rescale(fam, 0.0, radii, ks, fast_options());
  CHECK(res.case_tag == CaseTag::PlaneLimit);
  for (std::size_t j = 0; j < radii.size(); ++j) CHECK(std::abs(res.centers[j]) <= radii[j]);
  CHECK(std::abs(res.centers.back()) < 1e-3);

  // One radius: the k schedule is swept at a single zoom level.
  const RescalingResult one = double_rescale(fam, 0.0, {0.5}, default_k_schedule(), fast_options());
  const RescalingResult direct = extract_rescaling(fam, 0.5, default_k_schedule(), fast_options());
  CHECK(one.case_tag == direct.case_tag);
  CHECK(std::abs(one.scales.back() - direct.scales.back()) < 1e-12 * direct.scales.back());

  CHECK_THROWS_AS(double_rescale(fam, 0.0, {0.5, 0.25}, {1, 2, 3}, fast_options()), InvalidArgument);
  std::vector<long> small{1, 2, 3, 4, 5, 6};
  CHECK(double_rescale(HoloExpr::parse("z+1/k"), 0.0, {0.5}, small, fast_options()).case_tag ==
        CaseTag::Inconclusive);
}

TEST_CASE("grid and labels") {
  const std::vector<cplx> g = disk_grid(2.0, 33);
  for (const cplx& v : g) CHECK(std::abs(v) <= 2.0 + 1e-12);
  CHECK(g.size() == 797);
  CHECK(to_string(CaseTag::PuncturedLimit) == "PuncturedLimit");
}
