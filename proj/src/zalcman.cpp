#include "punctlab/zalcman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "punctlab/errors.hpp"

namespace punctlab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct PairTry {
  bool ok = false;
  cplx w{};
  double weight = 0.0;
  cplx z{};
};

double pair_weight(const HoloMap& f, double r, cplx z, cplx w) {
  const EvalResult a = f.value(z);
  const EvalResult b = f.value(w);
  if (!a.ok() || !b.ok()) return 0.0;
  return (r * r - std::norm(z)) / (r * r) * chordal(a.point, b.point) / std::abs(z - w);
}

// Pair at z with separation a power of two chosen so that the chordal
// separation is about opt.target_separation. z is snapped to a dyadic grid
// so that w - z is exact.
PairTry dyadic_pair(const HoloMap& f, double r, cplx z, double target) {
  PairTry t;
  const double q = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(r))) - 50);
  z = {q * std::round(z.real() / q), q * std::round(z.imag() / q)};
  t.z = z;
  if (!(std::abs(z) < r)) return t;
  const double ls = log_spherical_derivative(f, z);
  if (!std::isfinite(ls)) return t;
  double delta = std::ldexp(1.0, static_cast<int>(std::lround(std::log2(target) - ls / std::numbers::ln2)));
  const double room = (r - std::abs(z)) / 4.0;
  delta = std::min(delta, std::ldexp(1.0, static_cast<int>(std::floor(std::log2(room)))));
  delta = std::max(delta, q);
  // Distinct points in floating point: enforce a minimum separation.
  if (delta < 1e-14) delta = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(1e-10))));
  const cplx w = z + (z.real() > 0.0 ? -delta : delta);
  if (!(std::abs(w) < r)) return t;
  t.w = w;
  t.weight = pair_weight(f, r, z, w);
  t.ok = t.weight > 0.0;
  return t;
}

// Newton iteration for f(z) = c in the chart log f.
std::optional<cplx> solve_anchor(const HoloMap& f, double r, cplx z, cplx c) {
  const double lc = std::log(std::abs(c));
  const double ac = std::arg(c);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    const LogJet j = f.log_jet(z);
    if (!j.ok() || std::abs(j.dL) == 0.0) return std::nullopt;
    const cplx delta{j.L.real() - lc, std::remainder(j.L.imag() - ac, 2.0 * std::numbers::pi)};
    residual = std::abs(delta);
    const cplx step = delta / j.dL;
    z -= step;
    if (!(std::abs(z) < r)) return std::nullopt;
    // log f may be large, so stop on the step size rather than the residual.
    if (std::abs(step) <= 1e-15 * std::max(std::abs(z), r)) break;
  }
  if (residual < 1e-8) return z;
  return std::nullopt;
}

std::vector<SpherePoint> sample_points(const HoloMap& g, const std::vector<cplx>& grid, Exec exec, bool& ok) {
  const std::vector<EvalResult> vals = evaluate_points(g, grid, exec);
  std::vector<SpherePoint> pts;
  pts.reserve(vals.size());
  ok = true;
  for (const EvalResult& v : vals) {
    ok = ok && v.ok();
    pts.push_back(v.point);
  }
  return pts;
}

}  // namespace

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::PlaneLimit:
      return "PlaneLimit";
    case CaseTag::PuncturedLimit:
      return "PuncturedLimit";
    case CaseTag::NoEssentialSingularity:
      return "NoEssentialSingularity";
    case CaseTag::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<long> default_k_schedule() {
  std::vector<long> ks;
  for (int j = 1; j <= 20; ++j) ks.push_back(1L << j);
  return ks;
}

ExtremalPair weighted_sup_Mk(const HoloMap& f, double r, const ZalcmanOptions& opt) {
  if (!(r > 0.0)) throw InvalidArgument("radius must be positive");
  if (!f.differentiable()) throw InvalidArgument("sup search needs derivative information");
  const DensityProblem problem{0.0, r, r * r};
  const DensitySearch search = maximize_density(f, problem, opt.budget, opt.ascent);

  const PairSample pairs = sample_pairs(0.0, r, opt.budget / 2, opt.budget / 4, opt.seed);
  std::vector<double> weights(pairs.first.size());
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = pair_weight(f, r, pairs.first[i], pairs.second[i]);
  const IndexedMax best_pair = argmax(weights, opt.ascent.exec);

  const double m_density = search.log_best > kNegInf ? std::exp(search.log_best) : 0.0;
  const double m_pair = best_pair.index == IndexedMax::npos ? 0.0 : best_pair.value;
  ExtremalPair out;
  out.M = std::max(m_density, m_pair);
  if (!(out.M > 1e-12)) throw Degenerate("all sampled weights vanish");

  auto accept = [&](const PairTry& t, bool anchored) {
    if (!t.ok || t.weight < out.M / 2.0) return false;
    out.z = t.z;
    out.w = t.w;
    out.weight = t.weight;
    out.anchored = anchored;
    out.M = std::max(out.M, t.weight);
    return true;
  };

  if (opt.anchor && f.log_jet) {
    const cplx c = *opt.anchor;
    const SpherePoint target{c};
    struct Candidate {
      cplx z;
      double dist;
    };
    std::vector<Candidate> cands;
    const double floor = std::log(0.6 * out.M);
    auto collect = [&](const std::vector<cplx>& zs, const std::vector<double>& lv) {
      for (std::size_t i = 0; i < zs.size(); ++i) {
        if (!(lv[i] >= floor)) continue;
        const EvalResult v = f.value(zs[i]);
        if (v.ok()) cands.push_back({zs[i], chordal(v.point, target)});
      }
    };
    collect(search.endpoints, search.endpoint_log_values);
    collect(search.points, search.log_values);
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
    const std::size_t tries = std::min<std::size_t>(cands.size(), 32);
    for (std::size_t i = 0; i < tries; ++i) {
      const std::optional<cplx> root = solve_anchor(f, r, cands[i].z, c);
      if (root && accept(dyadic_pair(f, r, *root, opt.target_separation), true)) return out;
    }
  }
  if (m_density > 0.0 && accept(dyadic_pair(f, r, search.best, opt.target_separation), false)) return out;
  if (m_pair >= out.M / 2.0) {
    out.z = pairs.first[best_pair.index];
    out.w = pairs.second[best_pair.index];
    out.weight = m_pair;
    return out;
  }
  throw Degenerate("no distinct pair reaches half the supremum");
}

Rescaled build_rescaled(const HoloMap& f, double r, cplx z, cplx w) {
  const EvalResult a = f.value(z);
  const EvalResult b = f.value(w);
  if (!a.ok() || !b.ok()) throw Degenerate("pair values undefined");
  const double delta = chordal(a.point, b.point);
  if (!(delta > 0.0) || z == w) throw Degenerate("pair has zero chordal separation");
  Rescaled out;
  out.rho = std::abs(w - z) / delta;
  out.R = (r - std::abs(z)) / out.rho;
  out.v = (w - z) / out.rho;
  out.g = affine_pullback(f, z, out.rho);
  const EvalResult g0 = out.g.value(0.0);
  const EvalResult gv = out.g.value(out.v);
  out.ratio = (g0.ok() && gv.ok()) ? chordal(g0.point, gv.point) / std::abs(out.v) : 0.0;
  return out;
}

std::vector<cplx> disk_grid(double radius, int grid) {
  std::vector<cplx> pts;
  if (grid < 2) return {cplx{}};
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const cplx v{-radius + 2.0 * radius * i / (grid - 1), -radius + 2.0 * radius * j / (grid - 1)};
      if (std::abs(v) <= radius * (1.0 + 1e-12)) pts.push_back(v);
    }
  }
  return pts;
}

RescalingResult extract_rescaling(const std::vector<HoloMap>& members, const std::vector<long>& ks, double r,
                                  const ZalcmanOptions& opt) {
  if (members.empty() || members.size() != ks.size()) throw InvalidArgument("members and k schedule must match");
  RescalingResult res;
  std::vector<HoloMap> maps;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const ExtremalPair p = weighted_sup_Mk(members[i], r, opt);
    Rescaled g = build_rescaled(members[i], r, p.z, p.w);
    res.levels.push_back({ks[i], p.M, p.z, p.w, g.rho, g.R, g.ratio, p.anchored});
    res.centers.push_back(p.z);
    res.scales.push_back(g.rho);
    res.k_indices.push_back(ks[i]);
    res.normalization_ratios.push_back(g.ratio);
    maps.push_back(std::move(g.g));
  }

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < res.levels.size(); ++i) {
    if (res.levels[i].R >= opt.r_test) kept.push_back(i);
  }
  if (kept.empty()) {
    res.residual = std::numeric_limits<double>::infinity();
    res.note = "no level covers the test disk";
    return res;
  }

  const std::vector<cplx> grid = disk_grid(opt.r_test, opt.grid);
  bool last_ok = true;
  const std::vector<SpherePoint> last = sample_points(maps[kept.back()], grid, opt.ascent.exec, last_ok);
  for (std::size_t i = 0; i < grid.size(); ++i) res.limit_samples.emplace_back(grid[i], last[i]);
  std::vector<Vec3> unit;
  unit.reserve(last.size());
  for (const SpherePoint& p : last) unit.push_back(to_unit_sphere(p));
  res.spread = farthest_pair(unit, opt.ascent.exec).distance;

  res.residual = std::numeric_limits<double>::infinity();
  if (kept.size() < 2) {
    res.note = "fewer than two levels cover the test disk";
    return res;
  }
  // Best-converging arithmetic subsequence ending at the last level.
  for (int s = 1; s <= 3 && static_cast<std::size_t>(s) < kept.size(); ++s) {
    bool ok = true;
    const std::vector<SpherePoint> prev = sample_points(maps[kept[kept.size() - 1 - s]], grid, opt.ascent.exec, ok);
    if (!ok || !last_ok) continue;
    const double r_s = max_chordal_residual(last, prev, opt.ascent.exec).value;
    if (r_s < res.residual) {
      res.residual = r_s;
      res.stride = s;
    }
  }
  const double m_last = res.levels[kept.back()].M;
  if (res.residual <= opt.tol && m_last >= opt.m_threshold && res.spread >= opt.c0) {
    res.case_tag = CaseTag::PlaneLimit;
  } else if (m_last < opt.m_threshold) {
    res.note = "M_k stays below the threshold";
  } else if (res.residual > opt.tol) {
    res.note = "residual above tolerance";
  } else {
    res.note = "limit samples nearly constant";
  }
  return res;
}

RescalingResult extract_rescaling(const HoloExpr& family, double r, const std::vector<long>& ks,
                                  const ZalcmanOptions& opt) {
  std::vector<HoloMap> members;
  members.reserve(ks.size());
  for (long k : ks) members.push_back(make_map(family, static_cast<double>(k)));
  return extract_rescaling(members, ks, r, opt);
}

RescalingResult double_rescale(const HoloExpr& family, cplx a, const std::vector<double>& r_schedule,
                               const std::vector<long>& k_schedule, const ZalcmanOptions& opt) {
  if (r_schedule.empty()) throw InvalidArgument("empty radius schedule");
  for (double r : r_schedule) {
    if (!(r > 0.0)) throw InvalidArgument("radii must be positive");
  }
  std::vector<long> ks = k_schedule;
  if (ks.empty()) {
    if (family.uses_parameter()) throw InvalidArgument("family uses k but no k schedule was given");
    ks.push_back(0);
  }
  std::vector<double> radii;
  std::vector<long> levels_k;
  if (ks.size() == r_schedule.size()) {
    radii = r_schedule;
    levels_k = ks;
  } else if (r_schedule.size() == 1) {
    radii.assign(ks.size(), r_schedule.front());
    levels_k = ks;
  } else if (ks.size() == 1) {
    radii = r_schedule;
    levels_k.assign(r_schedule.size(), ks.front());
  } else {
    throw InvalidArgument("radius and k schedules have incompatible lengths");
  }

  std::vector<HoloMap> members;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    members.push_back(affine_pullback(make_map(family, static_cast<double>(levels_k[j])), a, radii[j]));
  }
  RescalingResult res = extract_rescaling(members, levels_k, 1.0, opt);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    res.centers[j] = a + radii[j] * res.centers[j];
    res.scales[j] *= radii[j];
  }
  return res;
}

}  // namespace punctlab
