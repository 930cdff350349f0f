#include "punctlab/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "punctlab/errors.hpp"

namespace punctlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cplx> circle_points(double r, std::size_t n) {
  std::vector<cplx> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = std::polar(r, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  return z;
}

bool inside_open(const Disk& d, cplx z) { return std::abs(z - d.center) < d.radius; }
bool outside_closed(const Disk& d, cplx z) { return std::abs(z - d.center) > d.radius; }

std::vector<SpherePoint> values_or_infinity(const std::vector<EvalResult>& vals) {
  std::vector<SpherePoint> out;
  out.reserve(vals.size());
  for (const EvalResult& v : vals) out.push_back(v.point);
  return out;
}

double max_spread(const std::vector<SpherePoint>& pts, Exec exec) {
  std::vector<Vec3> unit;
  unit.reserve(pts.size());
  for (const SpherePoint& p : pts) unit.push_back(to_unit_sphere(p));
  return farthest_pair(unit, exec).distance;
}

double tail_min(const std::vector<double>& v, std::size_t tail) {
  const std::size_t t = std::min(tail, v.size());
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = v.size() - t; i < v.size(); ++i) m = std::min(m, v[i]);
  return m;
}

}  // namespace

std::vector<double> decade_radii(int n) {
  std::vector<double> r;
  for (int j = 1; j <= n; ++j) r.push_back(std::pow(10.0, -j));
  return r;
}

double winding_raw(std::span<const cplx> curve, cplx p, double eps) {
  const std::size_t n = curve.size();
  if (n < 3) throw InvalidArgument("curve needs at least 3 samples");
  const double tol = eps * (1.0 + std::abs(p));
  for (const cplx& c : curve) {
    if (std::abs(c - p) < tol) throw PointOnCurve("point lies on the curve");
  }
  const bool repeated = std::abs(curve[n - 1] - curve[0]) <= 1e-12 * (1.0 + std::abs(curve[0]));
  const std::size_t steps = repeated ? n - 1 : n;
  double total = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const cplx a = curve[i] - p;
    const cplx b = curve[(i + 1) % n] - p;
    const double step = std::arg(b / a);
    if (std::abs(step) > 0.75 * std::numbers::pi) {
      throw NonIntegral((total + step) / kTwoPi, "curve is under-sampled");
    }
    total += step;
  }
  return total / kTwoPi;
}

int winding_number(std::span<const cplx> curve, cplx p, double eps) {
  const double raw = winding_raw(curve, p, eps);
  const double k = std::round(raw);
  if (std::abs(raw - k) > 0.1) throw NonIntegral(raw, "not within 0.1 of an integer");
  return static_cast<int>(k);
}

std::vector<cplx> circle_curve(const std::function<cplx(cplx)>& f, double r, std::size_t n) {
  std::vector<cplx> out;
  out.reserve(n);
  for (const cplx& z : circle_points(r, n)) out.push_back(f(z));
  return out;
}

bool separation_configuration(std::span<const cplx> outer, std::span<const cplx> inner, const Disk& disk_a,
                              const Disk& disk_b, cplx value) {
  for (const cplx& z : outer) {
    if (!inside_open(disk_a, z)) return false;
  }
  for (const cplx& z : inner) {
    if (!inside_open(disk_b, z)) return false;
  }
  if (!outside_closed(disk_a, value) || !outside_closed(disk_b, value)) return false;
  return winding_number(outer, value) == 0 && winding_number(inner, value) == 0;
}

bool annulus_separation_check(const HoloMap& f, double r_in, double r_out, const Disk& disk_a, const Disk& disk_b,
                              cplx y0, std::size_t samples) {
  if (!(0.0 < r_in && r_in < std::abs(y0) && std::abs(y0) < r_out)) {
    throw InvalidArgument("need r_in < |y0| < r_out");
  }
  auto finite_values = [&](const std::vector<cplx>& z) {
    std::vector<cplx> out;
    out.reserve(z.size());
    for (const EvalResult& v : evaluate_points(f, z)) {
      if (!v.ok() || v.point.is_infinite()) throw InvalidArgument("values must be finite in the chosen chart");
      out.push_back(v.point.value());
    }
    return out;
  };
  const std::vector<cplx> outer = finite_values(circle_points(r_out, samples));
  const std::vector<cplx> inner = finite_values(circle_points(r_in, samples));
  const cplx value = finite_values({y0}).front();
  return separation_configuration(outer, inner, disk_a, disk_b, value);
}

bool annulus_separation_check(const HoloExpr& f, double r_in, double r_out, const Disk& disk_a, const Disk& disk_b,
                              cplx y0, std::size_t samples) {
  return annulus_separation_check(make_map(f), r_in, r_out, disk_a, disk_b, y0, samples);
}

LVResult lv_witness(const HoloMap& f, std::span<const double> radii, const LVOptions& opt) {
  require_radii(radii);
  const std::size_t n = radii.size();
  std::vector<std::vector<EvalResult>> circles(n);
  for (std::size_t i = 0; i < n; ++i) circles[i] = evaluate_points(f, circle_points(radii[i], opt.circle_samples), opt.exec);

  // Cluster value: the candidate ball hit by the most circles, candidates
  // taken from the innermost circle outward.
  LVResult res;
  LVWitness& w = res.witness;
  bool have = false;
  for (std::size_t c = n; c-- > 0;) {
    for (const EvalResult& cand : circles[c]) {
      if (!cand.ok()) continue;
      std::size_t hits = 0;
      for (const auto& circle : circles) {
        const bool hit = std::any_of(circle.begin(), circle.end(), [&](const EvalResult& v) {
          return v.ok() && chordal(v.point, cand.point) <= opt.cluster_radius;
        });
        hits += hit ? 1 : 0;
      }
      if (!have || hits > w.cluster_hits) {
        have = true;
        w.cluster_hits = hits;
        w.cluster_value = cand.point;
      }
    }
  }
  if (!have) throw EvaluationError("no defined values on the sampled circles");
  const SpherePoint b = w.cluster_value;

  DiameterOptions dopt;
  dopt.samples = opt.diam_samples;
  dopt.exec = opt.exec;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < circles[i].size(); ++j) {
      if (!circles[i][j].ok()) continue;
      const double d = chordal(circles[i][j].point, b);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    w.centers.push_back(std::polar(radii[i], kTwoPi * static_cast<double>(best) / static_cast<double>(opt.circle_samples)));
    w.diameters.push_back(diam_circle_image(f, radii[i], dopt).diameter);
  }
  const double direct_floor = tail_min(w.diameters, opt.tail);
  if (direct_floor >= opt.diam_threshold) {
    res.found = true;
    w.diam_floor = direct_floor;
    return res;
  }

  // Escape construction: the largest r below |z_n| whose image circle leaves W'.
  const std::size_t escape_samples = 4 * opt.circle_samples;
  auto farthest = [&](double r, double& dist) {
    const std::vector<cplx> z = circle_points(r, escape_samples);
    const std::vector<EvalResult> vals = evaluate_points(f, z, opt.exec);
    dist = -1.0;
    cplx at{};
    for (std::size_t j = 0; j < vals.size(); ++j) {
      if (!vals[j].ok()) continue;
      const double d = chordal(vals[j].point, b);
      if (d > dist) {
        dist = d;
        at = z[j];
      }
    }
    return at;
  };
  auto escapes = [&](double r) {
    double d = 0.0;
    farthest(r, d);
    return d > opt.escape_radius;
  };
  w.escaped = true;
  for (std::size_t i = 0; i < n; ++i) {
    double hi = radii[i];
    double lo = hi;
    if (!escapes(hi)) {
      bool found = false;
      while (lo > opt.r_min) {
        lo *= 0.5;
        if (escapes(lo)) {
          found = true;
          break;
        }
        hi = lo;
      }
      if (!found) {
        res.note = "f stays inside the neighborhood of the cluster value";
        return res;
      }
      while (hi / lo > 1.0 + opt.rel_precision) {
        const double mid = std::sqrt(lo * hi);
        (escapes(mid) ? lo : hi) = mid;
      }
    }
    double d = 0.0;
    w.escape_radii.push_back(lo);
    w.second_centers.push_back(farthest(lo, d));
    w.escape_diameters.push_back(diam_circle_image(f, lo, dopt).diameter);
  }
  w.diam_floor = tail_min(w.escape_diameters, opt.tail);
  res.found = w.diam_floor >= opt.diam_threshold;
  if (!res.found) res.note = "escape circles collapse below the threshold";
  return res;
}

LVResult lv_witness(const HoloExpr& f, std::span<const double> radii, const LVOptions& opt) {
  return lv_witness(make_map(f), radii, opt);
}

std::string to_string(JuliaVerdict v) {
  return v == JuliaVerdict::NonExceptional ? "NonExceptional" : "ExceptionalSuspected";
}

bool diverging_tail(std::span<const double> values, double threshold, std::size_t tail) {
  const std::size_t t = std::min(tail, values.size());
  if (t < 2) return false;
  for (std::size_t i = values.size() - t + 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) return false;
  }
  return values.back() > threshold;
}

JuliaProfile julia_indicator(const HoloMap& f, std::span<const double> radii, const TraceOptions& opt) {
  require_radii(radii);
  JuliaProfile p;
  std::vector<double> values;
  for (double r : radii) {
    const CircleMax m = maximize_on_circle(f, r, opt.circle_samples, opt.candidates, opt.exec);
    const double v = std::isfinite(m.log_value) ? std::exp(m.log_value) : 0.0;
    p.entries.push_back({r, v, m.theta});
    values.push_back(v);
  }
  if (diverging_tail(values, opt.threshold, opt.tail)) p.verdict = JuliaVerdict::NonExceptional;
  return p;
}

JuliaProfile julia_indicator(const HoloExpr& f, std::span<const double> radii, const TraceOptions& opt) {
  return julia_indicator(make_map(f), radii, opt);
}

std::vector<HalfDiskEntry> halfdisk_lipschitz_trace(const HoloMap& f, std::span<const double> radii,
                                                    const TraceOptions& opt) {
  require_radii(radii);
  std::vector<HalfDiskEntry> trace;
  for (double r : radii) {
    const CircleMax m = maximize_on_circle(f, r, opt.circle_samples, opt.candidates, opt.exec);
    std::vector<double> thetas = m.candidate_thetas;
    if (thetas.empty()) thetas.push_back(0.0);
    HalfDiskEntry best;
    best.r = r;
    bool first = true;
    for (double theta : thetas) {
      const cplx y = std::polar(r, theta);
      const LipEstimate e = lipschitz_estimate(f, Disk(y, r / 2.0), opt.lip);
      if (first || e.value > best.value) {
        best.value = e.value;
        best.y = y;
        best.estimate = e;
        first = false;
      }
    }
    trace.push_back(best);
  }
  return trace;
}

std::vector<HalfDiskEntry> halfdisk_lipschitz_trace(const HoloExpr& f, std::span<const double> radii,
                                                    const TraceOptions& opt) {
  return halfdisk_lipschitz_trace(make_map(f), radii, opt);
}

std::vector<cplx> annulus_grid(const PunctOptions& opt) {
  std::vector<cplx> g;
  const double ratio = opt.annulus_outer / opt.annulus_inner;
  for (int i = 0; i < opt.radial; ++i) {
    const double t = opt.radial > 1 ? static_cast<double>(i) / (opt.radial - 1) : 0.0;
    const double rho = opt.annulus_inner * std::pow(ratio, t);
    for (int j = 0; j < opt.angular; ++j) g.push_back(std::polar(rho, kTwoPi * j / opt.angular));
  }
  return g;
}

RescalingResult punctured_rescale(const HoloMap& f, std::span<const double> scales, double diam_floor,
                                  const PunctOptions& opt) {
  if (scales.empty()) throw InvalidArgument("empty scale list");
  for (double s : scales) {
    if (!(s > 0.0)) throw InvalidArgument("scales must be positive");
  }
  RescalingResult res;
  const std::vector<cplx> grid = annulus_grid(opt);
  auto level = [&](double s) {
    std::vector<cplx> z(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) z[i] = s * grid[i];
    return values_or_infinity(evaluate_points(f, z, opt.exec));
  };
  for (std::size_t k = 0; k < scales.size(); ++k) {
    res.centers.push_back(0.0);
    res.scales.push_back(scales[k]);
    res.k_indices.push_back(static_cast<long>(k + 1));
  }
  const std::vector<SpherePoint> last = level(scales.back());
  for (std::size_t i = 0; i < grid.size(); ++i) res.limit_samples.emplace_back(grid[i], last[i]);
  res.spread = max_spread(last, opt.exec);
  res.residual = std::numeric_limits<double>::infinity();
  if (scales.size() < 2) {
    res.note = "fewer than two levels";
    return res;
  }
  const std::vector<SpherePoint> prev = level(scales[scales.size() - 2]);
  res.residual = max_chordal_residual(last, prev, opt.exec).value;
  // diam g_k(|v| = 1) = diam f(|z| = s_k) by the change of variables.
  DiameterOptions dopt;
  dopt.exec = opt.exec;
  const double unit_diam = diam_circle_image(f, scales.back(), dopt).diameter;
  if (res.residual <= opt.tol && diam_floor > 0.0 && unit_diam >= diam_floor) {
    res.case_tag = CaseTag::PuncturedLimit;
  } else {
    res.note = res.residual > opt.tol ? "residual above tolerance" : "unit circle image below the diameter floor";
  }
  return res;
}

PrincipleResult rescaling_principle(const HoloMap& f, const PrincipleOptions& opt) {
  require_radii(opt.radii);
  PrincipleResult out;
  DiameterOptions dopt;
  dopt.exec = opt.trace.exec;
  for (const DiameterEntry& e : diameter_profile(f, opt.radii, dopt).entries) out.diameters.push_back(e.diameter);
  out.trace = halfdisk_lipschitz_trace(f, opt.radii, opt.trace);
  std::vector<double> trace_values;
  for (const HalfDiskEntry& e : out.trace) trace_values.push_back(e.value);

  auto tail_max = [&](const std::vector<double>& v) {
    const std::size_t t = std::min(opt.tail, v.size());
    return *std::max_element(v.end() - static_cast<std::ptrdiff_t>(t), v.end());
  };
  if (tail_max(out.diameters) <= opt.collapse_tol && tail_max(trace_values) <= opt.collapse_tol) {
    out.branch = "collapse";
    out.rescaling.case_tag = CaseTag::NoEssentialSingularity;
    out.rescaling.note = "circle diameters and half-disk trace collapse";
    return out;
  }

  if (diverging_tail(trace_values, opt.trace.threshold, opt.tail)) {
    out.branch = "i";
    std::vector<HoloMap> members;
    std::vector<long> ks;
    for (std::size_t j = 0; j < out.trace.size(); ++j) {
      const cplx y = out.trace[j].y;
      members.push_back(affine_pullback(f, y, std::abs(y) / 2.0));
      ks.push_back(static_cast<long>(j + 1));
    }
    try {
      out.rescaling = extract_rescaling(members, ks, 1.0, opt.zalcman);
    } catch (const Degenerate& e) {
      out.rescaling.case_tag = CaseTag::Inconclusive;
      out.rescaling.note = e.what();
      return out;
    }
    for (std::size_t j = 0; j < out.trace.size(); ++j) {
      const cplx y = out.trace[j].y;
      out.rescaling.centers[j] = y + std::abs(y) / 2.0 * out.rescaling.centers[j];
      out.rescaling.scales[j] *= std::abs(y) / 2.0;
    }
    return out;
  }

  out.branch = "ii";
  out.lv = lv_witness(f, opt.radii, opt.lv);
  if (!out.lv->found) {
    out.rescaling.case_tag = CaseTag::Inconclusive;
    out.rescaling.note = "no circle-diameter witness: " + out.lv->note;
    return out;
  }
  const LVWitness& w = out.lv->witness;
  std::vector<double> scales;
  for (const cplx& z : w.escaped ? w.second_centers : w.centers) scales.push_back(std::abs(z));
  out.rescaling = punctured_rescale(f, scales, w.diam_floor, opt.punct);
  return out;
}

PrincipleResult rescaling_principle(const HoloExpr& f, const PrincipleOptions& opt) {
  return rescaling_principle(make_map(f), opt);
}

std::vector<double> rescaled_spread(const HoloMap& f, std::span<const cplx> centers, std::span<const double> scales,
                                    double radius, int grid, Exec exec) {
  if (centers.size() != scales.size()) throw InvalidArgument("centers and scales must match");
  const std::vector<cplx> g = disk_grid(radius, grid);
  std::vector<double> out;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    std::vector<cplx> z(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) z[i] = centers[k] + scales[k] * g[i];
    std::vector<SpherePoint> pts;
    for (const EvalResult& v : evaluate_points(f, z, exec)) {
      if (v.ok()) pts.push_back(v.point);
    }
    out.push_back(pts.size() < 2 ? 0.0 : max_spread(pts, exec));
  }
  return out;
}

}  // namespace punctlab
