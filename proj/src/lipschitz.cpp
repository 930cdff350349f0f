#include "punctlab/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "punctlab/errors.hpp"

namespace punctlab {
namespace {

double log_slope(const std::vector<std::pair<long, double>>& pts) {
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  double n = 0.0;
  for (const auto& [k, v] : pts) {
    if (k <= 0 || !(v > 0.0)) return 0.0;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1.0;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2.0 || den == 0.0) return 0.0;
  return (n * sxy - sx * sy) / den;
}

}  // namespace

double pair_ratio(const HoloMap& f, const Disk& d, cplx w, cplx w2) {
  const double dist = poincare_distance(d, w, w2);
  if (dist == 0.0) return 0.0;
  const EvalResult a = f.value(w);
  const EvalResult b = f.value(w2);
  if (!a.ok() || !b.ok()) return 0.0;
  return chordal(a.point, b.point) / dist;
}

LipEstimate lipschitz_estimate(const HoloMap& f, const Disk& d, const LipOptions& opt) {
  if (opt.budget < 100) throw InvalidArgument("lipschitz budget must be at least 100");
  if (!f.differentiable()) throw InvalidArgument("lipschitz estimate needs derivative information");
  const DensityProblem problem{d.center, d.radius, d.radius};

  const std::vector<cplx> probe = vogel_points(d.center, d.radius, opt.budget);
  for (const EvalResult& v : evaluate_points(f, probe, opt.ascent.exec)) {
    if (v.status == EvalStatus::Essential) throw EvaluationError("essential singularity inside the disk");
  }

  LipEstimate est;
  est.seed = opt.seed;
  const DensitySearch search = maximize_density(f, problem, opt.budget, opt.ascent);
  est.samples_used = search.evaluations + probe.size();
  est.refined = search.refined;
  est.density_value = search.log_best > -1e308 ? std::exp(search.log_best) : 0.0;
  cplx best_z = search.best;
  // The center term f#(a) R, computed without the log round trip.
  if (f.jet) {
    const Jet j = f.jet(d.center);
    if (j.ok()) {
      const double c = j.spherical_derivative() * d.radius;
      if (std::isfinite(c) && c >= est.density_value) {
        est.density_value = c;
        best_z = d.center;
      }
    }
  }

  // Pair channel: uniform pairs and near pairs at scales R 10^-u, u in [1, 5].
  const PairSample pairs = sample_pairs(d.center, d.radius, opt.budget / 2, opt.budget / 4, opt.seed);
  const std::vector<cplx>& za = pairs.first;
  const std::vector<cplx>& zb = pairs.second;
  const std::vector<EvalResult> fa = evaluate_points(f, za, opt.ascent.exec);
  const std::vector<EvalResult> fb = evaluate_points(f, zb, opt.ascent.exec);
  est.samples_used += 2 * za.size();
  std::vector<double> ratios(za.size(), 0.0);
  for (std::size_t i = 0; i < za.size(); ++i) {
    if (!fa[i].ok() || !fb[i].ok()) continue;
    const double dist = poincare_distance(d, za[i], zb[i]);
    if (dist > 0.0) ratios[i] = chordal(fa[i].point, fb[i].point) / dist;
  }
  const IndexedMax top = argmax(ratios, opt.ascent.exec);
  if (top.index != IndexedMax::npos) est.pair_value = top.value;

  if (est.pair_value > est.density_value) {
    est.w1 = za[top.index];
    est.w2 = zb[top.index];
  } else {
    // Infinitesimal witness: a nearby point toward the center.
    const cplx off = best_z - d.center;
    const cplx dir = std::abs(off) > 0.0 ? -off / std::abs(off) : cplx{1.0, 0.0};
    const double h = 1e-7 * std::max(d.radius - std::abs(off), 1e-3 * d.radius);
    est.w1 = best_z;
    est.w2 = best_z + h * dir;
  }
  est.witness_ratio = pair_ratio(f, d, est.w1, est.w2);
  est.value = std::max({est.density_value, est.pair_value, est.witness_ratio});
  return est;
}

LipEstimate lipschitz_estimate(const HoloExpr& f, const Disk& d, const LipOptions& opt) {
  if (f.uses_parameter()) throw InvalidArgument("bind the parameter k before estimating");
  return lipschitz_estimate(make_map(f), d, opt);
}

cplx Mobius::derivative(cplx z) const noexcept {
  const cplx den = c * z + d;
  return (a * d - b * c) / (den * den);
}

Mobius Mobius::then(const Mobius& o) const noexcept {
  return {o.a * a + o.b * c, o.a * b + o.b * d, o.c * a + o.d * c, o.c * b + o.d * d};
}

Mobius Mobius::disk_map(const Disk& from, const Disk& to, double theta, cplx alpha) {
  if (!(std::abs(alpha) < 1.0)) throw InvalidArgument("automorphism parameter must lie in the unit disk");
  const Mobius normalize{cplx{1.0 / from.radius, 0.0}, -from.center / from.radius, {}, {1.0, 0.0}};
  const cplx rot = std::polar(1.0, theta);
  const Mobius automorphism{rot, -rot * alpha, -std::conj(alpha), {1.0, 0.0}};
  const Mobius place{cplx{to.radius, 0.0}, to.center, {}, {1.0, 0.0}};
  return normalize.then(automorphism).then(place);
}

HoloMap compose(const HoloMap& f, const Mobius& phi) {
  HoloMap m;
  m.value = [f, phi](cplx w) { return f.value(phi(w)); };
  if (f.jet) {
    m.jet = [f, phi](cplx w) {
      Jet j = f.jet(phi(w));
      const cplx s = phi.derivative(w);
      j.dp *= s;
      j.dq *= s;
      return j;
    };
  }
  if (f.log_jet) {
    m.log_jet = [f, phi](cplx w) {
      LogJet j = f.log_jet(phi(w));
      j.dL *= phi.derivative(w);
      return j;
    };
  }
  return m;
}

InvarianceResult invariance_check(const HoloExpr& f, const Disk& d1, const Disk& d2, const Mobius& phi,
                                  const LipOptions& opt) {
  if (f.uses_parameter()) throw InvalidArgument("bind the parameter k before estimating");
  const double tol = 1e-9 * d1.radius + 1e-12;
  for (int j = 0; j < 64; ++j) {
    const cplx p = d2.center + std::polar(d2.radius, 2.0 * std::numbers::pi * j / 64.0);
    const cplx q = phi(p);
    if (!std::isfinite(q.real()) || !std::isfinite(q.imag()) || std::abs(std::abs(q - d1.center) - d1.radius) > tol) {
      throw NotBiholomorphic("map does not send the boundary circle onto the target circle");
    }
  }
  if (!d1.contains(phi(d2.center))) throw NotBiholomorphic("map sends the disk to the exterior");

  const HoloMap base = make_map(f);
  InvarianceResult r;
  r.original = lipschitz_estimate(base, d1, opt);
  r.pulled = lipschitz_estimate(compose(base, phi), d2, opt);
  r.discrepancy = std::abs(r.pulled.value - r.original.value) / std::max(r.original.value, 1e-300);
  if (r.original.value == 0.0 && r.pulled.value == 0.0) r.discrepancy = 0.0;
  return r;
}

std::string to_string(NormalityLabel label) {
  return label == NormalityLabel::Normal ? "Normal" : "NonNormalSuspected";
}

Verdict classify_trace(std::vector<std::pair<long, double>> trace, double threshold, std::size_t tail) {
  Verdict v;
  v.threshold = threshold;
  v.tail = std::min(tail, trace.size());
  v.trace = std::move(trace);
  if (v.tail < 2) return v;
  const std::vector<std::pair<long, double>> last(v.trace.end() - static_cast<std::ptrdiff_t>(v.tail), v.trace.end());
  bool increasing = true;
  for (std::size_t i = 1; i < last.size(); ++i) increasing = increasing && last[i].second > last[i - 1].second;
  v.divergence_rate = log_slope(last);
  if (increasing && last.back().second > threshold) v.label = NormalityLabel::NonNormalSuspected;
  return v;
}

Verdict marty_test(const HoloExpr& family, cplx a, double r, const std::vector<long>& ks, const MartyOptions& opt) {
  if (ks.empty()) throw InvalidArgument("empty k schedule");
  const Disk d(a, r);
  std::vector<std::pair<long, double>> trace;
  trace.reserve(ks.size());
  for (long k : ks) {
    const LipEstimate e = lipschitz_estimate(make_map(family, static_cast<double>(k)), d, opt.lip);
    trace.emplace_back(k, e.value);
  }
  return classify_trace(std::move(trace), opt.threshold, opt.tail);
}

}  // namespace punctlab
