#include "punctlab/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace punctlab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Probe {
  cplx z{};
  double value = kNegInf;
  double u = 0.0;
  cplx dlog{};
  bool chart = false;
};

Probe probe(const HoloMap& f, const DensityProblem& problem, cplx z) {
  Probe p;
  p.z = z;
  const double lw = problem.log_weight(z);
  if (lw == kNegInf) return p;
  p.value = lw + log_spherical_derivative(f, z);
  if (std::isnan(p.value)) p.value = kNegInf;
  p.chart = log_chart(f, z, p.u, p.dlog) && std::abs(p.dlog) > 0.0;
  return p;
}

struct Ascent {
  Probe end;
  std::size_t evaluations = 0;
};

Ascent ascend(const HoloMap& f, const DensityProblem& problem, cplx start, double h0, int iterations) {
  Ascent a;
  Probe cur = probe(f, problem, start);
  a.evaluations = 1;
  double h = h0;
  auto consider = [&](const Probe& p, Probe& best) {
    if (p.value > best.value) best = p;
  };
  for (int it = 0; it < iterations; ++it) {
    Probe best = cur;
    for (int k = 0; k < 8; ++k) {
      const cplx w = cur.z + h * std::polar(1.0, k * std::numbers::pi / 4.0);
      const Probe p = probe(f, problem, w);
      ++a.evaluations;
      consider(p, best);
      if (cur.chart && p.chart) {
        // Back onto the level set log|f| = cur.u: a holomorphic Newton step
        // that changes Re log f only.
        const cplx back = w - (p.u - cur.u) / p.dlog;
        if (std::abs(back - cur.z) < 4.0 * h) {
          consider(probe(f, problem, back), best);
          ++a.evaluations;
        }
      }
    }
    if (cur.chart && cur.u != 0.0) {
      // Newton step onto |f| = 1, where f# peaks for slowly varying f'/f.
      const cplx jump = cur.z - cur.u / cur.dlog;
      if (std::abs(jump - cur.z) < problem.radius) {
        consider(probe(f, problem, jump), best);
        ++a.evaluations;
      }
    }
    if (best.value > cur.value) {
      cur = best;
    } else {
      h *= 0.5;
    }
  }
  a.end = cur;
  return a;
}

double golden_max(const std::function<double(double)>& g, double lo, double hi, int iterations, double& arg) {
  const double inv_phi = 1.0 / std::numbers::phi;
  double a = lo;
  double b = hi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double gc = g(c);
  double gd = g(d);
  for (int i = 0; i < iterations && b - a > 0.0; ++i) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - (b - a) * inv_phi;
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + (b - a) * inv_phi;
      gd = g(d);
    }
  }
  if (gc >= gd) {
    arg = c;
    return gc;
  }
  arg = d;
  return gd;
}

}  // namespace

std::vector<cplx> vogel_points(cplx center, double radius, std::size_t n) {
  std::vector<cplx> pts;
  pts.reserve(n);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = radius * std::sqrt(static_cast<double>(j) / static_cast<double>(n));
    pts.push_back(j == 0 ? center : center + std::polar(rho, golden_angle * static_cast<double>(j)));
  }
  return pts;
}

double DensityProblem::log_weight(cplx z) const noexcept {
  const double d = std::abs(z - center);
  if (!(d < radius)) return kNegInf;
  return std::log((radius - d) * (radius + d) / scale);
}

double log_weighted_density(const HoloMap& f, const DensityProblem& problem, cplx z) {
  const double lw = problem.log_weight(z);
  if (lw == kNegInf) return kNegInf;
  const double v = lw + log_spherical_derivative(f, z);
  return std::isnan(v) ? kNegInf : v;
}

DensitySearch maximize_density(const HoloMap& f, const DensityProblem& problem, std::size_t samples,
                               const AscentOptions& opt) {
  DensitySearch s;
  s.points = vogel_points(problem.center, problem.radius, samples);
  s.log_values = log_densities(f, s.points, opt.exec);
  for (std::size_t i = 0; i < s.points.size(); ++i) s.log_values[i] += problem.log_weight(s.points[i]);
  s.evaluations = s.points.size();

  std::vector<std::size_t> order(s.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.log_values[a] > s.log_values[b]; });
  std::vector<std::size_t> starts;
  for (std::size_t i : order) {
    if (static_cast<int>(starts.size()) >= opt.starts) break;
    if (s.log_values[i] > kNegInf) starts.push_back(i);
  }

  const double h0 = 2.0 * problem.radius / std::sqrt(static_cast<double>(std::max<std::size_t>(samples, 1)));
  std::vector<Ascent> results(starts.size());
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(starts.size());
  if (opt.exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < m; ++i) results[i] = ascend(f, problem, s.points[starts[i]], h0, opt.iterations);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < m; ++i) results[i] = ascend(f, problem, s.points[starts[i]], h0, opt.iterations);
  }

  std::vector<std::size_t> by_value(results.size());
  std::iota(by_value.begin(), by_value.end(), 0);
  std::stable_sort(by_value.begin(), by_value.end(),
                   [&](std::size_t a, std::size_t b) { return results[a].end.value > results[b].end.value; });
  for (std::size_t i : by_value) {
    s.endpoints.push_back(results[i].end.z);
    s.endpoint_log_values.push_back(results[i].end.value);
    s.evaluations += results[i].evaluations;
  }

  const IndexedMax top = argmax(s.log_values, opt.exec);
  s.best = top.index == IndexedMax::npos ? problem.center : s.points[top.index];
  s.log_best = top.value;
  if (!s.endpoints.empty() && s.endpoint_log_values.front() > s.log_best) {
    s.best = s.endpoints.front();
    s.log_best = s.endpoint_log_values.front();
    s.refined = true;
  }
  return s;
}

CircleMax maximize_on_circle(const HoloMap& f, double r, std::size_t samples, int candidates, Exec exec) {
  CircleMax out;
  const double step = kTwoPi / static_cast<double>(samples);
  std::vector<cplx> z(samples);
  for (std::size_t j = 0; j < samples; ++j) z[j] = std::polar(r, step * static_cast<double>(j));
  std::vector<double> v = log_densities(f, z, exec);
  const double log_r = std::log(r);
  for (double& x : v) x += log_r;

  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < samples; ++j) {
    const double prev = v[(j + samples - 1) % samples];
    const double next = v[(j + 1) % samples];
    if (v[j] > kNegInf && v[j] >= prev && v[j] >= next) peaks.push_back(j);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  if (static_cast<int>(peaks.size()) > candidates) peaks.resize(static_cast<std::size_t>(candidates));

  out.log_value = kNegInf;
  auto objective = [&](double theta) {
    const double x = log_spherical_derivative(f, std::polar(r, theta)) + log_r;
    return std::isnan(x) ? kNegInf : x;
  };
  for (std::size_t j : peaks) {
    const double center = step * static_cast<double>(j);
    double arg = center;
    double best = golden_max(objective, center - step, center + step, 100, arg);
    if (v[j] >= best) {
      best = v[j];
      arg = center;
    }
    arg = std::fmod(arg + kTwoPi, kTwoPi);
    out.candidate_thetas.push_back(arg);
    out.candidate_log_values.push_back(best);
    if (best > out.log_value) {
      out.log_value = best;
      out.theta = arg;
    }
  }
  return out;
}

PairSample sample_pairs(cplx center, double radius, std::size_t uniform, std::size_t near, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double inner = radius * (1.0 - 1e-9);
  auto point = [&] { return center + std::polar(inner * std::sqrt(unit(rng)), kTwoPi * unit(rng)); };
  PairSample s;
  s.first.reserve(uniform + near);
  s.second.reserve(uniform + near);
  for (std::size_t i = 0; i < uniform; ++i) {
    const cplx z = point();
    s.first.push_back(z);
    s.second.push_back(point());
  }
  for (std::size_t i = 0; i < near; ++i) {
    const cplx z = point();
    const double sep = radius * std::pow(10.0, -(1.0 + 4.0 * unit(rng)));
    const cplx w = z + std::polar(sep, kTwoPi * unit(rng));
    if (std::abs(w - center) >= radius) continue;
    s.first.push_back(z);
    s.second.push_back(w);
  }
  return s;
}

}  // namespace punctlab
