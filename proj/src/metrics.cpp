#include "punctlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "punctlab/errors.hpp"

namespace punctlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_inside(const Disk& d, cplx z, const char* name) {
  if (!d.contains(z)) throw OutsideDomain(std::string(name) + " is outside the disk");
}

void require_punctured(cplx z) {
  const double m = std::abs(z);
  if (!(m > 0.0 && m < 1.0)) throw OutsideDomain("point outside the punctured unit disk");
}

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

struct CircleSample {
  double theta = 0.0;
  SpherePoint value;
  bool ok = false;
};

CircleSample sample_at(const HoloMap& f, double r, double theta) {
  const EvalResult v = f.value(std::polar(r, theta));
  if (v.status == EvalStatus::Essential) throw EvaluationError("circle passes through an essential point");
  return {theta, v.point, v.ok()};
}

}  // namespace

Disk::Disk(cplx a, double r) : center(a), radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("disk radius must be positive");
}

double poincare_distance(const Disk& d, cplx z, cplx w) {
  require_inside(d, z, "z");
  require_inside(d, w, "w");
  const double R = d.radius;
  const cplx zs = z - d.center;
  const cplx ws = w - d.center;
  const double num = R * std::abs(z - w);
  const double den = std::abs(R * R - zs * std::conj(ws));
  return std::atanh(std::min(num / den, 1.0));
}

ComparisonBounds comparison_bounds(const Disk& d, double r, cplx z, cplx w) {
  const double R = d.radius;
  if (!(r > 0.0 && r < R)) throw InvalidArgument("comparison radius must satisfy 0 < r < R");
  const double slack = 1e-12 * R;
  if (std::abs(z - d.center) > r + slack || std::abs(w - d.center) > r + slack) {
    throw OutsideDomain("comparison points must lie in the closed disk of radius r");
  }
  const double dist = std::abs(z - w);
  return {dist / R, R * dist / (R * R - r * r)};
}

double punctured_distance(cplx z, cplx w) {
  require_punctured(z);
  require_punctured(w);
  // tau = log(z) / (2 pi i): Re tau = arg z / 2pi, Im tau = -log|z| / 2pi.
  const double x1 = std::arg(z) / kTwoPi;
  const double x2 = std::arg(w) / kTwoPi;
  const double y1 = -std::log(std::abs(z)) / kTwoPi;
  const double y2 = -std::log(std::abs(w)) / kTwoPi;
  const double dx = x1 - x2;
  const double dy = y1 - y2;
  const long reach = 2 + static_cast<long>(std::ceil(std::abs(dx)));
  const double scale = 2.0 * std::sqrt(y1 * y2);
  double best = std::numeric_limits<double>::infinity();
  for (long n = -reach; n <= reach; ++n) {
    const double h = std::hypot(dx - static_cast<double>(n), dy);
    // arccosh(1 + h^2 / (2 y1 y2)) = 2 asinh(h / (2 sqrt(y1 y2))).
    best = std::min(best, 2.0 * std::asinh(h / scale));
  }
  return best;
}

double punctured_circle_length(double r) {
  if (!(r > 0.0 && r < 1.0)) throw OutsideDomain("circle radius must lie in (0, 1)");
  return kTwoPi / (-std::log(r));
}

CircleDiameter diam_circle_image(const HoloMap& f, double r, const DiameterOptions& opt) {
  if (opt.samples < 8) throw InvalidArgument("at least 8 samples per circle are required");
  if (!(r > 0.0)) throw InvalidArgument("circle radius must be positive");
  const std::size_t n = opt.samples;
  const double step = kTwoPi / static_cast<double>(n);

  std::vector<cplx> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = std::polar(r, step * static_cast<double>(j));
  std::vector<EvalResult> values = evaluate_points(f, z, opt.exec);

  std::vector<CircleSample> samples(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = step * static_cast<double>(j);
    if (values[j].status == EvalStatus::Essential) throw EvaluationError("circle passes through an essential point");
    samples[j] = {theta, values[j].point, values[j].ok()};
    if (!samples[j].ok) {
      // A pole or 0/0 node exactly on the sample: move by half a step.
      samples[j] = sample_at(f, r, theta + 0.5 * step);
      if (!samples[j].ok) throw IndeterminateError("indeterminate value on the circle");
    }
  }

  std::vector<Vec3> pts(n);
  for (std::size_t j = 0; j < n; ++j) pts[j] = to_unit_sphere(samples[j].value);
  const FarPair far = farthest_pair(pts, opt.exec);

  CircleSample a = samples[far.i];
  CircleSample b = samples[far.j];
  double best = chordal(a.value, b.value);

  // Golden-ratio refinement: coordinate search around each witness with
  // steps shrinking by phi per round.
  double h = step / std::numbers::phi;
  for (int round = 0; round < opt.refinement_rounds; ++round) {
    for (int iter = 0; iter < 32; ++iter) {
      bool moved = false;
      for (int which = 0; which < 2; ++which) {
        CircleSample& s = which == 0 ? a : b;
        const CircleSample& other = which == 0 ? b : a;
        for (double sign : {-1.0, 1.0}) {
          const CircleSample c = sample_at(f, r, s.theta + sign * h);
          if (!c.ok) continue;
          const double d = chordal(c.value, other.value);
          if (d > best) {
            best = d;
            s = c;
            moved = true;
          }
        }
      }
      if (!moved) break;
    }
    h /= std::numbers::phi;
  }
  return {std::min(best, 2.0), wrap_angle(a.theta), wrap_angle(b.theta)};
}

CircleDiameter diam_circle_image(const HoloExpr& f, double r, const DiameterOptions& opt) {
  if (f.uses_parameter()) throw InvalidArgument("bind the parameter k before sampling");
  return diam_circle_image(make_map(f), r, opt);
}

void require_radii(std::span<const double> radii) {
  if (radii.empty()) throw InvalidArgument("empty radii schedule");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < 1.0)) throw InvalidArgument("radii must lie in (0, 1)");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw InvalidArgument("radii must be strictly decreasing");
  }
}

DiameterProfile diameter_profile(const HoloMap& f, std::span<const double> radii, const DiameterOptions& opt) {
  require_radii(radii);
  DiameterProfile profile;
  profile.samples = opt.samples;
  profile.entries.reserve(radii.size());
  for (double r : radii) {
    const CircleDiameter d = diam_circle_image(f, r, opt);
    profile.entries.push_back({r, d.diameter, d.theta1, d.theta2});
  }
  return profile;
}

DiameterProfile diameter_profile(const HoloExpr& f, std::span<const double> radii, const DiameterOptions& opt) {
  if (f.uses_parameter()) throw InvalidArgument("bind the parameter k before sampling");
  return diameter_profile(make_map(f), radii, opt);
}

void write_csv(std::ostream& out, const DiameterProfile& profile) {
  const auto old = out.precision(17);
  out << "radius,diameter,theta1,theta2\n";
  for (const DiameterEntry& e : profile.entries) {
    out << e.radius << ',' << e.diameter << ',' << e.theta1 << ',' << e.theta2 << '\n';
  }
  out.precision(old);
}

}  // namespace punctlab
