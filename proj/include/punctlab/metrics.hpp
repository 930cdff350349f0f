#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "punctlab/expr.hpp"
#include "punctlab/kernels.hpp"
#include "punctlab/map.hpp"

namespace punctlab {

/// Open disk D(a, R).
struct Disk {
  cplx center{};
  double radius = 1.0;

  Disk() = default;
  Disk(cplx a, double r);
  bool contains(cplx z) const noexcept { return std::abs(z - center) < radius; }
};

/// Distance of the metric R|dz| / (R^2 - |z-a|^2) on D(a, R):
/// arctanh(R|z-w| / |R^2 - (z-a) conj(w-a)|).
double poincare_distance(const Disk& d, cplx z, cplx w);

struct ComparisonBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = |z-w|/R <= poincare_distance <= R|z-w|/(R^2-r^2) = upper for
/// z, w in the closed disk D(a, r), 0 < r < R.
ComparisonBounds comparison_bounds(const Disk& d, double r, cplx z, cplx w);

/// Hyperbolic distance of |dz| / (-|z| log|z|) on the punctured unit disk,
/// through the covering tau = log(z) / (2 pi i) onto the upper half-plane.
double punctured_distance(cplx z, cplx w);

/// Length 2 pi / (-log r) of the circle |z| = r in the same metric.
double punctured_circle_length(double r);

struct CircleDiameter {
  double diameter = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

struct DiameterOptions {
  std::size_t samples = 1024;
  int refinement_rounds = 3;
  Exec exec = Exec::Parallel;
};

/// Chordal diameter of f(|z| = r), with the angles of a realizing pair.
/// Samples landing on an indeterminate form are moved by half a step.
/// Throws EvaluationError if the circle meets an essential point.
CircleDiameter diam_circle_image(const HoloMap& f, double r, const DiameterOptions& opt = {});
CircleDiameter diam_circle_image(const HoloExpr& f, double r, const DiameterOptions& opt = {});

struct DiameterEntry {
  double radius = 0.0;
  double diameter = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

struct DiameterProfile {
  std::vector<DiameterEntry> entries;
  std::string metric = "chordal";
  std::size_t samples = 0;
};

DiameterProfile diameter_profile(const HoloMap& f, std::span<const double> radii, const DiameterOptions& opt = {});
DiameterProfile diameter_profile(const HoloExpr& f, std::span<const double> radii, const DiameterOptions& opt = {});

/// CSV with header radius,diameter,theta1,theta2.
void write_csv(std::ostream& out, const DiameterProfile& profile);

/// Checks that radii are strictly decreasing and inside (0, 1).
void require_radii(std::span<const double> radii);

}  // namespace punctlab
