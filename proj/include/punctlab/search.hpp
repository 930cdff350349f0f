#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "punctlab/kernels.hpp"
#include "punctlab/map.hpp"

namespace punctlab {

/// n points of a Vogel (golden-angle) spiral filling the open disk D(a, R);
/// the first point is the center itself.
std::vector<cplx> vogel_points(cplx center, double radius, std::size_t n);

/// Weighted spherical density w(z) f#(z) on a disk, with
/// w(z) = (R^2 - |z - a|^2) / scale. Evaluated in log form.
struct DensityProblem {
  cplx center{};
  double radius = 1.0;
  double scale = 1.0;

  double log_weight(cplx z) const noexcept;
};

struct AscentOptions {
  int starts = 16;
  int iterations = 60;
  Exec exec = Exec::Parallel;
};

struct DensitySearch {
  std::vector<cplx> points;        // spiral samples
  std::vector<double> log_values;  // log of weighted density at the samples
  std::vector<cplx> endpoints;     // ascent results, best first
  std::vector<double> endpoint_log_values;
  cplx best{};
  double log_best = 0.0;
  std::size_t evaluations = 0;
  bool refined = false;  // ascent improved on the best sample
};

/// Spiral sampling followed by multi-start pattern ascent of
/// log f# + log w. Besides the 8 compass moves, each step tries the same
/// moves projected back onto the level set of log|f| through the current
/// point, and a Newton step onto |f| = 1. This lets the search follow the
/// thin ridges of maps such as exp(1/z) near 0.
DensitySearch maximize_density(const HoloMap& f, const DensityProblem& problem, std::size_t samples,
                               const AscentOptions& opt = {});

struct CircleMax {
  double theta = 0.0;
  double log_value = 0.0;  // log(|z| f#(z)) at the maximizer
  std::vector<double> candidate_thetas;
  std::vector<double> candidate_log_values;
};

/// sup over |z| = r of |z| f#(z): samples in log form, then golden-section
/// refinement around the best local maxima.
CircleMax maximize_on_circle(const HoloMap& f, double r, std::size_t samples = 256, int candidates = 4,
                             Exec exec = Exec::Parallel);

struct PairSample {
  std::vector<cplx> first;
  std::vector<cplx> second;
};

/// Seeded random pairs in the open disk D(a, R): `uniform` independent pairs,
/// then `near` pairs at separation R 10^-u with u uniform in [1, 5]. Near
/// pairs leaving the disk are dropped.
PairSample sample_pairs(cplx center, double radius, std::size_t uniform, std::size_t near, std::uint64_t seed);

/// log of (R^2 - |z-a|^2)/scale * f#(z) without the ridge machinery.
double log_weighted_density(const HoloMap& f, const DensityProblem& problem, cplx z);

}  // namespace punctlab
