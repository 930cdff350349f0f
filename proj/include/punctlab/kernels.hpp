#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "punctlab/map.hpp"
#include "punctlab/sphere.hpp"

namespace punctlab {

/// Every kernel has a serial reference and an OpenMP variant with identical
/// results: reductions break ties on the smallest index.
enum class Exec { Serial, Parallel };

struct IndexedMax {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t index = npos;
  double value = -std::numeric_limits<double>::infinity();
};

struct FarPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double distance = 0.0;
};

std::vector<EvalResult> evaluate_points(const HoloMap& f, std::span<const cplx> z, Exec exec = Exec::Parallel);

/// log f# at each point; -inf where undefined.
std::vector<double> log_densities(const HoloMap& f, std::span<const cplx> z, Exec exec = Exec::Parallel);

/// Largest entry; NaN entries are ignored.
IndexedMax argmax(std::span<const double> values, Exec exec = Exec::Parallel);

/// Farthest pair of points on the unit sphere (chordal diameter).
FarPair farthest_pair(std::span<const Vec3> points, Exec exec = Exec::Parallel);

/// max_i chordal(a[i], b[i]).
IndexedMax max_chordal_residual(std::span<const SpherePoint> a, std::span<const SpherePoint> b,
                                Exec exec = Exec::Parallel);

}  // namespace punctlab
