#include "punctlab/kernels.hpp"

#include <cmath>

#include "punctlab/errors.hpp"

namespace punctlab {
namespace {

using Index = std::ptrdiff_t;

bool better(double v, std::size_t i, const IndexedMax& best) {
  if (std::isnan(v)) return false;
  if (best.index == IndexedMax::npos) return true;
  return v > best.value || (v == best.value && i < best.index);
}

bool better_pair(const FarPair& a, const FarPair& b) {
  if (a.distance != b.distance) return a.distance > b.distance;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

double sphere_distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

std::vector<EvalResult> evaluate_points(const HoloMap& f, std::span<const cplx> z, Exec exec) {
  std::vector<EvalResult> out(z.size());
  const Index n = static_cast<Index>(z.size());
  if (exec == Exec::Serial) {
    for (Index i = 0; i < n; ++i) out[i] = f.value(z[i]);
  } else {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = f.value(z[i]);
  }
  return out;
}

std::vector<double> log_densities(const HoloMap& f, std::span<const cplx> z, Exec exec) {
  if (!f.differentiable()) throw InvalidArgument("map has no derivative information");
  std::vector<double> out(z.size());
  const Index n = static_cast<Index>(z.size());
  if (exec == Exec::Serial) {
    for (Index i = 0; i < n; ++i) out[i] = log_spherical_derivative(f, z[i]);
  } else {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) out[i] = log_spherical_derivative(f, z[i]);
  }
  return out;
}

IndexedMax argmax(std::span<const double> values, Exec exec) {
  IndexedMax best;
  const Index n = static_cast<Index>(values.size());
  if (exec == Exec::Serial) {
    for (Index i = 0; i < n; ++i) {
      if (better(values[i], static_cast<std::size_t>(i), best)) best = {static_cast<std::size_t>(i), values[i]};
    }
    return best;
  }
#pragma omp parallel
  {
    IndexedMax local;
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      if (better(values[i], static_cast<std::size_t>(i), local)) local = {static_cast<std::size_t>(i), values[i]};
    }
#pragma omp critical(punctlab_argmax)
    {
      if (local.index != IndexedMax::npos && better(local.value, local.index, best)) best = local;
    }
  }
  return best;
}

FarPair farthest_pair(std::span<const Vec3> points, Exec exec) {
  FarPair best;
  const Index n = static_cast<Index>(points.size());
  if (n < 2) return best;
  if (exec == Exec::Serial) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const FarPair c{static_cast<std::size_t>(i), static_cast<std::size_t>(j), sphere_distance(points[i], points[j])};
        if (better_pair(c, best)) best = c;
      }
    }
    return best;
  }
#pragma omp parallel
  {
    FarPair local;
#pragma omp for schedule(dynamic, 16) nowait
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const FarPair c{static_cast<std::size_t>(i), static_cast<std::size_t>(j), sphere_distance(points[i], points[j])};
        if (better_pair(c, local)) local = c;
      }
    }
#pragma omp critical(punctlab_farthest)
    {
      if (better_pair(local, best)) best = local;
    }
  }
  return best;
}

IndexedMax max_chordal_residual(std::span<const SpherePoint> a, std::span<const SpherePoint> b, Exec exec) {
  if (a.size() != b.size()) throw InvalidArgument("residual of grids with different sizes");
  IndexedMax best;
  const Index n = static_cast<Index>(a.size());
  if (exec == Exec::Serial) {
    for (Index i = 0; i < n; ++i) {
      const double d = chordal(a[i], b[i]);
      if (better(d, static_cast<std::size_t>(i), best)) best = {static_cast<std::size_t>(i), d};
    }
    return best;
  }
#pragma omp parallel
  {
    IndexedMax local;
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      const double d = chordal(a[i], b[i]);
      if (better(d, static_cast<std::size_t>(i), local)) local = {static_cast<std::size_t>(i), d};
    }
#pragma omp critical(punctlab_residual)
    {
      if (local.index != IndexedMax::npos && better(local.value, local.index, best)) best = local;
    }
  }
  return best;
}

}  // namespace punctlab
