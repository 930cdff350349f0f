#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "punctlab/expr.hpp"
#include "punctlab/kernels.hpp"
#include "punctlab/map.hpp"
#include "punctlab/search.hpp"

namespace punctlab {

enum class CaseTag { PlaneLimit, PuncturedLimit, NoEssentialSingularity, Inconclusive };
std::string to_string(CaseTag tag);

struct ZalcmanOptions {
  std::size_t budget = 4000;  // spiral samples for each sup search
  int grid = 33;              // grid x grid points over [-r_test, r_test]^2, kept inside the disk
  double r_test = 2.0;
  double tol = 1e-3;
  double m_threshold = 1e3;  // M_k needed before a limit is declared
  double c0 = 0.1;           // non-constancy certificate
  double target_separation = 1e-4;  // chordal separation of the extremal pair
  // Anchored centers: pick z_k with f_k(z_k) = anchor among near-maximal
  // points, so that consecutive rescalings share g_k(0).
  std::optional<cplx> anchor;
  std::uint64_t seed = 0;
  AscentOptions ascent{};
};

/// k = 2^1 .. 2^20.
std::vector<long> default_k_schedule();

struct ExtremalPair {
  double M = 0.0;       // near-sup of the weighted density
  cplx z{};
  cplx w{};
  double weight = 0.0;  // weight of (z, w); at least M/2
  bool anchored = false;
};

/// Near-sup M of ((r^2 - |z|^2)/r^2) chordal(f(z), f(w))/|z - w| over D(0, r)
/// and a distinct pair reaching at least M/2.
ExtremalPair weighted_sup_Mk(const HoloMap& f, double r, const ZalcmanOptions& opt = {});

struct Rescaled {
  double rho = 0.0;    // |z - w| / chordal(f(z), f(w))
  double R = 0.0;      // (r - |z|) / rho
  cplx v{};            // (w - z) / rho, so that g(v) = f(w)
  double ratio = 0.0;  // chordal(g(0), g(v)) / |v|
  HoloMap g;           // v -> f(z + rho v)
};

Rescaled build_rescaled(const HoloMap& f, double r, cplx z, cplx w);

struct RescalingLevel {
  long k = 0;
  double M = 0.0;
  cplx z{};
  cplx w{};
  double rho = 0.0;
  double R = 0.0;
  double ratio = 0.0;
  bool anchored = false;
};

struct RescalingResult {
  CaseTag case_tag = CaseTag::Inconclusive;
  std::vector<cplx> centers;
  std::vector<double> scales;
  std::vector<long> k_indices;
  std::vector<std::pair<cplx, SpherePoint>> limit_samples;
  double residual = 0.0;
  std::vector<double> normalization_ratios;
  std::vector<RescalingLevel> levels;  // every level, including ones with R < r_test
  double spread = 0.0;                 // max pairwise chordal distance of the limit samples
  int stride = 1;                      // subsequence step of the final comparison
  std::string note;
};

/// Grid of points with |v| <= radius on a grid x grid lattice over [-radius, radius]^2.
std::vector<cplx> disk_grid(double radius, int grid);

/// Rescaling extraction along a list of members f_k defined on D(0, r).
RescalingResult extract_rescaling(const std::vector<HoloMap>& members, const std::vector<long>& ks, double r,
                                  const ZalcmanOptions& opt = {});
RescalingResult extract_rescaling(const HoloExpr& family, double r, const std::vector<long>& ks,
                                  const ZalcmanOptions& opt = {});

/// Outer zoom f_{k_j}(a + r_j w) on the unit disk followed by extraction.
/// Equal-length schedules are zipped, a single radius varies k, a single k
/// varies the radius.
RescalingResult double_rescale(const HoloExpr& family, cplx a, const std::vector<double>& r_schedule,
                               const std::vector<long>& k_schedule, const ZalcmanOptions& opt = {});

}  // namespace punctlab
