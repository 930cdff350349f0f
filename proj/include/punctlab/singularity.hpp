#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "punctlab/expr.hpp"
#include "punctlab/kernels.hpp"
#include "punctlab/lipschitz.hpp"
#include "punctlab/map.hpp"
#include "punctlab/metrics.hpp"
#include "punctlab/zalcman.hpp"

namespace punctlab {

/// 10^-1, ..., 10^-n.
std::vector<double> decade_radii(int n);

// Winding numbers --------------------------------------------------------

/// (1/2pi) sum of principal argument increments of curve - p. The curve is
/// closed by the step from the last sample back to the first unless they
/// coincide. Throws PointOnCurve when a sample lies within eps(1 + |p|) of p
/// and NonIntegral when a single step turns by more than 3pi/4.
double winding_raw(std::span<const cplx> curve, cplx p, double eps = 1e-12);

/// winding_raw rounded; NonIntegral if it is more than 0.1 from an integer.
int winding_number(std::span<const cplx> curve, cplx p, double eps = 1e-12);

/// Samples of f on |z| = r at angles 2 pi j / n.
std::vector<cplx> circle_curve(const std::function<cplx(cplx)>& f, double r, std::size_t n);

/// The configuration of the annulus argument on sampled image curves:
/// outer curve inside disk_a, inner curve inside disk_b, value outside both
/// closed disks, and both curves of index 0 about value.
bool separation_configuration(std::span<const cplx> outer, std::span<const cplx> inner, const Disk& disk_a,
                              const Disk& disk_b, cplx value);

/// separation_configuration for f on |z| = r_out and |z| = r_in (256 samples
/// each) with value f(y0). Throws InvalidArgument unless r_in < |y0| < r_out
/// and all sampled values are finite.
bool annulus_separation_check(const HoloMap& f, double r_in, double r_out, const Disk& disk_a, const Disk& disk_b,
                              cplx y0, std::size_t samples = 256);
bool annulus_separation_check(const HoloExpr& f, double r_in, double r_out, const Disk& disk_a, const Disk& disk_b,
                              cplx y0, std::size_t samples = 256);

// Circle-diameter witness ------------------------------------------------

struct LVOptions {
  std::size_t circle_samples = 64;  // cluster detection
  double cluster_radius = 0.05;
  double diam_threshold = 0.05;
  std::size_t diam_samples = 1024;
  std::size_t tail = 3;
  double escape_radius = 0.1;  // W' is the chordal ball of this radius
  double r_min = 1e-12;
  double rel_precision = 1e-3;
  Exec exec = Exec::Parallel;
};

struct LVWitness {
  std::vector<cplx> centers;        // z_n, |z_n| strictly decreasing
  SpherePoint cluster_value;        // limit of f(z_n)
  std::size_t cluster_hits = 0;     // radii whose samples hit the cluster ball
  std::vector<double> diameters;    // diam f(|z| = |z_n|)
  bool escaped = false;             // escape construction used
  std::vector<double> escape_radii; // r_n'
  std::vector<cplx> second_centers; // z_n'
  std::vector<double> escape_diameters;
  double diam_floor = 0.0;
};

struct LVResult {
  bool found = false;
  LVWitness witness;  // filled in both cases; diam_floor meaningful only when found
  std::string note;
};

LVResult lv_witness(const HoloMap& f, std::span<const double> radii, const LVOptions& opt = {});
LVResult lv_witness(const HoloExpr& f, std::span<const double> radii, const LVOptions& opt = {});

// Julia indicator and half-disk trace -------------------------------------

enum class JuliaVerdict { ExceptionalSuspected, NonExceptional };
std::string to_string(JuliaVerdict v);

struct TraceOptions {
  std::size_t circle_samples = 256;
  int candidates = 4;
  double threshold = 1e3;
  std::size_t tail = 3;
  LipOptions lip = [] {
    LipOptions o;
    o.budget = 400;
    return o;
  }();
  Exec exec = Exec::Parallel;
};

struct JuliaEntry {
  double r = 0.0;
  double value = 0.0;  // sup over |z| = r of |z| f#(z)
  double theta = 0.0;
};

struct JuliaProfile {
  std::vector<JuliaEntry> entries;
  JuliaVerdict verdict = JuliaVerdict::ExceptionalSuspected;
};

JuliaProfile julia_indicator(const HoloMap& f, std::span<const double> radii, const TraceOptions& opt = {});
JuliaProfile julia_indicator(const HoloExpr& f, std::span<const double> radii, const TraceOptions& opt = {});

struct HalfDiskEntry {
  double r = 0.0;
  double value = 0.0;  // sup over the tried y with |y| = r of L(f, D(y, r/2))
  cplx y{};
  LipEstimate estimate;
};

/// Per radius, Lipschitz estimates on D(y, |y|/2) at the circle points where
/// |z| f#(z) peaks.
std::vector<HalfDiskEntry> halfdisk_lipschitz_trace(const HoloMap& f, std::span<const double> radii,
                                                    const TraceOptions& opt = {});
std::vector<HalfDiskEntry> halfdisk_lipschitz_trace(const HoloExpr& f, std::span<const double> radii,
                                                    const TraceOptions& opt = {});

/// True iff the last value exceeds the threshold and the tail strictly increases.
bool diverging_tail(std::span<const double> values, double threshold, std::size_t tail);

// Rescaling principle -----------------------------------------------------

struct PunctOptions {
  double annulus_inner = 0.25;
  double annulus_outer = 4.0;
  int angular = 64;
  int radial = 16;
  double tol = 1e-3;
  Exec exec = Exec::Parallel;
};

/// Polar grid on the annulus, angular x radial points with geometric radii.
std::vector<cplx> annulus_grid(const PunctOptions& opt);

/// Case (ii) core: g_k(v) = f(s_k v) for the given scales, compared on the
/// annulus grid. PuncturedLimit iff the final residual is within tol and
/// diam f(|z| = s_last) >= diam_floor > 0.
RescalingResult punctured_rescale(const HoloMap& f, std::span<const double> scales, double diam_floor,
                                  const PunctOptions& opt = {});

struct PrincipleOptions {
  std::vector<double> radii = decade_radii(6);
  double collapse_tol = 1e-3;  // diameters and trace on the last `tail` radii
  std::size_t tail = 3;
  TraceOptions trace{};
  ZalcmanOptions zalcman = [] {
    ZalcmanOptions o;
    o.anchor = cplx{1.0, 0.0};
    return o;
  }();
  LVOptions lv{};
  PunctOptions punct{};
};

struct PrincipleResult {
  RescalingResult rescaling;
  std::string branch;  // "collapse", "i" or "ii"
  std::vector<double> diameters;
  std::vector<HalfDiskEntry> trace;
  std::optional<LVResult> lv;
};

PrincipleResult rescaling_principle(const HoloMap& f, const PrincipleOptions& opt = {});
PrincipleResult rescaling_principle(const HoloExpr& f, const PrincipleOptions& opt = {});

/// Max pairwise chordal distance of f(z_k + rho_k v) over the grid on D(radius),
/// one value per level.
std::vector<double> rescaled_spread(const HoloMap& f, std::span<const cplx> centers, std::span<const double> scales,
                                    double radius = 2.0, int grid = 33, Exec exec = Exec::Parallel);

}  // namespace punctlab
