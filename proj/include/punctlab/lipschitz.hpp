#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "punctlab/expr.hpp"
#include "punctlab/map.hpp"
#include "punctlab/metrics.hpp"
#include "punctlab/search.hpp"

namespace punctlab {

struct LipOptions {
  std::size_t budget = 2000;  // spiral samples; pair channel uses budget/2 + budget/4
  std::uint64_t seed = 0;
  AscentOptions ascent{};
};

/// Lower estimate of L = sup chordal(f(w), f(w')) / d_D(w, w').
struct LipEstimate {
  double value = 0.0;
  cplx w1{};
  cplx w2{};
  double witness_ratio = 0.0;  // ratio at (w1, w2); value >= witness_ratio
  double density_value = 0.0;  // sup of f#(z) (R^2 - |z-a|^2) / R found
  double pair_value = 0.0;     // best sampled pair ratio
  std::size_t samples_used = 0;
  bool refined = false;
  std::uint64_t seed = 0;
};

/// chordal(f(w), f(w')) / poincare_distance(D, w, w').
double pair_ratio(const HoloMap& f, const Disk& d, cplx w, cplx w2);

LipEstimate lipschitz_estimate(const HoloMap& f, const Disk& d, const LipOptions& opt = {});
LipEstimate lipschitz_estimate(const HoloExpr& f, const Disk& d, const LipOptions& opt = {});

/// z -> (a z + b) / (c z + d).
struct Mobius {
  cplx a{1.0, 0.0};
  cplx b{};
  cplx c{};
  cplx d{1.0, 0.0};

  cplx operator()(cplx z) const noexcept { return (a * z + b) / (c * z + d); }
  cplx derivative(cplx z) const noexcept;
  Mobius then(const Mobius& outer) const noexcept;  // outer after this

  static Mobius identity() { return {}; }
  static Mobius affine(cplx center, cplx scale) { return {scale, center, {}, {1.0, 0.0}}; }
  /// Biholomorphism from -> to: normalize, apply e^{i theta}(u - alpha)/(1 - conj(alpha) u), scale out.
  static Mobius disk_map(const Disk& from, const Disk& to, double theta, cplx alpha);
};

/// f o phi as a sampled map.
HoloMap compose(const HoloMap& f, const Mobius& phi);

struct InvarianceResult {
  double discrepancy = 0.0;
  LipEstimate original;  // L(f, D1)
  LipEstimate pulled;    // L(f o phi, D2)
};

/// |L(f o phi, D2) - L(f, D1)| / max(L(f, D1), eps). Throws NotBiholomorphic
/// unless phi maps D2 onto D1.
InvarianceResult invariance_check(const HoloExpr& f, const Disk& d1, const Disk& d2, const Mobius& phi,
                                  const LipOptions& opt = {});

enum class NormalityLabel { Normal, NonNormalSuspected };
std::string to_string(NormalityLabel label);

struct MartyOptions {
  double threshold = 1e3;
  std::size_t tail = 5;
  LipOptions lip{};
};

struct Verdict {
  NormalityLabel label = NormalityLabel::Normal;
  std::vector<std::pair<long, double>> trace;  // (k, L_k)
  double divergence_rate = 0.0;                // log-log slope of the tail
  double threshold = 0.0;
  std::size_t tail = 0;
};

Verdict marty_test(const HoloExpr& family, cplx a, double r, const std::vector<long>& ks, const MartyOptions& opt = {});

/// Label for a trace (k, L_k): NonNormalSuspected iff the last value exceeds
/// the threshold and the tail is strictly increasing.
Verdict classify_trace(std::vector<std::pair<long, double>> trace, double threshold, std::size_t tail);

}  // namespace punctlab
