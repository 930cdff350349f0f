#pragma once

#include <functional>

#include "punctlab/expr.hpp"

namespace punctlab {

/// Sampling interface for a meromorphic map of one variable. `value` is
/// required; `jet` and `log_jet` are needed only by derivative-based
/// searches. Synthetic test maps may provide `value` alone.
struct HoloMap {
  std::function<EvalResult(cplx)> value;
  std::function<Jet(cplx)> jet;
  std::function<LogJet(cplx)> log_jet;

  bool differentiable() const noexcept { return static_cast<bool>(jet); }
};

HoloMap make_map(const HoloExpr& f, double k = 0.0);

/// w -> f(center + scale * w), derivatives rescaled by the chain rule.
HoloMap affine_pullback(const HoloMap& f, cplx center, cplx scale);

/// log f#(z), finite wherever f# > 0 even if f# underflows a double.
/// Returns -inf at points where neither jet form is defined.
double log_spherical_derivative(const HoloMap& f, cplx z);

/// Holomorphic chart data near z: u = log|f(z)| and f'/f. Returns false at
/// zeros and poles.
bool log_chart(const HoloMap& f, cplx z, double& u, cplx& dlog);

}  // namespace punctlab
