#include "punctlab/map.hpp"

#include <cmath>
#include <limits>

namespace punctlab {

HoloMap make_map(const HoloExpr& f, double k) {
  HoloMap m;
  m.value = [f, k](cplx z) { return f.evaluate(z, k); };
  m.jet = [f, k](cplx z) { return f.jet(z, k); };
  m.log_jet = [f, k](cplx z) { return f.log_jet(z, k); };
  return m;
}

HoloMap affine_pullback(const HoloMap& f, cplx center, cplx scale) {
  HoloMap m;
  m.value = [f, center, scale](cplx w) { return f.value(center + scale * w); };
  if (f.jet) {
    m.jet = [f, center, scale](cplx w) {
      Jet j = f.jet(center + scale * w);
      j.dp *= scale;
      j.dq *= scale;
      return j;
    };
  }
  if (f.log_jet) {
    m.log_jet = [f, center, scale](cplx w) {
      LogJet j = f.log_jet(center + scale * w);
      j.dL *= scale;
      return j;
    };
  }
  return m;
}

double log_spherical_derivative(const HoloMap& f, cplx z) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (f.jet) {
    const Jet j = f.jet(z);
    if (j.ok()) {
      const double d = j.spherical_derivative();
      if (std::isfinite(d) && d > 1e-280) return std::log(d);
    }
  }
  if (f.log_jet) {
    const LogJet l = f.log_jet(z);
    if (l.ok()) {
      const double ld = l.log_spherical_derivative();
      if (!std::isnan(ld)) return ld;
    }
  }
  return kNegInf;
}

bool log_chart(const HoloMap& f, cplx z, double& u, cplx& dlog) {
  if (f.log_jet) {
    const LogJet l = f.log_jet(z);
    if (l.ok()) {
      u = l.L.real();
      dlog = l.dL;
      return true;
    }
  }
  if (f.jet) {
    const Jet j = f.jet(z);
    if (j.ok() && std::abs(j.p) > 0.0 && std::abs(j.q) > 0.0) {
      u = std::log(std::abs(j.p)) - std::log(std::abs(j.q));
      dlog = j.log_derivative();
      return std::isfinite(u) && std::isfinite(std::abs(dlog));
    }
  }
  return false;
}

}  // namespace punctlab
