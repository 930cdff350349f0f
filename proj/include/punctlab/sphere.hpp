#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace punctlab {

using cplx = std::complex<double>;

/// A point of the Riemann sphere: a finite complex number or infinity.
class SpherePoint {
 public:
  constexpr SpherePoint() = default;
  constexpr SpherePoint(cplx value) : value_(value) {}  // NOLINT(implicit)

  static constexpr SpherePoint infinity() {
    SpherePoint p;
    p.infinite_ = true;
    return p;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }

  /// Finite value; meaningless for the point at infinity.
  constexpr cplx value() const noexcept { return value_; }

  /// Image under w -> 1/w.
  SpherePoint reciprocal() const noexcept {
    if (infinite_) return SpherePoint{cplx{0.0, 0.0}};
    if (value_ == cplx{0.0, 0.0}) return infinity();
    return SpherePoint{1.0 / value_};
  }

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  cplx value_{0.0, 0.0};
  bool infinite_ = false;
};

using Vec3 = std::array<double, 3>;

/// Inverse stereographic projection onto the unit sphere in R^3; the
/// Euclidean distance of two images is the chordal distance.
inline Vec3 to_unit_sphere(const SpherePoint& p) noexcept {
  if (p.is_infinite()) return {0.0, 0.0, 1.0};
  const cplx z = p.value();
  const double m = std::abs(z);
  if (m <= 1.0) {
    const double n = 1.0 + m * m;
    return {2.0 * z.real() / n, 2.0 * z.imag() / n, (m * m - 1.0) / n};
  }
  const cplx t = 1.0 / z;
  const double mt = std::abs(t);
  const double n = 1.0 + mt * mt;
  return {2.0 * t.real() / n, -2.0 * t.imag() / n, (1.0 - mt * mt) / n};
}

/// Chordal distance 2|p-q| / sqrt((1+|p|^2)(1+|q|^2)), diameter 2.
///
/// Evaluated in the chart |w| <= 1 or its reciprocal so that huge moduli
/// neither overflow nor lose the relative accuracy of small separations.
inline double chordal(const SpherePoint& p, const SpherePoint& q) noexcept {
  // Represent each point as either (finite u with |u|<=1) or (1/s with |s|<1).
  const bool p_big = p.is_infinite() || std::abs(p.value()) > 1.0;
  const bool q_big = q.is_infinite() || std::abs(q.value()) > 1.0;
  auto inv = [](const SpherePoint& x) { return x.is_infinite() ? cplx{0.0, 0.0} : 1.0 / x.value(); };
  if (!p_big && !q_big) {
    const cplx a = p.value();
    const cplx b = q.value();
    return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
  }
  if (p_big && q_big) {
    const cplx s = inv(p);
    const cplx t = inv(q);
    return 2.0 * std::abs(s - t) / std::sqrt((1.0 + std::norm(s)) * (1.0 + std::norm(t)));
  }
  const cplx a = p_big ? q.value() : p.value();
  const cplx s = p_big ? inv(p) : inv(q);
  return 2.0 * std::abs(a * s - 1.0) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(s)));
}

}  // namespace punctlab
