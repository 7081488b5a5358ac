#pragma once

#include <cmath>
#include <limits>

#include "henonai/errors.hpp"

namespace henonai {

/// Henon parameters (a,b) together with the derived chart coordinates
/// eps = 1/sqrt(a), r = b/sqrt(a).  (a,b) is primary; constructors accept
/// either pair and keep both charts consistent to round-off.
class Params {
 public:
  static Params from_ab(double a, double b) {
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b))
      throw InvalidParameter("Params: require finite a > 0 and finite b");
    Params p;
    p.a_ = a;
    p.b_ = b;
    p.eps_ = 1.0 / std::sqrt(a);
    p.r_ = b / std::sqrt(a);
    return p;
  }

  static Params from_eps_r(double eps, double r) {
    if (!(eps > 0.0) || !std::isfinite(eps) || !std::isfinite(r))
      throw InvalidParameter("Params: require finite eps > 0 and finite r");
    Params p;
    p.eps_ = eps;
    p.r_ = r;
    p.a_ = 1.0 / (eps * eps);
    p.b_ = r / eps;
    return p;
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double eps() const { return eps_; }
  double r() const { return r_; }
  double sqrt_a() const { return 1.0 / eps_; }

 private:
  Params() = default;
  double a_ = 0, b_ = 0, eps_ = 0, r_ = 0;
};

struct PlanarPoint {
  double x = 0;
  double y = 0;
};

/// Analytic parameter-region predicates.  The two flags are independent;
/// neither implies the other.
struct RegionFlags {
  bool sterling_meiss = false;    // a >= (5+2*sqrt(5))(1+|b|)^2/4
  bool improved_horseshoe = false;  // a > 2(1+|b|)^2  (strict)
  double dn_radius = 0;           // sup-norm bound on bounded orbits
};

/// (x,y) -> (sqrt(a)(1-x^2) - b y, x).  Never throws; overflow propagates
/// as infinity and downstream consumers treat non-finite values as escaped.
inline PlanarPoint henon_step(const Params& p, const PlanarPoint& pt) {
  return {p.sqrt_a() * (1.0 - pt.x * pt.x) - p.b() * pt.y, pt.x};
}

inline PlanarPoint henon_inverse_step(const Params& p, const PlanarPoint& pt) {
  if (p.b() == 0.0)
    throw ZeroJacobian("henon_inverse_step: map is not invertible at b = 0");
  const double x = pt.y;
  const double y = (p.sqrt_a() * (1.0 - pt.y * pt.y) - pt.x) / p.b();
  return {x, y};
}

/// Derivative of henon_step: [[-2 sqrt(a) x, -b], [1, 0]]; det = b.
struct Mat2 {
  double m00, m01, m10, m11;
  double det() const { return m00 * m11 - m01 * m10; }
};

inline Mat2 henon_jacobian(const Params& p, const PlanarPoint& pt) {
  return {-2.0 * p.sqrt_a() * pt.x, -p.b(), 1.0, 0.0};
}

/// Devaney-Nitecki bound in normalized coordinates:
/// (eps + |r| + sqrt((eps+|r|)^2 + 4)) / 2.
inline double dn_bound_eps_r(double eps, double r) {
  const double s = eps + std::abs(r);
  return 0.5 * (s + std::sqrt(s * s + 4.0));
}

inline double dn_bound(const Params& p) { return dn_bound_eps_r(p.eps(), p.r()); }

inline RegionFlags region_flags(const Params& p) {
  RegionFlags f;
  const double w = (1.0 + std::abs(p.b())) * (1.0 + std::abs(p.b()));
  f.sterling_meiss = p.a() >= (5.0 + 2.0 * std::sqrt(5.0)) * w / 4.0;
  f.improved_horseshoe = p.a() > 2.0 * w;
  f.dn_radius = dn_bound(p);
  return f;
}

}  // namespace henonai
