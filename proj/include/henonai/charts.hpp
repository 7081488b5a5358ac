#pragma once

#include <array>
#include <cmath>

#include "henonai/errors.hpp"

namespace henonai {

/// Parameter charts for the (a,b) half plane.
enum class Chart { AB, EpsR, MobiusDisc, Sphere, SemiDisc };

struct ChartPoint {
  std::array<double, 3> v{0, 0, 0};
  int dim = 2;

  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

inline const char* chart_name(Chart c) {
  switch (c) {
    case Chart::AB: return "ab";
    case Chart::EpsR: return "epsr";
    case Chart::MobiusDisc: return "mobius";
    case Chart::Sphere: return "sphere";
    case Chart::SemiDisc: return "semidisc";
  }
  return "?";
}

inline ChartPoint chart_forward(Chart c, double a, double b) {
  switch (c) {
    case Chart::AB:
      if (a < 0.0) throw DomainError("chart_forward: AB requires a >= 0");
      return {{a, b, 0}, 2};
    case Chart::EpsR: {
      if (!(a > 0.0)) throw DomainError("chart_forward: EpsR requires a > 0");
      const double sq = std::sqrt(a);
      return {{1.0 / sq, b / sq, 0}, 2};
    }
    case Chart::MobiusDisc: {
      // (a + ib - 1) / (a + ib + 1)
      if (a < 0.0) throw DomainError("chart_forward: MobiusDisc requires a >= 0");
      const double den = (a + 1.0) * (a + 1.0) + b * b;
      return {{(a * a + b * b - 1.0) / den, 2.0 * b / den, 0}, 2};
    }
    case Chart::Sphere: {
      if (a < 0.0) throw DomainError("chart_forward: Sphere requires a >= 0");
      const double t = a * a + b * b + 4.0;
      return {{4.0 * a / t, 4.0 * b / t, (a * a + b * b - 4.0) / t}, 3};
    }
    case Chart::SemiDisc: {
      if (!(a > 0.0)) throw DomainError("chart_forward: SemiDisc requires a > 0");
      const double rho = (2.0 / M_PI) * std::atan(std::sqrt(a + b * b));
      const double theta = std::atan(b / std::sqrt(a));
      return {{rho, theta, 0}, 2};
    }
  }
  throw DomainError("chart_forward: unknown chart");
}

struct AbPoint {
  double a = 0;
  double b = 0;
};

inline AbPoint chart_inverse(Chart c, const ChartPoint& pt) {
  switch (c) {
    case Chart::AB:
      if (pt[0] < 0.0) throw DomainError("chart_inverse: AB requires a >= 0");
      return {pt[0], pt[1]};
    case Chart::EpsR: {
      const double eps = pt[0], r = pt[1];
      if (!(eps > 0.0)) throw DomainError("chart_inverse: EpsR requires eps > 0");
      return {1.0 / (eps * eps), r / eps};
    }
    case Chart::MobiusDisc: {
      const double al = pt[0], be = pt[1];
      if (al * al + be * be >= 1.0)
        throw DomainError("chart_inverse: MobiusDisc requires |z| < 1");
      // w = (1 + z) / (1 - z)
      const double den = (1.0 - al) * (1.0 - al) + be * be;
      return {(1.0 - al * al - be * be) / den, 2.0 * be / den};
    }
    case Chart::Sphere: {
      const double x = pt[0], y = pt[1], z = pt[2];
      const double norm2 = x * x + y * y + z * z;
      if (std::abs(norm2 - 1.0) > 1e-9)
        throw DomainError("chart_inverse: Sphere point must have unit norm");
      if (!(z < 1.0)) throw DomainError("chart_inverse: north pole is infinity");
      if (x < 0.0) throw DomainError("chart_inverse: Sphere requires a >= 0");
      return {2.0 * x / (1.0 - z), 2.0 * y / (1.0 - z)};
    }
    case Chart::SemiDisc: {
      const double rho = pt[0], theta = pt[1];
      if (!(rho > 0.0) || rho >= 1.0)
        throw DomainError("chart_inverse: SemiDisc requires 0 < rho < 1");
      if (!(std::abs(theta) < M_PI / 2.0))
        throw DomainError("chart_inverse: SemiDisc requires |theta| < pi/2");
      const double s = std::tan(rho * M_PI / 2.0);
      const double a = s * s * std::cos(theta) * std::cos(theta);
      if (!(a > 0.0)) throw DomainError("chart_inverse: SemiDisc requires a > 0");
      return {a, s * std::sin(theta)};
    }
  }
  throw DomainError("chart_inverse: unknown chart");
}

}  // namespace henonai
