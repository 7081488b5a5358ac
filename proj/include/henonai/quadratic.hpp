#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "henonai/errors.hpp"
#include "henonai/params.hpp"

namespace henonai {

// Q_a(x) = sqrt(a)(1 - x^2)
inline double q_step(double a, double x) { return std::sqrt(a) * (1.0 - x * x); }
inline double q_deriv(double a, double x) { return -2.0 * std::sqrt(a) * x; }

/// Interval radius containing every bounded orbit of Q_a.  Coincides with
/// the Devaney-Nitecki bound at r = 0, and equals |x^-|, the modulus of the
/// negative (boundary) fixed point.
inline double q_bound(double a) { return dn_bound_eps_r(1.0 / std::sqrt(a), 0.0); }

enum class QuadKind { AttractingCycle, Escape, Undecided };

struct QuadClass {
  QuadKind kind = QuadKind::Undecided;
  int iterations = 0;            // iterations consumed
  int period = 0;                // AttractingCycle only
  std::vector<double> cycle;     // AttractingCycle only, in dynamical order
  double multiplier = 0;         // product of Q' along the cycle
};

struct ClassifyOptions {
  int max_iter = 200000;
  double r_escape = 0;           // 0 -> q_bound(a) + 1
  int warmup = 10000;
  double cycle_tol = 1e-9;
  double margin = 1e-4;          // attracting requires |mult| < 1 - margin
  int max_period = 1 << 14;
};

namespace detail {

// Newton polish of Q_a^p(x) = x; keeps the polished value only if it
// improves the defect.
inline double polish_cycle_point(double a, int p, double x0) {
  double x = x0;
  for (int it = 0; it < 30; ++it) {
    double y = x, d = 1.0;
    for (int k = 0; k < p; ++k) {
      d *= q_deriv(a, y);
      y = q_step(a, y);
    }
    const double g = y - x, gp = d - 1.0;
    if (gp == 0.0 || !std::isfinite(g)) break;
    const double step = g / gp;
    x -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  double y0 = x0, y1 = x;
  for (int k = 0; k < p; ++k) {
    y0 = q_step(a, y0);
    y1 = q_step(a, y1);
  }
  return std::abs(y1 - x) < std::abs(y0 - x0) ? x : x0;
}

}  // namespace detail

/// Hyperbolicity classification of Q_a by iterating the critical point 0:
/// Escape once |x| exceeds r_escape, AttractingCycle when Brent detection
/// finds a cycle with |multiplier| < 1 - margin, Undecided otherwise.
inline QuadClass classify(double a, const ClassifyOptions& opts = {}) {
  if (!(a > 0.0)) throw InvalidParameter("classify: require a > 0");
  if (opts.max_iter < 1) throw InvalidParameter("classify: max_iter >= 1");
  const double r_escape = opts.r_escape > 0 ? opts.r_escape : q_bound(a) + 1.0;

  QuadClass out;
  double x = 0.0;
  int used = 0;
  const int warmup = std::min(opts.warmup, opts.max_iter);
  for (; used < warmup; ++used) {
    x = q_step(a, x);
    if (!(std::abs(x) <= r_escape)) {
      out.kind = QuadKind::Escape;
      out.iterations = used + 1;
      return out;
    }
  }

  // Brent cycle detection on the tail, with tolerance.
  double tortoise = x;
  double hare = q_step(a, x);
  int power = 1, lam = 1;
  while (std::abs(hare - tortoise) > opts.cycle_tol) {
    if (!(std::abs(hare) <= r_escape)) {
      out.kind = QuadKind::Escape;
      out.iterations = used + lam;
      return out;
    }
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
      if (power > opts.max_period) {
        out.kind = QuadKind::Undecided;
        out.iterations = opts.max_iter;
        return out;
      }
    }
    hare = q_step(a, hare);
    ++lam;
    if (used + lam >= opts.max_iter) {
      out.kind = QuadKind::Undecided;
      out.iterations = opts.max_iter;
      return out;
    }
  }

  // Reduce to the minimal period.
  int period = lam;
  for (int d = 1; d <= lam / 2; ++d) {
    if (lam % d != 0) continue;
    double y = hare;
    for (int k = 0; k < d; ++k) y = q_step(a, y);
    if (std::abs(y - hare) <= opts.cycle_tol) {
      period = d;
      break;
    }
  }

  double x0 = detail::polish_cycle_point(a, period, hare);
  out.cycle.resize(period);
  out.multiplier = 1.0;
  double y = x0;
  for (int k = 0; k < period; ++k) {
    out.cycle[k] = y;
    out.multiplier *= q_deriv(a, y);
    y = q_step(a, y);
  }
  out.iterations = used + lam;
  if (std::abs(out.multiplier) < 1.0 - opts.margin) {
    out.kind = QuadKind::AttractingCycle;
    out.period = period;
  } else {
    out.kind = QuadKind::Undecided;
  }
  return out;
}

struct QPeriodicPoint {
  double x = 0;
  double multiplier = 0;  // (Q_a^n)'(x)
  bool in_lambda = true;  // false exactly on the attracting cycle
};

struct QPeriodicSet {
  double a = 0;
  int n = 0;
  std::vector<QPeriodicPoint> points;  // sorted by x
};

struct QPeriodicOptions {
  int grid_per_root = 64;   // initial grid is 2^n * grid_per_root cells
  int bisect_depth = 60;
  double dedupe_tol = 1e-8;
  double resid_tol = 1e-10;
  double cycle_match_tol = 1e-6;
};

/// All real solutions of Q_a^n(x) = x inside the bounded-orbit interval,
/// by sign-change bisection on an initial grid followed by Newton polish.
/// The bracket is widened slightly: the negative fixed point sits exactly
/// on the interval boundary.
inline QPeriodicSet q_periodic_points(double a, int n,
                                      const QPeriodicOptions& opts = {}) {
  if (!(a > 0.0) || n < 1 || n > 16)
    throw InvalidParameter("q_periodic_points: require a > 0, 1 <= n <= 16");
  const QuadClass cls = classify(a);
  if (cls.kind == QuadKind::Undecided)
    throw NotHyperbolic("q_periodic_points: classify(a) is Undecided");

  const double R = q_bound(a);
  const double lo = -R - 1e-7, hi = R + 1e-7;
  const std::int64_t cells =
      (std::int64_t{1} << n) * static_cast<std::int64_t>(opts.grid_per_root);

  auto g = [a, n](double x) {
    double y = x;
    for (int k = 0; k < n; ++k) y = q_step(a, y);
    return y - x;
  };
  auto gprime = [a, n](double x) {
    double y = x, d = 1.0;
    for (int k = 0; k < n; ++k) {
      d *= q_deriv(a, y);
      y = q_step(a, y);
    }
    return d - 1.0;
  };

  // Adaptive grid: Q_a^n is strictly monotone between consecutive critical
  // points of Q_a^n (the preimages Q^{-k}(0), k < n), so placing cell
  // boundaries on the laps tracks the root clustering near +-dn_bound that
  // a uniform grid of the same budget misses.
  std::vector<double> knots = {lo, hi};
  {
    std::vector<double> level = {0.0};
    for (int k = 0; k < n; ++k) {
      if (k > 0) {
        std::vector<double> next;
        for (double y : level) {
          const double t = 1.0 - y / std::sqrt(a);
          if (t < 0.0) continue;
          const double s = std::sqrt(t);
          next.push_back(-s);
          next.push_back(s);
        }
        level = std::move(next);
      }
      for (double c : level)
        if (c > lo && c < hi) knots.push_back(c);
    }
    std::sort(knots.begin(), knots.end());
  }
  const int per_lap = std::max<int>(
      2, static_cast<int>(cells / static_cast<std::int64_t>(knots.size())));

  std::vector<double> grid;
  grid.reserve(knots.size() * static_cast<std::size_t>(per_lap));
  for (std::size_t k = 0; k + 1 < knots.size(); ++k)
    for (int i = 0; i < per_lap; ++i)
      grid.push_back(knots[k] + (knots[k + 1] - knots[k]) * i / per_lap);
  grid.push_back(hi);

  std::vector<double> roots;
  double xprev = grid.front(), vprev = g(xprev);
  for (std::size_t gi = 1; gi < grid.size(); ++gi) {
    const double xcur = grid[gi];
    const double vcur = g(xcur);
    if (vprev == 0.0) roots.push_back(xprev);
    if (vprev * vcur < 0.0) {
      double bl = xprev, bh = xcur, vl = vprev;
      for (int d = 0; d < opts.bisect_depth; ++d) {
        const double m = 0.5 * (bl + bh), vm = g(m);
        if (vl * vm <= 0.0) {
          bh = m;
        } else {
          bl = m;
          vl = vm;
        }
      }
      double x = 0.5 * (bl + bh);
      // Newton polish; fall back to the bisection midpoint on failure.
      double best = x, bestv = std::abs(g(x));
      for (int it = 0; it < 20; ++it) {
        const double gp = gprime(x);
        if (gp == 0.0) break;
        x -= g(x) / gp;
        if (!std::isfinite(x)) break;
        const double v = std::abs(g(x));
        if (v < bestv) {
          bestv = v;
          best = x;
        }
      }
      roots.push_back(best);
    }
    xprev = xcur;
    vprev = vcur;
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double x : roots)
    if (unique.empty() || x - unique.back() > opts.dedupe_tol) unique.push_back(x);
  if (static_cast<std::int64_t>(unique.size()) > (std::int64_t{1} << n))
    throw BudgetExceeded("q_periodic_points: more brackets than possible roots");

  QPeriodicSet set;
  set.a = a;
  set.n = n;
  for (double x : unique) {
    // The defect of a polished simple root scales with |(Q^n)'|, which
    // grows like lambda^n; accept relative to that scale.
    if (std::abs(g(x)) >
        opts.resid_tol * std::max(1.0, std::abs(gprime(x)) + 1.0))
      continue;
    QPeriodicPoint pt;
    pt.x = x;
    pt.multiplier = gprime(x) + 1.0;
    if (cls.kind == QuadKind::AttractingCycle && n % cls.period == 0) {
      for (double c : cls.cycle)
        if (std::abs(x - c) < opts.cycle_match_tol) pt.in_lambda = false;
    }
    set.points.push_back(pt);
  }
  return set;
}

struct ExpansionEstimate {
  double C = 1.0;
  double lambda = 0;  // per-step expansion rate
};

/// lambda = min over in_lambda period-n points of |multiplier|^(1/n).
inline ExpansionEstimate expansion_estimate(double a, int n,
                                            const QPeriodicOptions& opts = {}) {
  const QPeriodicSet set = q_periodic_points(a, n, opts);
  ExpansionEstimate est;
  bool any = false;
  double best = 0;
  for (const auto& pt : set.points) {
    if (!pt.in_lambda) continue;
    const double lam = std::pow(std::abs(pt.multiplier), 1.0 / n);
    best = any ? std::min(best, lam) : lam;
    any = true;
  }
  if (!any)
    throw NotHyperbolic("expansion_estimate: no periodic points off the attracting cycle");
  est.lambda = best;
  return est;
}

}  // namespace henonai
