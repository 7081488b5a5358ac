#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "henonai/continuation.hpp"
#include "henonai/errors.hpp"
#include "henonai/params.hpp"

namespace henonai {

/// Floquet data of a continued periodic orbit.  For a periodic linearized
/// cocycle, absence of non-trivial bounded solutions is equivalent to the
/// monodromy having no eigenvalue on the unit circle; this is checked on
/// the periodic skeleton only.
struct MonodromyReport {
  Mat2 matrix{};                     // may overflow to inf for long orbits
  std::complex<double> eigenvalues[2];
  double moduli[2] = {0, 0};
  double log_moduli[2] = {0, 0};     // overflow-safe form
  double det_check = 0;              // should equal b^n
  bool quasi_hyperbolic = false;
  double margin = 0;                 // min distance of the moduli from 1
};

inline MonodromyReport monodromy(const Params& p, const ContinuationResult& res,
                                 double unit_circle_tol = 1e-6) {
  if (!res.converged) throw NotConverged("monodromy: result not converged");
  if (!(p.eps() > 0.0)) throw InvalidParameter("monodromy: require eps > 0");
  const int n = static_cast<int>(res.orbit.size());

  // Ordered product of [[-2 x_i/eps, -r/eps], [1, 0]], rescaled by the
  // max-abs entry whenever it grows large; the scale is tracked in logs.
  double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  double log_scale = 0;
  for (int i = 0; i < n; ++i) {
    const double a00 = -2.0 * res.orbit[i] / p.eps();
    const double a01 = -p.r() / p.eps();
    const double n00 = a00 * m00 + a01 * m10;
    const double n01 = a00 * m01 + a01 * m11;
    const double n10 = m00;
    const double n11 = m01;
    m00 = n00; m01 = n01; m10 = n10; m11 = n11;
    const double mx = std::max({std::abs(m00), std::abs(m01), std::abs(m10),
                                std::abs(m11)});
    if (mx > 1e100) {
      m00 /= mx; m01 /= mx; m10 /= mx; m11 /= mx;
      log_scale += std::log(mx);
    }
  }

  MonodromyReport rep;
  const double s = std::exp(log_scale);
  rep.matrix = {m00 * s, m01 * s, m10 * s, m11 * s};

  // Eigenvalues of the scaled 2x2 by the closed form.  The determinant is
  // taken from multiplicativity (each step matrix has det exactly b = r/eps):
  // forming it from the product entries cancels catastrophically once the
  // dominant modulus grows past ~1/sqrt(machine eps) of det.
  const double tr = m00 + m11;
  double det = 0.0;
  if (p.b() != 0.0) {
    const double log_det = n * std::log(std::abs(p.b())) - 2.0 * log_scale;
    const double sign = (p.b() < 0.0 && n % 2 != 0) ? -1.0 : 1.0;
    det = sign * std::exp(log_det);
  }
  const double disc = tr * tr - 4.0 * det;
  std::complex<double> l0, l1;
  if (disc >= 0) {
    const double sq = std::sqrt(disc);
    // Stable form: the larger root first, the other from the product.
    const double big = 0.5 * (tr + (tr >= 0 ? sq : -sq));
    l0 = big;
    l1 = big != 0.0 ? det / big : 0.5 * (tr - (tr >= 0 ? sq : -sq));
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    l0 = {0.5 * tr, im};
    l1 = {0.5 * tr, -im};
  }
  rep.eigenvalues[0] = l0 * s;
  rep.eigenvalues[1] = l1 * s;
  for (int k = 0; k < 2; ++k) {
    const std::complex<double>& l = k == 0 ? l0 : l1;
    rep.log_moduli[k] = std::log(std::abs(l)) + log_scale;
    rep.moduli[k] = std::exp(rep.log_moduli[k]);
  }
  // The small eigenvalue of the scaled product can underflow to zero; its
  // log-modulus is then recovered from |l0 l1| = |b|^n.
  if (!std::isfinite(rep.log_moduli[1]) && p.b() != 0.0 &&
      std::isfinite(rep.log_moduli[0])) {
    rep.log_moduli[1] = n * std::log(std::abs(p.b())) - rep.log_moduli[0];
    rep.moduli[1] = std::exp(rep.log_moduli[1]);
  }
  rep.det_check = det * s * s;
  rep.margin = std::min(std::abs(rep.moduli[0] - 1.0), std::abs(rep.moduli[1] - 1.0));
  rep.quasi_hyperbolic = rep.margin > unit_circle_tol;
  return rep;
}

/// Smallest singular value of DF at the orbit; positive certifies local
/// uniqueness.
inline double df_margin(const Params& p, const ContinuationResult& res) {
  if (!res.converged) throw NotConverged("df_margin: result not converged");
  const Eigen::MatrixXd J = assemble_jacobian(p, res.orbit);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  return svd.singularValues().minCoeff();
}

struct SeparationReport {
  double min_pairwise = std::numeric_limits<double>::infinity();
  int count = 0;
};

/// Smallest positional sup-distance over distinct pairs of orbits.  Orbits
/// continued from different words (including rotations of one word) are
/// distinct sequences, so the plain positional distance is the right gauge
/// of uniform discreteness; a near-zero value flags a continuation failure.
inline SeparationReport separation(const std::vector<ContinuationResult>& results) {
  if (results.empty()) throw EmptyInput("separation: no orbits");
  const int n = static_cast<int>(results.front().orbit.size());
  for (const auto& r : results) {
    if (!r.converged) throw NotConverged("separation: unconverged orbit");
    if (static_cast<int>(r.orbit.size()) != n)
      throw InvalidParameter("separation: period mismatch");
  }
  SeparationReport rep;
  rep.count = static_cast<int>(results.size());
  for (std::size_t i = 0; i < results.size(); ++i)
    for (std::size_t j = i + 1; j < results.size(); ++j) {
      double d = 0;
      for (int k = 0; k < n; ++k)
        d = std::max(d, std::abs(results[i].orbit[k] - results[j].orbit[k]));
      rep.min_pairwise = std::min(rep.min_pairwise, d);
    }
  return rep;
}

/// Exchanging eps and r reverses time: (x_i) solves the recurrence at
/// (eps, r) iff (x_{-i}) solves it at (r, eps).  Continues the reversed
/// anchor at swapped parameters and compares against the reversed orbit.
inline bool time_reversal_check(const Params& p, const ContinuationResult& res,
                                double tol = 1e-8,
                                const ContinuationOptions& opts = {}) {
  if (!res.converged) throw NotConverged("time_reversal_check: not converged");
  if (!(p.r() > 0.0))
    throw InvalidParameter("time_reversal_check: require r > 0");
  const int n = static_cast<int>(res.orbit.size());

  AnchorSequence rev;
  rev.r_hat = res.anchor.r_hat;
  rev.values.resize(n);
  for (int i = 0; i < n; ++i) rev.values[i] = res.anchor.values[(n - i) % n];

  const ContinuationResult other = newton_continue(p.r(), p.eps(), rev, opts);
  double d = 0;
  for (int i = 0; i < n; ++i)
    d = std::max(d, std::abs(other.orbit[i] - res.orbit[(n - i) % n]));
  return d <= tol;
}

}  // namespace henonai
