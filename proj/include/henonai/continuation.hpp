#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "henonai/errors.hpp"
#include "henonai/params.hpp"
#include "henonai/quadratic.hpp"

namespace henonai {

/// Cyclic word over {-1,+1} naming a full-shift anti-integrable anchor.
class SymbolWord {
 public:
  explicit SymbolWord(std::vector<int> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw InvalidParameter("SymbolWord: empty word");
    for (int s : symbols_)
      if (s != -1 && s != 1)
        throw InvalidParameter("SymbolWord: symbols must be -1 or +1");
  }

  // "+-" syntax: '+' -> +1, '-' -> -1.
  static SymbolWord parse(const std::string& text) {
    std::vector<int> sym;
    for (char c : text) {
      if (c == '+') sym.push_back(1);
      else if (c == '-') sym.push_back(-1);
      else throw InvalidParameter("SymbolWord: expected only '+' and '-'");
    }
    return SymbolWord(std::move(sym));
  }

  static SymbolWord from_bits(std::uint64_t bits, int n) {
    std::vector<int> sym(n);
    for (int i = 0; i < n; ++i) sym[i] = (bits >> i) & 1 ? 1 : -1;
    return SymbolWord(std::move(sym));
  }

  SymbolWord rotated(int k) const {
    const int n = size();
    std::vector<int> sym(n);
    for (int i = 0; i < n; ++i) sym[i] = symbols_[((i + k) % n + n) % n];
    return SymbolWord(std::move(sym));
  }

  std::string str() const {
    std::string s;
    for (int v : symbols_) s += v > 0 ? '+' : '-';
    return s;
  }

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::vector<int>& symbols() const { return symbols_; }

 private:
  std::vector<int> symbols_;
};

/// Periodic solution of F(x; 0) = 0: either a +-1 word (r_hat = 0) or a
/// reversed periodic orbit of Q_{1/r_hat^2} on its hyperbolic set.
struct AnchorSequence {
  std::vector<double> values;
  double r_hat = 0;

  int size() const { return static_cast<int>(values.size()); }
};

inline AnchorSequence build_anchor_fullshift(const SymbolWord& w) {
  AnchorSequence anchor;
  anchor.values.assign(w.symbols().begin(), w.symbols().end());
  anchor.r_hat = 0.0;
  return anchor;
}

/// Anchor from a period-n point of Q_{1/r_hat^2}: the backward Q-orbit
/// x_{i-1} = Q(x_i) around the cycle, starting at q_point.
inline AnchorSequence build_anchor_markov(double r_hat, double q_point, int n) {
  if (!(r_hat > 0.0))
    throw InvalidParameter("build_anchor_markov: require r_hat > 0");
  const double a = 1.0 / (r_hat * r_hat);

  // Re-polish the starting point, then check periodicity and repulsion.
  const double q = detail::polish_cycle_point(a, n, q_point);
  double y = q, deriv = 1.0;
  for (int k = 0; k < n; ++k) {
    deriv *= q_deriv(a, y);
    y = q_step(a, y);
  }
  if (std::abs(y - q) > 1e-10 * std::max(1.0, std::abs(q)))
    throw NotOnLambda("build_anchor_markov: q_point is not a period-n point of Q");
  if (std::abs(deriv) <= 1.0)
    throw NotOnLambda("build_anchor_markov: q_point is not repelling");
  const QuadClass cls = classify(a);
  if (cls.kind == QuadKind::AttractingCycle)
    for (double c : cls.cycle)
      if (std::abs(q - c) < 1e-6)
        throw NotOnLambda("build_anchor_markov: q_point lies on the attracting cycle");

  AnchorSequence anchor;
  anchor.r_hat = r_hat;
  anchor.values.assign(n, 0.0);
  anchor.values[0] = q;
  for (int i = 0; i < n - 1; ++i) {
    const int cur = (n - i) % n;  // 0, n-1, n-2, ...
    anchor.values[(cur - 1 + n) % n] = q_step(a, anchor.values[cur]);
  }
  for (int i = 0; i < n; ++i) {
    const double resid =
        1.0 - anchor.values[i] * anchor.values[i] - r_hat * anchor.values[(i - 1 + n) % n];
    if (std::abs(resid) > 1e-10)
      throw NotOnLambda("build_anchor_markov: F(anchor; 0) != 0");
  }
  return anchor;
}

/// F_i(x) = eps x_{i+1} - (1 - x_i^2) + r x_{i-1}, indices mod n.
inline std::vector<double> assemble_residual(double eps, double r,
                                             const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i)
    f[i] = eps * x[(i + 1) % n] - (1.0 - x[i] * x[i]) + r * x[(i - 1 + n) % n];
  return f;
}

inline std::vector<double> assemble_residual(const Params& p,
                                             const std::vector<double>& x) {
  return assemble_residual(p.eps(), p.r(), x);
}

/// Cyclic tridiagonal DF: diagonal 2 x_i, superdiagonal eps, subdiagonal r,
/// with wrap-around corners.  Entries accumulate, so n = 1 and n = 2
/// coalesce the wrap-around contributions additively.
inline Eigen::MatrixXd assemble_jacobian(double eps, double r,
                                         const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) += 2.0 * x[i];
    J(i, (i + 1) % n) += eps;
    J(i, (i - 1 + n) % n) += r;
  }
  return J;
}

inline Eigen::MatrixXd assemble_jacobian(const Params& p,
                                         const std::vector<double>& x) {
  return assemble_jacobian(p.eps(), p.r(), x);
}

enum class PathRule { ConstantB, ConstantRhat, TableLookup };

struct ContinuationOptions {
  double residual_tol = 1e-12;
  int max_iter = 50;
  int homotopy_steps = 1;
  PathRule path = PathRule::ConstantB;
  // TableLookup: piecewise-linear r(eps), sorted by eps.
  std::vector<std::pair<double, double>> r_table;
  double min_step = std::ldexp(1.0, -20);  // Armijo floor
  bool compute_min_singular = true;
};

struct ContinuationResult {
  std::vector<double> orbit;
  double eps = 0, r = 0;
  AnchorSequence anchor;
  double residual_norm = 0;
  int iterations = 0;
  double min_singular = 0;
  double anchor_distance = 0;
  bool converged = false;
};

namespace detail {

inline double sup_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double two_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double table_lookup_r(const std::vector<std::pair<double, double>>& tab,
                             double eps) {
  if (tab.empty()) throw InvalidParameter("PathRule::TableLookup: empty table");
  if (eps <= tab.front().first) return tab.front().second;
  if (eps >= tab.back().first) return tab.back().second;
  for (std::size_t i = 1; i < tab.size(); ++i) {
    if (eps <= tab[i].first) {
      const double t = (eps - tab[i - 1].first) / (tab[i].first - tab[i - 1].first);
      return tab[i - 1].second + t * (tab[i].second - tab[i - 1].second);
    }
  }
  return tab.back().second;
}

inline double path_r(const ContinuationOptions& opts, double eps,
                     double eps_target, double r_target, double r_hat) {
  switch (opts.path) {
    case PathRule::ConstantB:
      // r = eps * b with b fixed at its target value.
      return eps_target > 0 ? eps * (r_target / eps_target) : r_target;
    case PathRule::ConstantRhat:
      (void)r_hat;
      return r_target;
    case PathRule::TableLookup:
      return table_lookup_r(opts.r_table, eps);
  }
  return r_target;
}

inline void finish_result(ContinuationResult& res, const ContinuationOptions& opts) {
  const auto f = assemble_residual(res.eps, res.r, res.orbit);
  res.residual_norm = sup_norm(f);
  res.anchor_distance = 0;
  const int n = static_cast<int>(res.orbit.size());
  for (int i = 0; i < n; ++i)
    res.anchor_distance =
        std::max(res.anchor_distance, std::abs(res.orbit[i] - res.anchor.values[i]));
  if (opts.compute_min_singular) {
    const Eigen::MatrixXd J = assemble_jacobian(res.eps, res.r, res.orbit);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    res.min_singular = svd.singularValues().minCoeff();
  }
  res.converged = true;
}

// One damped-Newton solve at fixed (eps, r), in place.  Returns the
// iteration count.
inline int newton_solve(double eps, double r, std::vector<double>& x,
                        const ContinuationOptions& opts) {
  const int n = static_cast<int>(x.size());
  std::vector<double> f = assemble_residual(eps, r, x);
  double fnorm = two_norm(f);
  for (int it = 0; it < opts.max_iter; ++it) {
    if (sup_norm(f) <= opts.residual_tol) return it;
    Eigen::MatrixXd J = assemble_jacobian(eps, r, x);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    const Eigen::VectorXd& u = lu.matrixLU().diagonal();
    double scale = J.cwiseAbs().maxCoeff();
    if (u.cwiseAbs().minCoeff() <= 1e-14 * std::max(1.0, scale))
      throw SingularJacobian("newton_continue: LU pivot below threshold");
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = -f[i];
    const Eigen::VectorXd d = lu.solve(rhs);

    // Armijo backtracking, halving steps.
    double t = 1.0;
    std::vector<double> xt(n);
    while (true) {
      for (int i = 0; i < n; ++i) xt[i] = x[i] + t * d(i);
      const auto ft = assemble_residual(eps, r, xt);
      const double ftnorm = two_norm(ft);
      if (ftnorm <= (1.0 - 1e-4 * t) * fnorm) {
        x = xt;
        f = ft;
        fnorm = ftnorm;
        break;
      }
      t *= 0.5;
      if (t < opts.min_step)
        throw NoConvergence("newton_continue: line search stagnated");
    }
  }
  if (sup_norm(f) <= opts.residual_tol) return opts.max_iter;
  throw NoConvergence("newton_continue: max_iter reached");
}

}  // namespace detail

/// Damped Newton continuation of an anchor to a genuine orbit at (eps, r).
/// With homotopy_steps > 1, eps is stepped geometrically from a small seed
/// to its target and r follows the configured PathRule.
inline ContinuationResult newton_continue(double eps, double r,
                                          const AnchorSequence& anchor,
                                          const ContinuationOptions& opts = {}) {
  ContinuationResult res;
  res.anchor = anchor;
  res.eps = eps;
  res.r = r;
  res.orbit = anchor.values;

  int iters = 0;
  if (opts.homotopy_steps <= 1 || eps <= 0.0) {
    iters = detail::newton_solve(eps, r, res.orbit, opts);
  } else {
    for (int k = 0; k < opts.homotopy_steps; ++k) {
      const double eps_k = eps * std::ldexp(1.0, k + 1 - opts.homotopy_steps);
      const double r_k = k + 1 == opts.homotopy_steps
                             ? r
                             : detail::path_r(opts, eps_k, eps, r, anchor.r_hat);
      iters += detail::newton_solve(eps_k, r_k, res.orbit, opts);
    }
  }
  res.iterations = iters;
  detail::finish_result(res, opts);
  return res;
}

inline ContinuationResult newton_continue(const Params& p,
                                          const AnchorSequence& anchor,
                                          const ContinuationOptions& opts = {}) {
  return newton_continue(p.eps(), p.r(), anchor, opts);
}

/// Fixed-point iteration x <- x - DF(anchor; 0)^{-1} F(x; eps) with the
/// preconditioner factorized once at the anchor.
inline ContinuationResult contraction_continue(double eps, double r,
                                               const AnchorSequence& anchor,
                                               const ContinuationOptions& opts = {}) {
  const int n = anchor.size();
  ContinuationResult res;
  res.anchor = anchor;
  res.eps = eps;
  res.r = r;
  res.orbit = anchor.values;

  Eigen::MatrixXd J0 = assemble_jacobian(0.0, anchor.r_hat, anchor.values);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(J0);
  const double scale = J0.cwiseAbs().maxCoeff();
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= 1e-14 * std::max(1.0, scale))
    throw SingularAnchorJacobian("contraction_continue: DF(anchor; 0) is singular");

  const int max_iter = std::max(opts.max_iter, 200);
  std::vector<double> f = assemble_residual(eps, r, res.orbit);
  double best = detail::sup_norm(f);
  int grows = 0;
  for (int it = 0; it < max_iter; ++it) {
    const double fnorm = detail::sup_norm(f);
    if (fnorm <= opts.residual_tol) {
      res.iterations = it;
      detail::finish_result(res, opts);
      return res;
    }
    if (fnorm > best) {
      if (++grows >= 3 && fnorm > 10.0 * best)
        throw NoConvergence("contraction_continue: iteration diverges");
    } else {
      best = fnorm;
      grows = 0;
    }
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = f[i];
    const Eigen::VectorXd d = lu.solve(rhs);
    for (int i = 0; i < n; ++i) res.orbit[i] -= d(i);
    f = assemble_residual(eps, r, res.orbit);
  }
  throw NoConvergence("contraction_continue: max_iter reached");
}

inline ContinuationResult contraction_continue(const Params& p,
                                               const AnchorSequence& anchor,
                                               const ContinuationOptions& opts = {}) {
  return contraction_continue(p.eps(), p.r(), anchor, opts);
}

/// Neumann-series solve of r_hat xi_{i-1} + 2 x_i xi_i = eta_i on a periodic
/// anchor.  r_hat = 0 reduces to the diagonal solve eta_i / (2 x_i).
inline std::vector<double> neumann_solve(double r_hat, const AnchorSequence& anchor,
                                         const std::vector<double>& eta,
                                         double tol = 1e-14) {
  const int n = anchor.size();
  if (static_cast<int>(eta.size()) != n)
    throw InvalidParameter("neumann_solve: eta size mismatch");
  std::vector<double> xi(n, 0.0);
  if (r_hat == 0.0) {
    for (int i = 0; i < n; ++i) xi[i] = eta[i] / (2.0 * anchor.values[i]);
    return xi;
  }
  const double eta_norm = std::max(detail::sup_norm(eta), 1e-300);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    double coeff = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    int grows = 0;
    for (int N = 0;; ++N) {
      coeff /= 2.0 * anchor.values[((i - N) % n + n) % n];
      const double term = coeff * eta[((i - N) % n + n) % n];
      sum += term;
      const double mag = std::abs(coeff) * eta_norm;
      if (mag < tol) break;
      if (mag > prev) {
        if (++grows >= 3) throw Divergence("neumann_solve: series diverges");
      } else {
        grows = 0;
      }
      prev = mag;
      coeff *= -r_hat;
      if (N > 100000) throw Divergence("neumann_solve: series too slow");
    }
    xi[i] = sum;
  }
  return xi;
}

enum class Projection { Backward, Forward };

/// Backward: (x_i, x_{i-1}) are Henon phase-space points and henon_step maps
/// each to the next.  Forward: (x_i, x_{i+1}).
inline std::vector<PlanarPoint> orbit_to_planar(const ContinuationResult& res,
                                                Projection projection) {
  if (!res.converged) throw NotConverged("orbit_to_planar: result not converged");
  const int n = static_cast<int>(res.orbit.size());
  std::vector<PlanarPoint> pts(n);
  for (int i = 0; i < n; ++i) {
    const int j = projection == Projection::Backward ? (i - 1 + n) % n : (i + 1) % n;
    pts[i] = {res.orbit[i], res.orbit[j]};
  }
  return pts;
}

}  // namespace henonai
