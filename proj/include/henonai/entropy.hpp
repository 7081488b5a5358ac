#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "henonai/continuation.hpp"
#include "henonai/errors.hpp"
#include "henonai/params.hpp"
#include "henonai/quadratic.hpp"

namespace henonai {

enum class AnchorFamilyKind { FullShift, QBackbone };

struct AnchorFamily {
  AnchorFamilyKind kind = AnchorFamilyKind::FullShift;
  double r_hat = 0;  // QBackbone only

  static AnchorFamily full_shift() { return {AnchorFamilyKind::FullShift, 0.0}; }
  static AnchorFamily q_backbone(double r_hat) {
    if (!(r_hat > 0.0)) throw InvalidParameter("AnchorFamily: require r_hat > 0");
    return {AnchorFamilyKind::QBackbone, r_hat};
  }
};

struct HenonCount {
  int count = 0;      // pairwise-distinct converged period-n orbits
  int attempted = 0;  // period-n anchors continued
  int failed = 0;     // anchors that did not converge
};

namespace detail {

inline int count_distinct_orbits(std::vector<std::vector<double>>& orbits,
                                 double tol = 1e-6) {
  if (orbits.empty()) return 0;
  std::sort(orbits.begin(), orbits.end());
  int distinct = 1;
  const std::vector<double>* rep = &orbits.front();
  for (std::size_t k = 1; k < orbits.size(); ++k) {
    double d = 0;
    for (std::size_t i = 0; i < orbits[k].size(); ++i)
      d = std::max(d, std::abs(orbits[k][i] - (*rep)[i]));
    if (d > tol) {
      ++distinct;
      rep = &orbits[k];
    }
  }
  return distinct;
}

}  // namespace detail

/// Number of period-n points of the Henon restriction obtained by
/// continuing every period-n anchor of the family.  Non-convergence
/// reduces the count and is reported in `failed`.  Counting is by
/// period-n points, not primitive orbits, so the full shift gives 2^n.
inline HenonCount count_henon_periodic(double eps, double r, int n,
                                       const AnchorFamily& family,
                                       const ContinuationOptions& opts = {}) {
  if (n < 1 || n > 14)
    throw InvalidParameter("count_henon_periodic: require 1 <= n <= 14");
  HenonCount out;
  std::vector<std::vector<double>> orbits;

  if (family.kind == AnchorFamilyKind::FullShift) {
    const std::uint64_t total = std::uint64_t{1} << n;
    out.attempted = static_cast<int>(total);
    if (eps == 0.0) {
      out.count = static_cast<int>(total);  // the AI limit itself
      return out;
    }
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      const auto anchor = build_anchor_fullshift(SymbolWord::from_bits(bits, n));
      try {
        auto res = newton_continue(eps, r, anchor, opts);
        orbits.push_back(std::move(res.orbit));
      } catch (const NoConvergence&) {
        ++out.failed;
      } catch (const SingularJacobian&) {
        ++out.failed;
      }
    }
  } else {
    const double a_q = 1.0 / (family.r_hat * family.r_hat);
    const QPeriodicSet set = q_periodic_points(a_q, n);
    for (const auto& pt : set.points) {
      if (!pt.in_lambda) continue;
      ++out.attempted;
      if (eps == 0.0) {
        ++out.count;
        continue;
      }
      try {
        const auto anchor = build_anchor_markov(family.r_hat, pt.x, n);
        auto res = newton_continue(eps, r, anchor, opts);
        orbits.push_back(std::move(res.orbit));
      } catch (const NoConvergence&) {
        ++out.failed;
      } catch (const SingularJacobian&) {
        ++out.failed;
      } catch (const NotOnLambda&) {
        ++out.failed;
      }
    }
    if (eps == 0.0) return out;
  }

  out.count = detail::count_distinct_orbits(orbits);
  return out;
}

inline HenonCount count_henon_periodic(const Params& p, int n,
                                       const AnchorFamily& family,
                                       const ContinuationOptions& opts = {}) {
  return count_henon_periodic(p.eps(), p.r(), n, family, opts);
}

enum class EstimateMethod { MaxRow, LinearFit };

struct EntropyRow {
  int n = 0;
  int count = 0;
  double h_n = 0;     // ln(count)/n, 0 when count == 0
  int failed = 0;     // side channel: non-converged continuations
};

struct EntropyTable {
  std::vector<EntropyRow> rows;
  double estimate = 0;
  EstimateMethod method = EstimateMethod::MaxRow;
};

namespace detail {

// MaxRow reads the growth rate off the deepest populated row; the shallow
// rows overweight isolated fixed points and understate nothing at depth.
inline double table_estimate(const std::vector<EntropyRow>& rows,
                             EstimateMethod method) {
  if (method == EstimateMethod::MaxRow) {
    double est = 0;
    for (const auto& row : rows)
      if (row.count > 0) est = row.h_n;
    return est;
  }
  // LinearFit: least squares of ln(count) against n.
  double sn = 0, sy = 0, snn = 0, sny = 0;
  int m = 0;
  for (const auto& row : rows) {
    if (row.count <= 0) continue;
    const double y = std::log(static_cast<double>(row.count));
    sn += row.n;
    sy += y;
    snn += static_cast<double>(row.n) * row.n;
    sny += row.n * y;
    ++m;
  }
  if (m < 2) return 0;
  const double denom = m * snn - sn * sn;
  return denom != 0 ? (m * sny - sn * sy) / denom : 0;
}

}  // namespace detail

inline EntropyTable entropy_estimate(const Params& p, int max_n,
                                     const AnchorFamily& family,
                                     EstimateMethod method = EstimateMethod::MaxRow,
                                     const ContinuationOptions& opts = {}) {
  if (max_n < 1 || max_n > 14)
    throw InvalidParameter("entropy_estimate: require 1 <= max_n <= 14");
  EntropyTable table;
  table.method = method;
  for (int n = 1; n <= max_n; ++n) {
    const HenonCount c = count_henon_periodic(p, n, family, opts);
    EntropyRow row;
    row.n = n;
    row.count = c.count;
    row.failed = c.failed;
    row.h_n = c.count > 0 ? std::log(static_cast<double>(c.count)) / n : 0.0;
    table.rows.push_back(row);
  }
  table.estimate = detail::table_estimate(table.rows, method);
  return table;
}

/// Entropy of the bonding map Q_a on its hyperbolic set, by counting
/// periodic points off the attracting cycle.
inline EntropyTable quadratic_entropy(double a, int max_n,
                                      EstimateMethod method = EstimateMethod::MaxRow) {
  if (max_n < 1 || max_n > 14)
    throw InvalidParameter("quadratic_entropy: require 1 <= max_n <= 14");
  EntropyTable table;
  table.method = method;
  for (int n = 1; n <= max_n; ++n) {
    const QPeriodicSet set = q_periodic_points(a, n);
    int count = 0;
    for (const auto& pt : set.points)
      if (pt.in_lambda) ++count;
    EntropyRow row;
    row.n = n;
    row.count = count;
    row.h_n = count > 0 ? std::log(static_cast<double>(count)) / n : 0.0;
    table.rows.push_back(row);
  }
  table.estimate = detail::table_estimate(table.rows, method);
  return table;
}

}  // namespace henonai
