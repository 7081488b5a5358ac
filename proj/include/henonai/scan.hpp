#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "henonai/charts.hpp"
#include "henonai/continuation.hpp"
#include "henonai/entropy.hpp"
#include "henonai/errors.hpp"
#include "henonai/hyperbolicity.hpp"
#include "henonai/params.hpp"

namespace henonai {

enum class CellKind : std::uint8_t { FullHorseshoe, Partial, NoneContinued, OutOfDomain };

struct CellClass {
  CellKind kind = CellKind::OutOfDomain;
  int converged = 0;  // words that continued (and are quasi-hyperbolic for Full)
  int of = 0;         // words attempted
  double a = 0, b = 0;
  RegionFlags analytic{};
};

struct ScanWindow {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
};

struct ScanOptions {
  int m = 4;                       // word length; all 2^m full-shift words per cell
  ContinuationOptions solver{};
  double unit_circle_tol = 1e-6;
  int threads = 1;                 // 0 -> hardware concurrency
};

struct ScanRaster {
  Chart chart = Chart::EpsR;
  ScanWindow window{};
  int width = 0, height = 0;
  std::vector<CellClass> cells;  // row-major, index j * width + i

  const CellClass& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * width + i]; }
};

namespace detail {

inline CellClass classify_cell(Chart chart, double u, double v, const ScanOptions& opts) {
  CellClass cell;
  AbPoint ab;
  try {
    ab = chart_inverse(chart, {{u, v, 0}, 2});
  } catch (const DomainError&) {
    return cell;  // OutOfDomain
  }
  if (!(ab.a > 0.0) || !std::isfinite(ab.a) || !std::isfinite(ab.b)) return cell;

  cell.a = ab.a;
  cell.b = ab.b;
  const Params p = Params::from_ab(ab.a, ab.b);
  cell.analytic = region_flags(p);
  const int total = 1 << opts.m;
  cell.of = total;

  // The AI limit itself: the eps = 0 column of the EpsR chart is the full
  // shift by definition; no solve is attempted at the singular limit.
  if (chart == Chart::EpsR && u == 0.0) {
    cell.kind = CellKind::FullHorseshoe;
    cell.converged = total;
    return cell;
  }

  ContinuationOptions solver = opts.solver;
  solver.compute_min_singular = false;
  std::vector<std::vector<double>> orbits;
  int nconv = 0, nqh = 0;
  for (int bits = 0; bits < total; ++bits) {
    const auto anchor =
        build_anchor_fullshift(SymbolWord::from_bits(static_cast<std::uint64_t>(bits), opts.m));
    try {
      auto res = newton_continue(p, anchor, solver);
      ++nconv;
      if (monodromy(p, res, opts.unit_circle_tol).quasi_hyperbolic) ++nqh;
      orbits.push_back(std::move(res.orbit));
    } catch (const NoConvergence&) {
    } catch (const SingularJacobian&) {
    }
  }
  cell.converged = nconv;
  if (nconv == 0) {
    cell.kind = CellKind::NoneContinued;
  } else if (nconv == total && nqh == total &&
             count_distinct_orbits(orbits) == total) {
    cell.kind = CellKind::FullHorseshoe;
  } else {
    cell.kind = CellKind::Partial;
  }
  return cell;
}

template <typename Fn>
inline void parallel_for(int count, int threads, Fn&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || count <= 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  const int workers = std::min(threads, count);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) fn(k);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Per-cell continuation/hyperbolicity classification on a chart window.
/// Cells are sampled at their centers; output is deterministic for fixed
/// options regardless of thread count.
inline ScanRaster scan(Chart chart, const ScanWindow& window, int width, int height,
                       const ScanOptions& opts = {}) {
  if (width < 1 || height < 1 ||
      static_cast<std::int64_t>(width) * height > 1000000)
    throw InvalidParameter("scan: grid must have between 1 and 10^6 cells");
  if (opts.m < 1 || opts.m > 8)
    throw InvalidParameter("scan: require 1 <= m <= 8");

  ScanRaster raster;
  raster.chart = chart;
  raster.window = window;
  raster.width = width;
  raster.height = height;
  raster.cells.resize(static_cast<std::size_t>(width) * height);

  const double dx = (window.x1 - window.x0) / width;
  const double dy = (window.y1 - window.y0) / height;
  detail::parallel_for(width * height, opts.threads, [&](int k) {
    const int i = k % width, j = k / width;
    const double u = window.x0 + (i + 0.5) * dx;
    const double v = window.y0 + (j + 0.5) * dy;
    raster.cells[static_cast<std::size_t>(k)] = detail::classify_cell(chart, u, v, opts);
  });
  return raster;
}

/// Reference curve overlay: chart image of the line b = sign * 1,
/// a in (0, a_max], log-spaced samples.
inline std::vector<ChartPoint> overlay_b_unit(Chart chart, double sign, double a_max,
                                              int samples = 512) {
  std::vector<ChartPoint> pts;
  const double lo = std::log(1e-4), hi = std::log(a_max);
  for (int k = 0; k < samples; ++k) {
    const double a = std::exp(lo + (hi - lo) * k / (samples - 1));
    try {
      pts.push_back(chart_forward(chart, a, sign));
    } catch (const DomainError&) {
    }
  }
  return pts;
}

}  // namespace henonai
