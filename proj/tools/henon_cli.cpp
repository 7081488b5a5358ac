// Command-line surface for the Henon anti-integrable continuation library.
//
// Exit codes: 0 success, 1 partial result / non-convergence / verification
// failure, 2 usage error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "henonai/henonai.hpp"

namespace {

using namespace henonai;

struct ParamFlags {
  std::optional<double> a, b, eps, r;

  void attach(CLI::App* cmd) {
    auto* ga = cmd->add_option("--a", a, "Henon parameter a (> 0)");
    auto* gb = cmd->add_option("--b", b, "Henon Jacobian b");
    auto* ge = cmd->add_option("--eps", eps, "eps = 1/sqrt(a)");
    auto* gr = cmd->add_option("--r", r, "r = b/sqrt(a)");
    ga->excludes(ge)->excludes(gr);
    gb->excludes(ge)->excludes(gr);
    ga->needs(gb);
    gb->needs(ga);
    ge->needs(gr);
    gr->needs(ge);
  }

  Params resolve() const {
    if (a && b) return Params::from_ab(*a, *b);
    if (eps && r) return Params::from_eps_r(*eps, *r);
    throw CLI::ValidationError("parameters", "need --a/--b or --eps/--r");
  }
};

PathRule parse_path(const std::string& s, ContinuationOptions& opts) {
  if (s == "constant-b") return PathRule::ConstantB;
  if (s == "constant-rhat") return PathRule::ConstantRhat;
  if (s.rfind("table:", 0) == 0) {
    std::ifstream in(s.substr(6));
    if (!in) throw CLI::ValidationError("--path", "cannot open table file");
    double e, r;
    while (in >> e >> r) opts.r_table.emplace_back(e, r);
    std::sort(opts.r_table.begin(), opts.r_table.end());
    return PathRule::TableLookup;
  }
  throw CLI::ValidationError("--path", "expected constant-b, constant-rhat or table:<file>");
}

Chart parse_chart(const std::string& s) {
  if (s == "ab") return Chart::AB;
  if (s == "epsr") return Chart::EpsR;
  if (s == "mobius") return Chart::MobiusDisc;
  if (s == "sphere") return Chart::Sphere;
  if (s == "semidisc") return Chart::SemiDisc;
  throw CLI::ValidationError("--chart", "expected ab, epsr, mobius, sphere or semidisc");
}

int cmd_classify(double a, int max_iter, double r_escape) {
  ClassifyOptions opts;
  if (max_iter > 0) opts.max_iter = max_iter;
  if (r_escape > 0) opts.r_escape = r_escape;
  const QuadClass c = classify(a, opts);
  switch (c.kind) {
    case QuadKind::Escape:
      std::cout << "escape iterations=" << c.iterations << "\n";
      return 0;
    case QuadKind::AttractingCycle: {
      std::cout << "attracting-cycle period=" << c.period
                << " multiplier=" << c.multiplier << " cycle=";
      for (std::size_t i = 0; i < c.cycle.size(); ++i)
        std::cout << (i ? "," : "") << c.cycle[i];
      std::cout << "\n";
      return 0;
    }
    case QuadKind::Undecided:
      std::cout << "undecided iterations=" << c.iterations << "\n";
      return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Henon-map orbits from anti-integrable anchors"};
  app.require_subcommand(1);

  // classify-quadratic
  auto* c_classify = app.add_subcommand("classify-quadratic",
                                        "Hyperbolicity classification of Q_a");
  double cq_a = 0;
  int cq_max_iter = 0;
  double cq_r_escape = 0;
  c_classify->add_option("--a", cq_a, "quadratic parameter a")->required();
  c_classify->add_option("--max-iter", cq_max_iter, "iteration budget");
  c_classify->add_option("--r-escape", cq_r_escape, "escape radius");

  // continue
  auto* c_cont = app.add_subcommand("continue", "Continue one anchor to an orbit");
  ParamFlags cont_p;
  cont_p.attach(c_cont);
  std::string cont_word, cont_out, cont_path = "constant-b", cont_solver = "newton";
  double cont_rhat = 0, cont_qpoint = 0, cont_tol = 1e-12;
  int cont_period = 0, cont_max_iter = 50, cont_steps = 1;
  c_cont->add_option("--word", cont_word, "full-shift word, e.g. +-");
  c_cont->add_option("--rhat", cont_rhat, "Q-backbone r_hat (> 0)");
  c_cont->add_option("--q-point", cont_qpoint, "period-n point of Q_{1/rhat^2}");
  c_cont->add_option("--period", cont_period, "anchor period for --q-point");
  c_cont->add_option("--out", cont_out, "orbit JSON output path");
  c_cont->add_option("--path", cont_path, "homotopy rule: constant-b|constant-rhat|table:<file>");
  c_cont->add_option("--solver", cont_solver, "newton|contraction");
  c_cont->add_option("--tol", cont_tol, "residual tolerance");
  c_cont->add_option("--max-iter", cont_max_iter, "Newton iteration cap");
  c_cont->add_option("--homotopy-steps", cont_steps, "geometric eps steps");

  // orbits
  auto* c_orbits = app.add_subcommand("orbits", "Continue all 2^n words of one period");
  ParamFlags orb_p;
  orb_p.attach(c_orbits);
  int orb_n = 0, orb_threads = 1;
  std::string orb_out;
  double orb_tol = 1e-12;
  c_orbits->add_option("--period", orb_n, "word length n")->required();
  c_orbits->add_option("--out", orb_out, "JSON array output path");
  c_orbits->add_option("--tol", orb_tol, "residual tolerance");
  c_orbits->add_option("--threads", orb_threads, "worker threads (0 = auto)");

  // entropy
  auto* c_entropy = app.add_subcommand("entropy", "Periodic-orbit entropy table");
  ParamFlags ent_p;
  ent_p.attach(c_entropy);
  int ent_max = 8;
  std::string ent_family = "fullshift", ent_method = "maxrow", ent_out;
  double ent_quad_a = 0;
  c_entropy->add_option("--max-period", ent_max, "largest period in the table");
  c_entropy->add_option("--family", ent_family, "fullshift|qbackbone");
  c_entropy->add_option("--method", ent_method, "maxrow|linearfit");
  c_entropy->add_option("--quadratic-a", ent_quad_a,
                        "count Q_a periodic points instead of Henon orbits");
  c_entropy->add_option("--out", ent_out, "CSV output path");

  // scan
  auto* c_scan = app.add_subcommand("scan", "Plateau raster over a chart window");
  std::string scan_chart = "epsr", scan_out;
  std::vector<double> scan_window;
  std::vector<int> scan_grid;
  int scan_m = 4, scan_threads = 0;
  double scan_tol = 1e-12;
  bool scan_overlays = false;
  c_scan->add_option("--chart", scan_chart, "ab|epsr|mobius|sphere|semidisc");
  c_scan->add_option("--window", scan_window, "x0 x1 y0 y1")->expected(4)->required();
  c_scan->add_option("--grid", scan_grid, "width height")->expected(2)->required();
  c_scan->add_option("--m", scan_m, "word length per cell");
  c_scan->add_option("--tol", scan_tol, "residual tolerance");
  c_scan->add_option("--threads", scan_threads, "worker threads (0 = auto)");
  c_scan->add_option("--out", scan_out, "output base path (.csv/.pgm)")->required();
  c_scan->add_flag("--overlays", scan_overlays, "emit b = +-1 reference polylines");

  // transform
  auto* c_trans = app.add_subcommand("transform", "Chart forward/inverse transforms");
  std::string trans_chart;
  std::optional<double> trans_a, trans_b;
  std::vector<double> trans_coords;
  c_trans->add_option("--chart", trans_chart, "ab|epsr|mobius|sphere|semidisc")->required();
  c_trans->add_option("--a", trans_a, "parameter a");
  c_trans->add_option("--b", trans_b, "parameter b");
  c_trans->add_option("--inverse", trans_coords, "chart coordinates to invert")
      ->expected(2, 3);

  // verify
  auto* c_verify = app.add_subcommand("verify", "Re-check an orbit JSON record");
  std::string ver_file;
  double ver_tol = 1e-9;
  c_verify->add_option("--orbit-file", ver_file, "orbit JSON path")->required();
  c_verify->add_option("--tol", ver_tol, "verification tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*c_classify) return cmd_classify(cq_a, cq_max_iter, cq_r_escape);

    if (*c_cont) {
      const Params p = cont_p.resolve();
      ContinuationOptions opts;
      opts.residual_tol = cont_tol;
      opts.max_iter = cont_max_iter;
      opts.homotopy_steps = cont_steps;
      opts.path = parse_path(cont_path, opts);

      AnchorSequence anchor;
      if (!cont_word.empty()) {
        anchor = build_anchor_fullshift(SymbolWord::parse(cont_word));
      } else if (cont_rhat > 0 && cont_period > 0) {
        anchor = build_anchor_markov(cont_rhat, cont_qpoint, cont_period);
      } else {
        std::cerr << "continue: need --word or --rhat/--q-point/--period\n";
        return 2;
      }
      ContinuationResult res;
      try {
        res = cont_solver == "contraction" ? contraction_continue(p, anchor, opts)
                                           : newton_continue(p, anchor, opts);
      } catch (const NoConvergence& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return 1;
      }
      const std::string json = orbit_to_json(res);
      if (!cont_out.empty()) write_file(cont_out, json);
      std::cout << json;
      return 0;
    }

    if (*c_orbits) {
      const Params p = orb_p.resolve();
      if (orb_n < 1 || orb_n > 14) {
        std::cerr << "orbits: --period must be in [1, 14]\n";
        return 2;
      }
      ContinuationOptions opts;
      opts.residual_tol = orb_tol;
      const int total = 1 << orb_n;
      std::vector<ContinuationResult> results(total);
      std::vector<char> ok(total, 0);
      detail::parallel_for(total, orb_threads, [&](int bits) {
        const auto anchor = build_anchor_fullshift(
            SymbolWord::from_bits(static_cast<std::uint64_t>(bits), orb_n));
        try {
          results[bits] = newton_continue(p, anchor, opts);
          ok[bits] = 1;
        } catch (const Error&) {
        }
      });
      int nconv = 0;
      std::ostringstream arr;
      arr << "[\n";
      bool first = true;
      std::vector<ContinuationResult> converged;
      for (int bits = 0; bits < total; ++bits) {
        if (!ok[bits]) continue;
        ++nconv;
        converged.push_back(results[bits]);
        if (!first) arr << ",\n";
        arr << orbit_to_json(results[bits]);
        first = false;
      }
      arr << "]\n";
      if (!orb_out.empty()) write_file(orb_out, arr.str());
      double min_sep = std::numeric_limits<double>::infinity();
      if (converged.size() > 1) min_sep = separation(converged).min_pairwise;
      std::cout << "converged " << nconv << "/" << total
                << " min_separation=" << min_sep << "\n";
      return nconv == total ? 0 : 1;
    }

    if (*c_entropy) {
      const EstimateMethod method =
          ent_method == "linearfit" ? EstimateMethod::LinearFit : EstimateMethod::MaxRow;
      EntropyTable table;
      if (ent_quad_a > 0) {
        table = quadratic_entropy(ent_quad_a, ent_max, method);
      } else {
        const Params p = ent_p.resolve();
        AnchorFamily family = AnchorFamily::full_shift();
        if (ent_family == "qbackbone") family = AnchorFamily::q_backbone(p.r());
        table = entropy_estimate(p, ent_max, family, method);
      }
      const std::string csv = entropy_to_csv(table);
      if (!ent_out.empty()) write_file(ent_out, csv);
      std::cout << csv;
      int failed = 0;
      for (const auto& row : table.rows) failed += row.failed;
      return failed == 0 ? 0 : 1;
    }

    if (*c_scan) {
      const Chart chart = parse_chart(scan_chart);
      ScanOptions opts;
      opts.m = scan_m;
      opts.threads = scan_threads;
      opts.solver.residual_tol = scan_tol;
      const ScanWindow window{scan_window[0], scan_window[1], scan_window[2],
                              scan_window[3]};
      const ScanRaster raster = scan(chart, window, scan_grid[0], scan_grid[1], opts);
      write_file(scan_out + ".csv", raster_to_csv(raster));
      write_file(scan_out + ".pgm", raster_to_pgm(raster));
      if (scan_overlays) {
        const double a_max = 1e4;
        write_file(scan_out + "_overlay_bplus.csv",
                   polyline_to_csv(overlay_b_unit(chart, 1.0, a_max)));
        write_file(scan_out + "_overlay_bminus.csv",
                   polyline_to_csv(overlay_b_unit(chart, -1.0, a_max)));
      }
      int full = 0, partial = 0, none = 0, outside = 0;
      for (const auto& c : raster.cells) {
        switch (c.kind) {
          case CellKind::FullHorseshoe: ++full; break;
          case CellKind::Partial: ++partial; break;
          case CellKind::NoneContinued: ++none; break;
          case CellKind::OutOfDomain: ++outside; break;
        }
      }
      std::cout << "cells=" << raster.cells.size() << " full=" << full
                << " partial=" << partial << " none=" << none
                << " outofdomain=" << outside << "\n";
      return 0;
    }

    if (*c_trans) {
      const Chart chart = parse_chart(trans_chart);
      if (!trans_coords.empty()) {
        ChartPoint pt;
        pt.dim = static_cast<int>(trans_coords.size());
        for (int i = 0; i < pt.dim; ++i) pt.v[static_cast<std::size_t>(i)] = trans_coords[i];
        const AbPoint ab = chart_inverse(chart, pt);
        std::cout << detail::fmt17(ab.a) << " " << detail::fmt17(ab.b) << "\n";
        return 0;
      }
      if (!trans_a || !trans_b) {
        std::cerr << "transform: need --a/--b or --inverse\n";
        return 2;
      }
      const ChartPoint pt = chart_forward(chart, *trans_a, *trans_b);
      std::cout << detail::fmt17(pt[0]) << " " << detail::fmt17(pt[1]);
      if (pt.dim == 3) std::cout << " " << detail::fmt17(pt[2]);
      std::cout << "\n";
      return 0;
    }

    if (*c_verify) {
      const ContinuationResult res = read_orbit_file(ver_file);
      const Params p = Params::from_eps_r(res.eps, res.r);
      bool ok = true;
      auto report = [&](const char* name, bool pass) {
        std::cout << name << ": " << (pass ? "ok" : "FAIL") << "\n";
        ok = ok && pass;
      };

      const auto f = assemble_residual(p, res.orbit);
      report("residual", detail::sup_norm(f) <= std::max(res.residual_norm * 10, ver_tol));

      const MonodromyReport mono = monodromy(p, res);
      const int n = static_cast<int>(res.orbit.size());
      const double bn = std::pow(p.b(), n);
      report("monodromy_det",
             std::abs(mono.det_check - bn) <= 1e-8 * std::max(1.0, std::abs(bn)));

      // Shift equivariance: continuing the rotated anchor must rotate the orbit.
      AnchorSequence rot;
      rot.r_hat = res.anchor.r_hat;
      rot.values.resize(res.anchor.values.size());
      for (int i = 0; i < n; ++i) rot.values[i] = res.anchor.values[(i + 1) % n];
      const ContinuationResult shifted = newton_continue(p, rot);
      double d = 0;
      for (int i = 0; i < n; ++i)
        d = std::max(d, std::abs(shifted.orbit[i] - res.orbit[(i + 1) % n]));
      report("shift_equivariance", d <= ver_tol);

      return ok ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
