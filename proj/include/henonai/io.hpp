#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "henonai/continuation.hpp"
#include "henonai/entropy.hpp"
#include "henonai/errors.hpp"
#include "henonai/scan.hpp"

namespace henonai {

namespace detail {

// 17 significant digits: lossless double round-trip, byte-stable output.
inline std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

/// Orbit record JSON.  `word` is present for full-shift anchors, `q_anchor`
/// (the anchor values plus r_hat) otherwise.
inline std::string orbit_to_json(const ContinuationResult& res) {
  std::ostringstream os;
  const double eps = res.eps, r = res.r;
  os << "{\n";
  os << "  \"a\": " << detail::fmt17(1.0 / (eps * eps)) << ",\n";
  os << "  \"b\": " << detail::fmt17(r / eps) << ",\n";
  os << "  \"eps\": " << detail::fmt17(eps) << ",\n";
  os << "  \"r\": " << detail::fmt17(r) << ",\n";
  if (res.anchor.r_hat == 0.0) {
    os << "  \"word\": \"";
    for (double v : res.anchor.values) os << (v > 0 ? '+' : '-');
    os << "\",\n";
  } else {
    os << "  \"q_anchor\": {\"r_hat\": " << detail::fmt17(res.anchor.r_hat)
       << ", \"values\": [";
    for (std::size_t i = 0; i < res.anchor.values.size(); ++i)
      os << (i ? ", " : "") << detail::fmt17(res.anchor.values[i]);
    os << "]},\n";
  }
  os << "  \"orbit\": [";
  for (std::size_t i = 0; i < res.orbit.size(); ++i)
    os << (i ? ", " : "") << detail::fmt17(res.orbit[i]);
  os << "],\n";
  os << "  \"residual_norm\": " << detail::fmt17(res.residual_norm) << ",\n";
  os << "  \"min_singular\": " << detail::fmt17(res.min_singular) << ",\n";
  os << "  \"iterations\": " << res.iterations << ",\n";
  os << "  \"converged\": " << (res.converged ? "true" : "false") << "\n";
  os << "}\n";
  return os.str();
}

inline ContinuationResult orbit_from_json(const nlohmann::json& j) {
  ContinuationResult res;
  res.eps = j.at("eps").get<double>();
  res.r = j.at("r").get<double>();
  res.orbit = j.at("orbit").get<std::vector<double>>();
  if (j.contains("word")) {
    res.anchor = build_anchor_fullshift(SymbolWord::parse(j.at("word").get<std::string>()));
  } else if (j.contains("q_anchor")) {
    res.anchor.r_hat = j.at("q_anchor").at("r_hat").get<double>();
    res.anchor.values = j.at("q_anchor").at("values").get<std::vector<double>>();
  } else {
    throw IoError("orbit_from_json: missing word / q_anchor");
  }
  res.residual_norm = j.at("residual_norm").get<double>();
  res.min_singular = j.at("min_singular").get<double>();
  res.iterations = j.at("iterations").get<int>();
  res.converged = j.at("converged").get<bool>();
  if (res.orbit.size() != res.anchor.values.size())
    throw IoError("orbit_from_json: orbit/anchor length mismatch");
  return res;
}

inline ContinuationResult read_orbit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return orbit_from_json(j);
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << data;
  if (!out) throw IoError("write failed: " + path);
}

/// CSV: n,count,h_n rows followed by a trailing estimate row.
inline std::string entropy_to_csv(const EntropyTable& table) {
  std::ostringstream os;
  os << "n,count,h_n,failed\n";
  for (const auto& row : table.rows)
    os << row.n << "," << row.count << "," << detail::fmt17(row.h_n) << ","
       << row.failed << "\n";
  os << "estimate,"
     << (table.method == EstimateMethod::MaxRow ? "maxrow" : "linearfit") << ","
     << detail::fmt17(table.estimate) << ",\n";
  return os.str();
}

inline const char* cell_kind_name(CellKind k) {
  switch (k) {
    case CellKind::FullHorseshoe: return "full";
    case CellKind::Partial: return "partial";
    case CellKind::NoneContinued: return "none";
    case CellKind::OutOfDomain: return "outofdomain";
  }
  return "?";
}

inline std::string raster_to_csv(const ScanRaster& raster) {
  std::ostringstream os;
  os << "i,j,a,b,class,converged,of,sterling_meiss,improved_horseshoe,dn_radius\n";
  for (int j = 0; j < raster.height; ++j)
    for (int i = 0; i < raster.width; ++i) {
      const CellClass& c = raster.at(i, j);
      os << i << "," << j << "," << detail::fmt17(c.a) << "," << detail::fmt17(c.b)
         << "," << cell_kind_name(c.kind) << "," << c.converged << "," << c.of << ","
         << (c.analytic.sterling_meiss ? 1 : 0) << ","
         << (c.analytic.improved_horseshoe ? 1 : 0) << ","
         << detail::fmt17(c.analytic.dn_radius) << "\n";
    }
  return os.str();
}

/// Binary PGM (P5), one byte per cell.
/// Gray map: FullHorseshoe 255, Partial 128, NoneContinued 32, OutOfDomain 0.
inline std::string raster_to_pgm(const ScanRaster& raster) {
  std::ostringstream os;
  os << "P5\n" << raster.width << " " << raster.height << "\n255\n";
  for (int j = 0; j < raster.height; ++j)
    for (int i = 0; i < raster.width; ++i) {
      unsigned char g = 0;
      switch (raster.at(i, j).kind) {
        case CellKind::FullHorseshoe: g = 255; break;
        case CellKind::Partial: g = 128; break;
        case CellKind::NoneContinued: g = 32; break;
        case CellKind::OutOfDomain: g = 0; break;
      }
      os.put(static_cast<char>(g));
    }
  return os.str();
}

inline std::string polyline_to_csv(const std::vector<ChartPoint>& pts) {
  std::ostringstream os;
  os << "x,y,z\n";
  for (const auto& p : pts) {
    os << detail::fmt17(p[0]) << "," << detail::fmt17(p[1]) << ",";
    if (p.dim == 3) os << detail::fmt17(p[2]);
    os << "\n";
  }
  return os.str();
}

}  // namespace henonai
