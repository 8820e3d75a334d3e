#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <system_error>
#include <vector>

#include "gsb/core_model.hpp"
#include "gsb/regions.hpp"
#include "gsb/serialize.hpp"

namespace gsb {

// The two-user benchmark channel: N = [10, 1], P = 50, two channel uses
// per source sample. Budget 60, point-to-point corner (1/36, 1/2601).
inline BroadcastChannel benchmark_channel() {
  return BroadcastChannel({10.0, 1.0}, 50.0, 2.0);
}

// 200 log-spaced values over [51^-2, 1] with exact endpoints.
inline std::vector<double> benchmark_grid() {
  const std::size_t n = 200;
  const double lo = std::pow(51.0, -2.0);
  const double log_lo = std::log(lo);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n - 1);
    grid[i] = std::exp(log_lo * (1.0 - t));
  }
  grid.front() = lo;
  grid.back() = 1.0;
  return grid;
}

// Writes the benchmark curve family into out_dir: one parametric outer
// curve per tau in {0, 0.05, 0.2, 1, 5, inf} (d_1 solved against the d_2
// grid), the separation inner curve, and the point-to-point corner as
// p2p.json. Output is deterministic.
inline void run_benchmark_curves(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    fail(ErrorCode::IoError,
         "cannot create output directory " + out_dir.string() + ": " +
             ec.message());

  const BroadcastChannel ch = benchmark_channel();
  const std::vector<double> grid = benchmark_grid();

  struct TauPoint {
    double value;
    const char* suffix;
  };
  const TauPoint taus[] = {
      {0.0, "0"},   {0.05, "0.05"},
      {0.2, "0.2"}, {1.0, "1"},
      {5.0, "5"},   {std::numeric_limits<double>::infinity(), "inf"},
  };

  for (const TauPoint& t : taus) {
    RegionKind region = RegionKind::parametric(TauVector({t.value}));
    BoundaryCurve curve = trace_boundary(region, ch, grid, 0, 1);
    write_text_file(out_dir / (std::string("outer_tau_") + t.suffix + ".csv"),
                    boundary_curve_csv(curve));
  }

  BoundaryCurve inner = trace_boundary(RegionKind::inner(), ch, grid, 0, 1);
  write_text_file(out_dir / "inner.csv", boundary_curve_csv(inner));

  nlohmann::json corner = {
      {"d1", point_to_point_distortion(ch, 0)},
      {"d2", point_to_point_distortion(ch, 1)},
  };
  write_text_file(out_dir / "p2p.json", corner.dump(2) + "\n");
}

}  // namespace gsb
