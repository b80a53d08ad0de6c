#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frachardy/geometry.hpp"
#include "frachardy/spectral.hpp"

namespace frachardy {

//! One experiment description: a domain, a set of exponents, mesh resolution,
//! quadrature knobs, a seed, and an output directory. A fixed seed makes the
//! whole run (including every emitted byte) reproducible.
struct ScenarioConfig {
  std::string domain_spec;          // path to a JSON domain file
  std::vector<double> s_values;
  std::vector<double> lambda_grid;  // optional explicit shifts for the curve files
  int mesh_n = 256;                 // 1D: number of elements
  double mesh_h = 0.1;              // 2D: target mesh size
  int singular_order = 4;
  int regular_order = 3;
  int near_order = 5;
  int grading_levels = 12;
  std::uint64_t seed = 1;
  int jobs = 0;
  double tol = -1.0;  // bisection tolerance; <= 0 picks the default
  int geometry_samples = 16;
  std::string outputs;  // directory; empty = no files

  void validate() const;
};

Domain parse_domain_spec(const std::string& json_text);
std::string serialize_domain(const Domain& d);
Domain load_domain_file(const std::string& path);

struct CellResult {
  double s = 0.0;
  bool ok = false;
  int error_code = 0;
  std::string error_message;
  HardyReport report;
};

//! Runs every (domain, s) cell: assemble, solve, verify, and, when an output
//! directory is configured, write constants.csv, jcurve_<s>.csv,
//! geometry_<s>.csv, summary.json and the plot-ready curve files.
//! A failing cell is recorded and the remaining cells still run.
std::vector<CellResult> run_scenario(const ScenarioConfig& cfg);

//! Plot-ready two-column files for one report: the j-curve with the h
//! reference recorded in the comment row.
void emit_plot_data(const HardyReport& report, const std::string& out_dir);

//! Formats doubles with 17 significant digits (lossless round-trip).
std::string fmt_g17(double v);

//! Compact s tag used inside file names ("0.75", "0.6", ...).
std::string s_tag(double s);

//! Seeded rejection sampling of points strictly inside the domain.
std::vector<Point> sample_interior_points(const Domain& d, int count, std::uint64_t seed);

//! geometry_<s>.csv: sampled delta, mean distances and visibility volumes.
void write_geometry_csv(const std::string& path, const Domain& d, double s,
                        const std::vector<Point>& pts);

}  // namespace frachardy
