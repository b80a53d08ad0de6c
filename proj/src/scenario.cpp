#include "frachardy/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "frachardy/assembly.hpp"
#include "frachardy/errors.hpp"
#include "frachardy/inequality.hpp"
#include "frachardy/mesh.hpp"

namespace frachardy {

using nlohmann::json;

void ScenarioConfig::validate() const {
  for (double s : s_values)
    if (!(s > 0.5) || !(s < 1.0))
      throw Error(ERR_INVALID_PARAMS, "scenario s values must lie in (1/2, 1)");
  if (grading_levels < 4) throw Error(ERR_QUADRATURE_CONFIG, "grading_levels must be >= 4");
}

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string s_tag(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", s);
  return buf;
}

Domain parse_domain_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ERR_DOMAIN_UNKNOWN_TYPE, std::string("malformed domain JSON: ") + e.what());
  }
  const std::string type = j.value("type", "");
  if (type == "interval") {
    if (!j.contains("a") || !j.contains("b"))
      throw Error(ERR_DOMAIN_BAD_SHAPE, "interval requires fields a and b");
    return Domain::interval(j["a"].get<double>(), j["b"].get<double>());
  }
  if (type == "convex_polygon" || type == "polygon") {
    if (!j.contains("vertices"))
      throw Error(ERR_DOMAIN_BAD_POLYGON, "polygon requires a vertices array");
    std::vector<Point> verts;
    for (const auto& v : j["vertices"]) {
      if (!v.is_array() || v.size() != 2)
        throw Error(ERR_DOMAIN_BAD_POLYGON, "vertices must be [x, y] pairs");
      verts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return type == "convex_polygon" ? Domain::convex_polygon(std::move(verts))
                                    : Domain::polygon(std::move(verts));
  }
  if (type == "disk") {
    if (!j.contains("center") || !j.contains("radius"))
      throw Error(ERR_DOMAIN_BAD_SHAPE, "disk requires center and radius");
    const auto& c = j["center"];
    const double r = j["radius"].get<double>();
    if (!(r > 0.0)) throw Error(ERR_DOMAIN_BAD_SHAPE, "radius must be positive");
    return Domain::disk(Point(c[0].get<double>(), c[1].get<double>()), r);
  }
  throw Error(ERR_DOMAIN_UNKNOWN_TYPE, "unknown domain type '" + type + "'");
}

std::string serialize_domain(const Domain& d) {
  json j;
  switch (d.kind()) {
    case Domain::Kind::Interval:
      j["type"] = "interval";
      j["a"] = d.interval_a();
      j["b"] = d.interval_b();
      break;
    case Domain::Kind::Disk:
      j["type"] = "disk";
      j["center"] = {d.center().x(), d.center().y()};
      j["radius"] = d.radius();
      break;
    default:
      j["type"] = d.kind() == Domain::Kind::ConvexPolygon ? "convex_polygon" : "polygon";
      for (const auto& v : d.vertices()) j["vertices"].push_back({v.x(), v.y()});
  }
  return j.dump();
}

Domain load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ERR_IO, "cannot open domain file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_domain_spec(ss.str());
}

std::vector<Point> sample_interior_points(const Domain& d, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts;
  const double margin = 1e-6 * d.diameter();
  if (d.dim() == 1) {
    const double a = d.interval_a(), b = d.interval_b();
    while (static_cast<int>(pts.size()) < count) {
      const double x = a + (b - a) * unit(rng);
      if (x - a > margin && b - x > margin) pts.emplace_back(x, 0.0);
    }
    return pts;
  }
  // bounding box rejection
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  if (d.kind() == Domain::Kind::Disk) {
    x0 = d.center().x() - d.radius();
    x1 = d.center().x() + d.radius();
    y0 = d.center().y() - d.radius();
    y1 = d.center().y() + d.radius();
  } else {
    for (const auto& v : d.vertices()) {
      x0 = std::min(x0, v.x());
      x1 = std::max(x1, v.x());
      y0 = std::min(y0, v.y());
      y1 = std::max(y1, v.y());
    }
  }
  int guard = 0;
  while (static_cast<int>(pts.size()) < count) {
    if (++guard > 100000) throw Error(ERR_ADAPTIVE, "interior point sampling failed");
    const Point p(x0 + (x1 - x0) * unit(rng), y0 + (y1 - y0) * unit(rng));
    if (d.contains(p) && d.boundary_distance(p) > margin) pts.push_back(p);
  }
  return pts;
}

namespace {

void write_constants_csv(const std::string& path, int dim, const std::vector<double>& svals) {
  std::ofstream out(path);
  if (!out) throw Error(ERR_IO, "cannot write " + path);
  out << "N,s,c_ns,kappa,h_ns,a_ns\n";
  for (double s : svals) {
    FracParams p{dim, s, 0.0};
    out << dim << ',' << fmt_g17(s) << ',' << fmt_g17(c_ns(p)) << ',' << fmt_g17(kappa_ns(p))
        << ',' << fmt_g17(h_ns(p)) << ',' << fmt_g17(a_ns(p)) << '\n';
  }
}

void write_jcurve_csv(const std::string& path, const HardyReport& r) {
  std::ofstream out(path);
  if (!out) throw Error(ERR_IO, "cannot write " + path);
  out << "lambda,J\n";
  for (const auto& [lam, jv] : r.j_curve) out << fmt_g17(lam) << ',' << fmt_g17(jv) << '\n';
}

json report_to_json(const HardyReport& r) {
  json j;
  j["dim"] = r.dim;
  j["s"] = r.s;
  j["mu_discrete"] = r.mu_discrete;
  j["lambda1_discrete"] = r.lambda1_discrete;
  j["lambda_star_pencil"] = r.lambda_star_pencil;
  j["lambda_star_bisect"] = r.lambda_star_bisect;
  j["h_reference"] = r.h_reference;
  if (std::isfinite(r.a_bound)) j["a_bound"] = r.a_bound;
  j["upper_bound"] = r.upper_bound;
  json curve = json::array();
  for (const auto& [lam, jv] : r.j_curve) curve.push_back({lam, jv});
  j["j_curve"] = curve;
  return j;
}

}  // namespace

void write_geometry_csv(const std::string& path, const Domain& d, double s,
                        const std::vector<Point>& pts) {
  std::ofstream out(path);
  if (!out) throw Error(ERR_IO, "cannot write " + path);
  out << "x,y,delta,m2s,M2s,omega_x_vol\n";
  FracParams p{d.dim(), s, 0.0};
  const DirectionalQuadrature q = d.dim() == 1 ? DirectionalQuadrature::two_point()
                                               : DirectionalQuadrature::circle_trapezoid(400);
  for (const Point& x : pts) {
    const MeanDistances md = mean_distances(d, x, p, q);
    out << fmt_g17(x.x()) << ',' << fmt_g17(x.y()) << ',' << fmt_g17(d.boundary_distance(x))
        << ',' << fmt_g17(md.plain) << ',' << fmt_g17(md.reach_corrected) << ','
        << fmt_g17(visible_volume(d, x, q)) << '\n';
  }
}

void emit_plot_data(const HardyReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string path = out_dir + "/jcurve_" + s_tag(report.s) + ".dat";
  std::ofstream out(path);
  if (!out) throw Error(ERR_IO, "cannot write " + path);
  out << "# J vs lambda; reference h = " << fmt_g17(report.h_reference) << '\n';
  for (const auto& [lam, jv] : report.j_curve)
    out << fmt_g17(lam) << ' ' << fmt_g17(jv) << '\n';
}

std::vector<CellResult> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  const Domain domain = load_domain_file(cfg.domain_spec);
  const bool write_files = !cfg.outputs.empty();
  if (write_files) fs::create_directories(cfg.outputs);

  QuadratureConfig qcfg;
  qcfg.singular_order = cfg.singular_order;
  qcfg.regular_order = cfg.regular_order;
  qcfg.near_order = cfg.near_order;

  int cell_jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::thread::hardware_concurrency());
  cell_jobs = std::clamp(cell_jobs, 1, 8);
  // when cells run concurrently each one assembles single-threaded
  const int asm_jobs = cell_jobs > 1 && cfg.s_values.size() > 1 ? 1 : cfg.jobs;

  std::vector<CellResult> cells(cfg.s_values.size());
  auto run_cell = [&](size_t idx) {
    const double s = cfg.s_values[idx];
    CellResult& cell = cells[idx];
    cell.s = s;
    try {
      FracParams p{domain.dim(), s, 0.0};
      const Mesh mesh = domain.dim() == 1
                            ? mesh_interval(cfg.mesh_n, domain.interval_a(), domain.interval_b())
                            : mesh_domain_2d(domain, cfg.mesh_h);
      const AssembledProblem prob =
          assemble_problem(mesh, domain, p, qcfg, cfg.grading_levels, asm_jobs);
      cell.report = make_report(prob, domain.convex(), 33, cfg.tol);
      cell.ok = true;
      if (write_files) {
        // per-cell files only; shared summaries are merged after the join
        HardyReport curve = cell.report;
        if (!cfg.lambda_grid.empty()) {
          curve.j_curve.clear();
          for (double lam : cfg.lambda_grid) curve.j_curve.emplace_back(lam, j_lambda(prob, lam));
        }
        write_jcurve_csv(cfg.outputs + "/jcurve_" + s_tag(s) + ".csv", curve);
        write_geometry_csv(cfg.outputs + "/geometry_" + s_tag(s) + ".csv", domain, s,
                           sample_interior_points(domain, cfg.geometry_samples, cfg.seed));
        emit_plot_data(curve, cfg.outputs);
      }
    } catch (const Error& e) {
      cell.ok = false;
      cell.error_code = e.code();
      cell.error_message = e.what();
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error_code = ERR_EIGENSOLVER;
      cell.error_message = e.what();
    }
  };
  if (cell_jobs <= 1 || cfg.s_values.size() <= 1) {
    for (size_t i = 0; i < cfg.s_values.size(); ++i) run_cell(i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < cfg.s_values.size(); i = next.fetch_add(1))
        run_cell(i);
    };
    std::vector<std::thread> pool;
    const int nt = std::min<size_t>(cell_jobs, cfg.s_values.size());
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (write_files) {
    write_constants_csv(cfg.outputs + "/constants.csv", domain.dim(), cfg.s_values);
    // sweep summaries vs s (ascending), plot-ready
    std::vector<const CellResult*> order;
    for (const auto& c : cells)
      if (c.ok) order.push_back(&c);
    std::sort(order.begin(), order.end(),
              [](const CellResult* a, const CellResult* b) { return a->s < b->s; });
    auto write_vs_s = [&](const std::string& name, auto getter) {
      std::ofstream out(cfg.outputs + "/" + name);
      out << "# " << name.substr(0, name.find("_vs_s")) << " vs s\n";
      for (const CellResult* c : order)
        out << fmt_g17(c->s) << ' ' << fmt_g17(getter(c->report)) << '\n';
    };
    write_vs_s("h_vs_s.dat", [](const HardyReport& r) { return r.h_reference; });
    write_vs_s("mu_vs_s.dat", [](const HardyReport& r) { return r.mu_discrete; });
    write_vs_s("lambda_star_vs_s.dat",
               [](const HardyReport& r) { return r.lambda_star_pencil; });

    json summary;
    summary["domain"] = json::parse(serialize_domain(domain));
    summary["seed"] = cfg.seed;
    summary["mesh_n"] = cfg.mesh_n;
    summary["mesh_h"] = cfg.mesh_h;
    summary["cells"] = json::array();
    for (const auto& c : cells) {
      json jc;
      jc["s"] = c.s;
      jc["ok"] = c.ok;
      if (c.ok) {
        jc["report"] = report_to_json(c.report);
      } else {
        jc["error_code"] = c.error_code;
        jc["error"] = c.error_message;
      }
      summary["cells"].push_back(jc);
    }
    std::ofstream out(cfg.outputs + "/summary.json");
    if (!out) throw Error(ERR_IO, "cannot write summary.json");
    out << summary.dump(2) << '\n';
  }
  return cells;
}

}  // namespace frachardy
