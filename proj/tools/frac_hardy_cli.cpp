// Command-line driver: computes the closed-form constants, geometric weights,
// assembled matrices, eigenvalue reports and full sweeps, writing CSV / JSON /
// plot-ready outputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "frachardy/assembly.hpp"
#include "frachardy/errors.hpp"
#include "frachardy/inequality.hpp"
#include "frachardy/mesh.hpp"
#include "frachardy/scenario.hpp"
#include "frachardy/spectral.hpp"

using namespace frachardy;

namespace {

int fail(const Error& e) {
  std::fprintf(stderr, "E%d: %s\n", e.code(), e.what());
  return 1;
}

struct CommonOpts {
  std::string domain_path;
  std::vector<double> s_values{0.75};
  std::string mesh_spec = "256";
  std::uint64_t seed = 1;
  std::string out_dir;
  double tol = -1.0;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_domain = true) {
  auto* d = cmd->add_option("--domain", o.domain_path, "path to a JSON domain file");
  if (need_domain) d->required();
  cmd->add_option("--s", o.s_values, "fractional exponents in (1/2, 1)");
  cmd->add_option("--mesh", o.mesh_spec,
                  "mesh resolution: integer n (1D elements) or real h (2D size)");
  cmd->add_option("--seed", o.seed, "random seed for sampled checks");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--tol", o.tol, "bisection tolerance (default 1e-8 * max(1, lambda1))");
  cmd->add_option("--jobs", o.jobs, "worker threads (0 = hardware default)");
}

ScenarioConfig to_config(const CommonOpts& o) {
  ScenarioConfig cfg;
  cfg.domain_spec = o.domain_path;
  cfg.s_values = o.s_values;
  cfg.seed = o.seed;
  cfg.outputs = o.out_dir;
  cfg.tol = o.tol;
  cfg.jobs = o.jobs;
  if (o.mesh_spec.find('.') == std::string::npos) {
    cfg.mesh_n = std::stoi(o.mesh_spec);
  } else {
    cfg.mesh_h = std::stod(o.mesh_spec);
  }
  return cfg;
}

struct Cell {
  Domain domain;
  Mesh mesh;
  AssembledProblem prob;
};

Cell build_cell(const CommonOpts& o, double s) {
  const ScenarioConfig cfg = to_config(o);
  Cell c{load_domain_file(o.domain_path), {}, {}};
  c.mesh = c.domain.dim() == 1
               ? mesh_interval(cfg.mesh_n, c.domain.interval_a(), c.domain.interval_b())
               : mesh_domain_2d(c.domain, cfg.mesh_h);
  FracParams p{c.domain.dim(), s, 0.0};
  c.prob = assemble_problem(c.mesh, c.domain, p, {}, cfg.grading_levels, o.jobs);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Hardy constants, geometry and eigenvalue lab"};
  app.require_subcommand(1);

  // constants -------------------------------------------------------------
  int const_dim = 2;
  std::vector<double> const_s{0.6, 0.75, 0.9};
  std::string const_out;
  auto* c_cmd = app.add_subcommand("constants", "closed-form constants table");
  c_cmd->add_option("--N", const_dim, "space dimension");
  c_cmd->add_option("--s", const_s, "exponents");
  c_cmd->add_option("--out", const_out, "write constants.csv here instead of stdout");

  // geometry ----------------------------------------------------------------
  CommonOpts g_opts;
  auto* g_cmd = app.add_subcommand("geometry", "sampled delta / mean-distance / volume table");
  add_common(g_cmd, g_opts);

  // assemble ----------------------------------------------------------------
  CommonOpts a_opts;
  auto* a_cmd = app.add_subcommand("assemble", "assemble and dump the A/B/M triplet files");
  add_common(a_cmd, a_opts);

  // solve / jcurve / lambda-star ---------------------------------------------
  CommonOpts s_opts, j_opts, l_opts;
  auto* s_cmd = app.add_subcommand("solve", "discrete mu, lambda1, lambda* report");
  add_common(s_cmd, s_opts);
  auto* j_cmd = app.add_subcommand("jcurve", "J vs lambda curve files");
  add_common(j_cmd, j_opts);
  auto* l_cmd = app.add_subcommand("lambda-star", "pencil and bisection lambda* per s");
  add_common(l_cmd, l_opts);

  // verify-geom-hardy ---------------------------------------------------------
  CommonOpts v_opts;
  int v_count = 100;
  auto* v_cmd =
      app.add_subcommand("verify-geom-hardy", "residual check of the geometric Hardy bound");
  add_common(v_cmd, v_opts);
  v_cmd->add_option("--count", v_count, "number of random coefficient vectors");

  // appendix-k ---------------------------------------------------------------
  CommonOpts k_opts;
  int k_lo = 3, k_hi = 8;
  auto* k_cmd =
      app.add_subcommand("appendix-k", "distance-energy ratio K/delta^{2-2s} near the boundary");
  add_common(k_cmd, k_opts);
  k_cmd->add_option("--k-lo", k_lo, "first dyadic level (delta = 2^-k)");
  k_cmd->add_option("--k-hi", k_hi, "last dyadic level");

  // sweep ---------------------------------------------------------------------
  CommonOpts w_opts;
  auto* w_cmd = app.add_subcommand("sweep", "full scenario: all outputs into --out");
  add_common(w_cmd, w_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_cmd->parsed()) {
      std::ostream* os = &std::cout;
      std::ofstream file;
      if (!const_out.empty()) {
        std::filesystem::create_directories(const_out);
        file.open(const_out + "/constants.csv");
        os = &file;
      }
      *os << "N,s,c_ns,kappa,h_ns,a_ns\n";
      for (double s : const_s) {
        FracParams p{const_dim, s, 0.0};
        *os << const_dim << ',' << fmt_g17(s) << ',' << fmt_g17(c_ns(p)) << ','
            << fmt_g17(kappa_ns(p)) << ',' << fmt_g17(h_ns(p)) << ',' << fmt_g17(a_ns(p))
            << '\n';
      }
      return 0;
    }

    if (g_cmd->parsed()) {
      const std::string out_dir = g_opts.out_dir.empty() ? "." : g_opts.out_dir;
      std::filesystem::create_directories(out_dir);
      const Domain d = load_domain_file(g_opts.domain_path);
      const ScenarioConfig cfg = to_config(g_opts);
      const auto pts = sample_interior_points(d, cfg.geometry_samples, cfg.seed);
      for (double s : g_opts.s_values) {
        const std::string path = out_dir + "/geometry_" + s_tag(s) + ".csv";
        write_geometry_csv(path, d, s, pts);
        std::printf("s=%s: wrote %s (%d points)\n", s_tag(s).c_str(), path.c_str(),
                    static_cast<int>(pts.size()));
      }
      return 0;
    }

    if (a_cmd->parsed()) {
      if (a_opts.out_dir.empty()) throw Error(ERR_IO, "assemble requires --out");
      std::filesystem::create_directories(a_opts.out_dir);
      for (double s : a_opts.s_values) {
        const Cell cell = build_cell(a_opts, s);
        const auto dump = [&](const Eigen::MatrixXd& m, char kind) {
          std::ofstream out(a_opts.out_dir + "/mat" + kind + "_" + s_tag(s) + ".txt");
          if (!out) throw Error(ERR_IO, "cannot write matrix dump");
          write_matrix_triplets(out, m, s, kind);
        };
        dump(cell.prob.A, 'A');
        dump(cell.prob.B_int, 'B');
        dump(cell.prob.M, 'M');
        std::printf("s=%s: wrote matA/matB/matM (%d nodes, %d interior)\n", s_tag(s).c_str(),
                    static_cast<int>(cell.prob.A.rows()), static_cast<int>(cell.prob.B_int.rows()));
      }
      return 0;
    }

    if (s_cmd->parsed() || j_cmd->parsed() || l_cmd->parsed() || w_cmd->parsed()) {
      const CommonOpts& o = s_cmd->parsed() ? s_opts
                            : j_cmd->parsed() ? j_opts
                            : l_cmd->parsed() ? l_opts
                                              : w_opts;
      ScenarioConfig cfg = to_config(o);
      if (w_cmd->parsed() && cfg.outputs.empty())
        throw Error(ERR_IO, "sweep requires --out");
      const std::vector<CellResult> cells = run_scenario(cfg);
      bool any_fail = false;
      for (const CellResult& c : cells) {
        if (!c.ok) {
          any_fail = true;
          std::fprintf(stderr, "E%d: s=%s: %s\n", c.error_code, s_tag(c.s).c_str(),
                       c.error_message.c_str());
          continue;
        }
        const HardyReport& r = c.report;
        std::printf("s=%s: mu=%.12g h=%.12g lambda1=%.12g lambda*_pencil=%.12g "
                    "lambda*_bisect=%.12g upper_bound=%s\n",
                    s_tag(c.s).c_str(), r.mu_discrete, r.h_reference, r.lambda1_discrete,
                    r.lambda_star_pencil, r.lambda_star_bisect,
                    r.upper_bound ? "true" : "false");
      }
      return any_fail ? 1 : 0;
    }

    if (v_cmd->parsed()) {
      const Domain d = load_domain_file(v_opts.domain_path);
      const ScenarioConfig cfg = to_config(v_opts);
      bool all_ok = true;
      for (double s : v_opts.s_values) {
        const Cell cell = build_cell(v_opts, s);
        FracParams p{d.dim(), s, 0.0};
        const DirectionalQuadrature q = d.dim() == 1
                                            ? DirectionalQuadrature::two_point()
                                            : DirectionalQuadrature::circle_trapezoid(400);
        GeomHardyVerifier verifier(d, cell.mesh, p, q, /*convex_specialization=*/false);
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double worst = 1e300;
        for (int t = 0; t < v_count; ++t) {
          Eigen::VectorXd u = Eigen::VectorXd::Zero(cell.mesh.nodes.size());
          for (size_t i = 0; i < cell.mesh.nodes.size(); ++i)
            if (!cell.mesh.boundary_node[i]) u[i] = gauss(rng);
          const double energy = u.dot(cell.prob.A * u);
          const double res = verifier.residual(cell.prob, u);
          worst = std::min(worst, res / energy);
        }
        const bool ok = worst >= -1e-6;
        all_ok = all_ok && ok;
        std::printf("s=%s: min residual / energy = %.3e over %d vectors -> %s\n",
                    s_tag(s).c_str(), worst, v_count, ok ? "ok" : "VIOLATION");
      }
      return all_ok ? 0 : 1;
    }

    if (k_cmd->parsed()) {
      const Domain d = load_domain_file(k_opts.domain_path);
      for (double s : k_opts.s_values) {
        FracParams p{d.dim(), s, 0.0};
        std::printf("s=%s: K(x) / delta^{2-2s} along the inward ray\n", s_tag(s).c_str());
        for (int k = k_lo; k <= k_hi; ++k) {
          const double delta = std::pow(2.0, -k);
          Point x(0, 0);
          if (d.kind() == Domain::Kind::Disk) {
            x = d.center() + Point(d.radius() - delta, 0.0);
          } else if (d.dim() == 1) {
            x = Point(d.interval_a() + delta, 0.0);
          } else {
            throw Error(ERR_DOMAIN_BAD_SHAPE, "appendix-k supports disk and interval domains");
          }
          const double K = delta_increment_energy(d, x, p);
          std::printf("  delta=2^-%d: K=%.10g ratio=%.10g\n", k, K,
                      K / std::pow(delta, 2.0 - 2.0 * s));
        }
      }
      return 0;
    }
  } catch (const Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "E1: %s\n", e.what());
    return 1;
  }
  return 0;
}
