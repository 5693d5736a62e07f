/*
 * SPDX-License-Identifier: Apache-2.0
 */

// ratspec command-line front end.
//
//   ratspec <command> --config cfg.json [--out dir] [--ref-n N] [--verbose]
//
// Commands: solve1d, colloc1d, eig1d, solve-nd, convergence, grid-dump.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
// Runs over the N list execute one after another; every file is written
// atomically.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ratspec/errors.hpp"
#include "ratspec/grids.hpp"
#include "ratspec/io.hpp"
#include "ratspec/mmgf.hpp"
#include "ratspec/solvers.hpp"

using namespace ratspec;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> ref_n;
  bool verbose = false;
};

struct Context {
  Options opt;
  json cfg;
  std::string provenance;

  void log(const std::string& msg) const {
    if (opt.verbose) std::cerr << "[ratspec] " << msg << '\n';
  }
  std::string path(const std::string& name) const { return (std::filesystem::path(opt.out_dir) / name).string(); }
  void write(const std::string& name, const CsvTable& t) const {
    write_file_atomic(path(name), t.render(provenance));
    log("wrote " + path(name));
  }
};

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  return get_or<T>(j, key, T{});
}

/// Built-in sources; in several dimensions they are functions of r = |x|,
/// except gauss_skew which uses x_0 for the skew factor.
std::function<double(double)> source_1d(const std::string& name) {
  if (name == "gauss_skew") return [](double x) { return std::exp(-x * x / 2.0) * (1.0 + x); };
  if (name == "alg2") return [](double x) { return std::pow(1.0 + x * x, -2.0); };
  if (name == "alg12") return [](double x) { return std::pow(1.0 + x * x, -1.2); };
  if (name == "alg18") return [](double x) { return std::pow(1.0 + x * x, -1.8); };
  if (name == "exp_radial") return [](double x) { return std::exp(-std::abs(x)); };
  if (name == "zero") return [](double) { return 0.0; };
  throw ConfigError("unknown source '" + name + "'");
}

std::function<double(const std::vector<double>&)> source_nd(const std::string& name) {
  auto radial = [](const std::vector<double>& x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return r2;
  };
  if (name == "gauss_skew") {
    return [=](const std::vector<double>& x) { return std::exp(-radial(x) / 2.0) * (1.0 + x[0]); };
  }
  if (name == "alg2") return [=](const std::vector<double>& x) { return std::pow(1.0 + radial(x), -2.0); };
  if (name == "alg12") return [=](const std::vector<double>& x) { return std::pow(1.0 + radial(x), -1.2); };
  if (name == "alg18") return [=](const std::vector<double>& x) { return std::pow(1.0 + radial(x), -1.8); };
  if (name == "exp_radial") return [=](const std::vector<double>& x) { return std::exp(-std::sqrt(radial(x))); };
  if (name == "zero") return [](const std::vector<double>&) { return 0.0; };
  throw ConfigError("unknown source '" + name + "'");
}

/// Closed-form unitary transform of a built-in source in d dimensions, where
/// one is available: F[exp(-r)] = 2^{d/2} Gamma((d+1)/2) / sqrt(pi) (1+|xi|^2)^{-(d+1)/2}.
std::function<double(const std::vector<double>&)> source_transform(const std::string& name, int d) {
  if (name == "exp_radial") {
    const double c = std::pow(2.0, d / 2.0) * std::tgamma((d + 1) / 2.0) / std::sqrt(M_PI);
    return [=](const std::vector<double>& xi) {
      double r2 = 0.0;
      for (double v : xi) r2 += v * v;
      return c * std::pow(1.0 + r2, -(d + 1) / 2.0);
    };
  }
  if (name == "zero") return [](const std::vector<double>&) { return 0.0; };
  throw ConfigError("no closed-form transform for source '" + name + "'");
}

BasisSpec basis_from(const json& cfg, int n) {
  const json b = cfg.contains("basis") ? cfg.at("basis") : json::object();
  BasisSpec spec;
  spec.lambda = get_or<double>(b, "lambda", 0.0);
  spec.scale = get_or<double>(b, "scale", 1.0);
  spec.n_max = n;
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

std::vector<int> n_list(const json& cfg) {
  const auto list = require<std::vector<int>>(cfg, "n_list");
  if (list.empty()) throw ConfigError("n_list is empty");
  for (size_t i = 0; i < list.size(); ++i) {
    if (list[i] < 0) throw ConfigError("n_list entries must be non-negative");
    if (i > 0 && list[i] <= list[i - 1]) throw ConfigError("n_list must be strictly increasing");
  }
  return list;
}

ProblemSpec problem_from(const json& cfg, int n) {
  ProblemSpec p;
  p.dimension = get_or<int>(cfg, "dimension", 1);
  p.basis = basis_from(cfg, n);
  for (const auto& t : require<json>(cfg, "terms")) {
    p.terms.push_back({require<double>(t, "alpha"), require<double>(t, "rho")});
  }
  const std::string src = require<std::string>(cfg, "source");
  if (p.dimension == 1) {
    p.source = source_1d(src);
  } else {
    p.source_nd = source_nd(src);
  }
  if (cfg.contains("reaction")) {
    // r(x) = constant + gaussian * exp(-x^2)
    const json& r = cfg.at("reaction");
    const double c = get_or<double>(r, "constant", 0.0);
    const double g = get_or<double>(r, "gaussian", 0.0);
    p.reaction = [=](double x) { return c + g * std::exp(-x * x); };
  }
  p.validate();
  return p;
}

std::optional<int> reference_n(const Context& ctx) {
  if (ctx.opt.ref_n) return ctx.opt.ref_n;
  if (ctx.cfg.contains("ref_n")) return get_or<int>(ctx.cfg, "ref_n", 0);
  return std::nullopt;
}

/// Least-squares slope of log(err) against log(N), as a positive order.
double fitted_order(const std::vector<int>& ns, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(ns.size());
  for (size_t i = 0; i < ns.size(); ++i) {
    const double lx = std::log(static_cast<double>(ns[i])), ly = std::log(errs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// <stem>.csv with local orders between consecutive rows and <stem>_fit.csv with
/// the least-squares order over all rows.
void write_error_tables(const Context& ctx, const std::string& stem, const std::vector<int>& ns,
                        const std::vector<double>& errs) {
  CsvTable t{{"N", "l2_error", "fitted_order"}, {}};
  for (size_t i = 0; i < ns.size(); ++i) {
    std::string order;
    if (i > 0 && errs[i] > 0 && errs[i - 1] > 0) {
      order = format_fixed(-std::log(errs[i] / errs[i - 1]) / std::log(static_cast<double>(ns[i]) / ns[i - 1]), 2);
    }
    t.add_row({std::to_string(ns[i]), format_double(errs[i]), order});
  }
  ctx.write(stem + ".csv", t);
  CsvTable f{{"n_min", "n_max", "fitted_order"}, {}};
  bool positive = ns.size() >= 2;
  for (double e : errs) positive = positive && e > 0.0;
  f.add_row({std::to_string(ns.front()), std::to_string(ns.back()),
             positive ? format_fixed(fitted_order(ns, errs), 2) : std::string()});
  ctx.write(stem + "_fit.csv", f);
}

void write_solution(const Context& ctx, const SpectralField& u, const MappedGrid& grid,
                    const std::vector<double>& nodal) {
  const int n = u.basis.n_max;
  CsvTable t{{"x", "u"}, {}};
  for (int j = 0; j < grid.size(); ++j) t.add_row({format_double(grid.x_nodes[j]), format_double(nodal[j])});
  ctx.write("solution_N" + std::to_string(n) + ".csv", t);
  write_file_atomic(ctx.path("solution_N" + std::to_string(n) + ".json"), field_to_json(u) + "\n");
}

enum class Solver { Galerkin, Colloc };

SpectralField run_1d(const Context& ctx, Solver solver, int n) {
  const ProblemSpec p = problem_from(ctx.cfg, n);
  if (p.dimension != 1) throw ConfigError("this command needs dimension 1");
  ctx.log("solving N = " + std::to_string(n));
  if (solver == Solver::Galerkin) {
    SpectralField u = galerkin_solve(p);
    const MappedGrid grid = mapped_grid(p.basis);
    std::vector<double> nodal;
    for (double x : grid.x_nodes) nodal.push_back(eval_field(u, x));
    write_solution(ctx, u, grid, nodal);
    return u;
  }
  CollocResult r = colloc_solve(p);
  write_solution(ctx, r.field, r.grid, r.nodal);
  return r.field;
}

void error_study(const Context& ctx, Solver solver, const std::vector<int>& ns, int ref) {
  std::vector<SpectralField> sols;
  for (int n : ns) sols.push_back(run_1d(ctx, solver, n));
  ctx.log("reference N = " + std::to_string(ref));
  const SpectralField u_ref = run_1d(ctx, solver, ref);
  std::vector<double> errs, proj;
  for (const auto& u : sols) {
    errs.push_back(l2_error(u, u_ref));
    proj.push_back(projected_l2_error(u, u_ref));
  }
  write_error_tables(ctx, "errors", ns, errs);
  if (get_or<bool>(ctx.cfg, "projected_errors", false)) write_error_tables(ctx, "errors_projected", ns, proj);
}

int cmd_solve(const Context& ctx, Solver solver) {
  const auto ns = n_list(ctx.cfg);
  const auto ref = reference_n(ctx);
  if (!ref) {
    for (int n : ns) run_1d(ctx, solver, n);
    return 0;
  }
  if (*ref <= ns.back()) throw ConfigError("reference N must exceed every entry of n_list");
  error_study(ctx, solver, ns, *ref);
  return 0;
}

int cmd_convergence(const Context& ctx) {
  auto ns = n_list(ctx.cfg);
  const std::string s = get_or<std::string>(ctx.cfg, "solver", "galerkin");
  Solver solver;
  if (s == "galerkin") {
    solver = Solver::Galerkin;
  } else if (s == "colloc") {
    solver = Solver::Colloc;
  } else {
    throw ConfigError("solver must be 'galerkin' or 'colloc'");
  }
  int ref;
  if (const auto r = reference_n(ctx)) {
    ref = *r;
    if (ref <= ns.back()) throw ConfigError("reference N must exceed every entry of n_list");
  } else {
    if (ns.size() < 2) throw ConfigError("convergence needs two N values or a reference N");
    ref = ns.back();
    ns.pop_back();
  }
  error_study(ctx, solver, ns, ref);
  return 0;
}

int cmd_eig1d(const Context& ctx) {
  const auto ns = n_list(ctx.cfg);
  const double alpha = require<double>(ctx.cfg, "alpha");
  const int k = get_or<int>(ctx.cfg, "k", 3);
  const double imag_tol = get_or<double>(ctx.cfg, "imag_tol", 1e-6);
  if (k < 1) throw ConfigError("k must be positive");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("alpha must lie in (0, 2]");
  for (int n : ns) {
    if (k > n + 1) throw ConfigError("k = " + std::to_string(k) + " exceeds the matrix size at N = " + std::to_string(n));
  }
  CsvTable t{{"N"}, {}};
  for (int i = 1; i <= k; ++i) t.header.push_back("lambda_" + std::to_string(i));
  t.header.push_back("discarded");
  for (int n : ns) {
    ctx.log("eigenvalues at N = " + std::to_string(n));
    const EigResult r = colloc_eig(basis_from(ctx.cfg, n), alpha, k, imag_tol);
    std::vector<std::string> row{std::to_string(n)};
    for (double v : r.values) row.push_back(format_double(v));
    row.push_back(std::to_string(r.discarded));
    t.add_row(row);
  }
  ctx.write("eigenvalues.csv", t);
  return 0;
}

int cmd_solve_nd(const Context& ctx) {
  const int n = require<int>(ctx.cfg, "n");
  const ProblemSpec p = problem_from(ctx.cfg, n);
  const int d = p.dimension;
  if (d > 3) throw ConfigError("solve-nd supports dimension <= 3");
  BasisSpec fb = p.basis;
  fb.scale = get_or<double>(ctx.cfg, "freq_scale", p.basis.scale);
  ProblemSpec q = p;
  if (d == 1) {
    const auto f = p.source;
    q.source_nd = [f](const std::vector<double>& x) { return f(x[0]); };
  }
  ctx.log("frequency-space solve, d = " + std::to_string(d) + ", N = " + std::to_string(n));
  const NdResult r = nd_colloc_solve(q, fb);
  const int m = r.freq_grid.size();

  CsvTable t{{}, {}};
  for (int a = 0; a < d; ++a) t.header.push_back("xi_" + std::to_string(a + 1));
  for (const char* c : {"f_hat_re", "f_hat_im", "u_hat_re", "u_hat_im"}) t.header.push_back(c);
  std::vector<double> xi(d);
  for (size_t idx = 0; idx < r.u_hat.size(); ++idx) {
    size_t rem = idx;
    for (int a = d - 1; a >= 0; --a) {
      xi[a] = r.freq_grid.x_nodes[rem % m];
      rem /= m;
    }
    std::vector<std::string> row;
    for (double v : xi) row.push_back(format_double(v));
    row.push_back(format_double(r.f_hat[idx].real()));
    row.push_back(format_double(r.f_hat[idx].imag()));
    row.push_back(format_double(r.u_hat[idx].real()));
    row.push_back(format_double(r.u_hat[idx].imag()));
    t.add_row(row);
  }
  ctx.write("u_hat.csv", t);

  // Slice along the first axis with the other coordinates at 0.
  const json sl = ctx.cfg.contains("slice") ? ctx.cfg.at("slice") : json::object();
  const double lo = get_or<double>(sl, "min", -10.0), hi = get_or<double>(sl, "max", 10.0);
  const int count = get_or<int>(sl, "count", 41);
  if (count < 2 || !(hi > lo)) throw ConfigError("slice needs count >= 2 and max > min");
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(lo + (hi - lo) * i / (count - 1));
  // evaluate() uses the same coordinates on every axis: append 0 and pick
  // the entries (i, 0, ..., 0).
  std::vector<double> coords = xs;
  coords.push_back(0.0);
  const auto all = r.evaluate(coords);
  const size_t width = coords.size();
  CsvTable s{{"x", "u_re", "u_im"}, {}};
  for (int i = 0; i < count; ++i) {
    size_t idx = static_cast<size_t>(i);
    for (int a = 1; a < d; ++a) idx = idx * width + (width - 1);
    s.add_row({format_double(xs[i]), format_double(all[idx].real()), format_double(all[idx].imag())});
  }
  ctx.write("slice.csv", s);

  if (ctx.cfg.contains("transform_check")) {
    const auto exact = source_transform(get_or<std::string>(ctx.cfg, "transform_check", ""), d);
    double worst = 0.0;
    for (size_t idx = 0; idx < r.f_hat.size(); ++idx) {
      size_t rem = idx;
      for (int a = d - 1; a >= 0; --a) {
        xi[a] = r.freq_grid.x_nodes[rem % m];
        rem /= m;
      }
      worst = std::max(worst, std::abs(r.f_hat[idx] - exact(xi)));
    }
    CsvTable c{{"N", "f_hat_max_error"}, {}};
    c.add_row({std::to_string(n), format_double(worst)});
    ctx.write("f_hat_check.csv", c);
  }
  return 0;
}

int cmd_grid_dump(const Context& ctx) {
  const int n = require<int>(ctx.cfg, "n");
  const MappedGrid g = mapped_grid(basis_from(ctx.cfg, n));
  CsvTable t{{"j", "t", "x", "weight"}, {}};
  for (int j = 0; j < g.size(); ++j) {
    t.add_row({std::to_string(j), format_double(g.t_nodes[j]), format_double(g.x_nodes[j]), format_double(g.weights[j])});
  }
  ctx.write("grid.csv", t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ratspec: rational spectral solvers for fractional Laplacian problems"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::string> names{"solve1d", "colloc1d", "eig1d", "solve-nd", "convergence", "grid-dump"};
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : names) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--config", opt.config_path, "JSON configuration file")->required();
    s->add_option("--out", opt.out_dir, "output directory");
    s->add_option("--ref-n", opt.ref_n, "reference resolution");
    s->add_flag("--verbose", opt.verbose, "progress messages on stderr");
    subs[name] = s;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    Context ctx;
    ctx.opt = opt;
    const std::string text = read_file(opt.config_path);
    try {
      ctx.cfg = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!ctx.cfg.is_object()) throw ConfigError("config must be a JSON object");
    json hashed = ctx.cfg;
    if (opt.ref_n) hashed["ref_n"] = *opt.ref_n;
    ctx.provenance = provenance_line(hashed.dump());
    std::filesystem::create_directories(opt.out_dir);

    if (subs["solve1d"]->parsed()) return cmd_solve(ctx, Solver::Galerkin);
    if (subs["colloc1d"]->parsed()) return cmd_solve(ctx, Solver::Colloc);
    if (subs["eig1d"]->parsed()) return cmd_eig1d(ctx);
    if (subs["solve-nd"]->parsed()) return cmd_solve_nd(ctx);
    if (subs["convergence"]->parsed()) return cmd_convergence(ctx);
    if (subs["grid-dump"]->parsed()) return cmd_grid_dump(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
