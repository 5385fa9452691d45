#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drops/config.hpp"
#include "drops/equilibrium.hpp"
#include "drops/errors.hpp"
#include "drops/experiments.hpp"
#include "drops/functional.hpp"

namespace {

namespace fs = std::filesystem;
using namespace drops;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Shape resolve_shape(const RunConfig& config) {
  const auto it = config.params.find("shape_file");
  if (it != config.params.end())
    return parse_shape_config(read_text_file(it->second));
  Ball b;
  b.dimension = config.param_int("dim", 3);
  b.radius = config.param_real("radius", 1.0);
  return b;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  out << text;
}

int run(const RunConfig& config) {
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  std::ostringstream results;
  std::string extra_name;
  std::string extra_body;

  if (config.command == "capacity" || config.command == "equilibrium") {
    const int dim = config.param_int("dim", 3);
    KernelSpec spec = KernelSpec::riesz(dim, config.param_real("alpha", 1.0));
    if (config.command == "equilibrium") {
      const auto fam = config.params.find("family");
      if (fam != config.params.end() && fam->second == "log") {
        if (dim != 2) throw ConfigError("logarithmic family needs dim = 2");
        spec = KernelSpec::logarithmic();
      } else if (fam != config.params.end() && fam->second != "riesz") {
        throw ConfigError("unknown family '" + fam->second + "'");
      }
    }
    const Shape shape = resolve_shape(config);
    const int nodes = config.param_int("nodes", 1000);
    SolveOptions opts;
    opts.tol = config.tol;
    const EquilibriumSolution sol = solve_equilibrium(
        spec, measure_from_surface(surface_quadrature(shape, nodes)), opts);
    write_solution_csv(results, sol);
    extra_name = "summary.json";
    extra_body = solution_summary_json(sol);
  } else if (config.command == "functional") {
    const int dim = config.param_int("dim", 3);
    const KernelSpec spec = KernelSpec::riesz(dim, config.param_real("alpha", 1.0));
    const FunctionalReport rep =
        evaluate_F(resolve_shape(config), spec, config.param_real("charge", 1.0),
                   config.param_int("nodes", 1000));
    SweepRecord rec;
    rec.param("charge", rep.charge);
    rec.param("alpha", spec.alpha);
    rec.value("perimeter", rep.perimeter);
    rec.value("riesz_energy", rep.riesz_energy);
    rec.value("total", rep.total);
    rec.value("deficit", rep.deficit);
    rec.value("normalized_charge", rep.normalized_charge);
    rec.value("el_spread", rep.el_spread);
    rec.value("el_violation", rep.el_violation);
    write_sweep_csv(results, {rec});
  } else if (config.command == "nonexistence") {
    const auto records = nonexistence_sweep(
        config.param_int("dim", 3), config.param_real("alpha", 1.0),
        config.param_real("mass", unit_ball_volume(config.param_int("dim", 3))),
        config.param_real("charge", 1.0), config.param_real("beta", 0.75),
        config.param_int_list("n_list", {16, 256, 4096}));
    write_sweep_csv(results, records);
  } else if (config.command == "splitting") {
    const SweepRecord rec = splitting_construction(
        config.param_int("dim", 3), config.param_real("alpha", 0.5),
        config.param_real("delta", 0.1), config.param_real("charge", 1.0));
    write_sweep_csv(results, {rec});
  } else if (config.command == "stability") {
    const auto records = stability_sweep(
        config.param_real("delta", 0.5),
        config.param_real_list("charges", {0.1}),
        config.param_int_list("modes", {2, 3, 4}),
        config.param_real_list("amplitudes", {0.01, 0.02, 0.05}),
        config.param_int("nodes", 1000));
    write_sweep_csv(results, records);
  } else if (config.command == "corner") {
    const SweepRecord rec = corner_blowup_study(config.param_real("side", 1.0),
                                                config.param_int("nodes", 1000));
    write_sweep_csv(results, {rec});
  } else if (config.command == "logchecks") {
    const auto records = log_divergence_and_scaling(
        config.param_real("radius", 1.0),
        config.param_real_list("separations", {8.0, 16.0, 32.0, 64.0}),
        config.param_real_list("lambdas", {0.5, 2.0, 4.0}));
    write_sweep_csv(results, records);
  } else {
    throw ConfigError("unknown command '" + config.command + "'");
  }

  write_file(out_dir / "results.csv", results.str());
  write_file(out_dir / "manifest.json", config_json(config));
  if (!extra_name.empty()) write_file(out_dir / extra_name, extra_body);
  std::cout << "wrote " << (out_dir / "results.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"charged-drop equilibrium toolkit"};
  std::string command, config_file, out_dir, shape_file;
  std::map<std::string, std::string> flag_params;
  std::vector<std::string> raw_params;
  bool have_seed = false, have_threads = false, have_tol = false, have_out = false;
  unsigned seed = 0;
  int threads = 0;
  double tol = 0.0;

  app.add_option("--command,-c", command, "command to run");
  app.add_option("--config", config_file, "key = value config file");
  auto* out_opt = app.add_option("--out,-o", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "rng seed");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads");
  auto* tol_opt = app.add_option("--tol", tol, "solver tolerance");
  app.add_option("--param,-p", raw_params,
                 "extra key=value parameter (repeatable)");
  for (const char* key : {"alpha", "dim", "charge", "delta", "nodes", "beta",
                          "mass", "radius", "side", "n_list", "modes",
                          "amplitudes", "charges", "separations", "lambdas",
                          "family"}) {
    app.add_option_function<std::string>(
        std::string("--") + key,
        [&flag_params, key](const std::string& v) { flag_params[key] = v; },
        std::string("parameter ") + key);
  }
  app.add_option("--shape-file", shape_file, "shape description file");

  try {
    app.parse(argc, argv);
    have_out = out_opt->count() > 0;
    have_seed = seed_opt->count() > 0;
    have_threads = threads_opt->count() > 0;
    have_tol = tol_opt->count() > 0;

    std::map<std::string, std::string> file_params;
    if (!config_file.empty())
      file_params = drops::parse_key_value_text(read_text_file(config_file));

    std::map<std::string, std::string> overrides = flag_params;
    for (const std::string& kv : raw_params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw drops::ConfigError("--param expects key=value, got '" + kv + "'");
      overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!command.empty()) overrides["command"] = command;
    if (have_out) overrides["out"] = out_dir;
    if (have_seed) overrides["seed"] = std::to_string(seed);
    if (have_threads) overrides["threads"] = std::to_string(threads);
    if (have_tol) {
      std::ostringstream ss;
      ss.precision(17);
      ss << tol;
      overrides["tol"] = ss.str();
    }
    if (!shape_file.empty()) overrides["shape_file"] = shape_file;

    const drops::RunConfig config = drops::resolve_config(file_params, overrides);
    return run(config);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const drops::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const drops::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const drops::ContractError& e) {
    std::cerr << "contract error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
