// centrex: command line front end. Every subcommand prints a JSON document
// on stdout; sweeps also write CSV, JSON and .dat files to the output
// directory.
//
// exit codes: 0 ok, 1 usage, 2 search failed (NotFound / BracketInvalid),
// 3 I/O, 4 other runtime failure

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "centrex/errors.hpp"
#include "centrex/experiment.hpp"
#include "centrex/io.hpp"
#include "centrex/parallel.hpp"

using namespace centrex;
using nlohmann::json;

namespace {

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

ExperimentConfig config_or_default(const std::string& path) {
  ExperimentConfig c = path.empty() ? ExperimentConfig{} : load_config(path);
  apply_environment(c);
  set_threads(c.threads);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Central exponents of perturbed Anosov automorphisms of T^3"};
  app.require_subcommand(1);

  int k = 5;
  double amplitude = 0.3;
  double margin = 0.1;
  double radius = 0.06;
  int grid = 200;
  std::size_t seeds = 64;
  std::size_t iters = 20000;
  std::uint64_t seed = 1;
  double r_hi = 0.4;
  std::string config_path;
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = default)")
      ->check(CLI::NonNegativeNumber);

  auto* spectrum = app.add_subcommand("spectrum", "eigen-data of A_k");
  spectrum->add_option("--k", k)->required()->check(CLI::Range(5, 1 << 30));

  auto* constants = app.add_subcommand("constants", "cone constant chain");
  constants->add_option("--k", k)->required()->check(CLI::Range(5, 1 << 30));

  auto* ih = app.add_subcommand("ih", "ball average of log h^u");
  ih->add_option("--amplitude", amplitude)->required();
  ih->add_option("--margin", margin);
  ih->add_option("--grid", grid, "midpoint cells per axis");

  auto* certify = app.add_subcommand("certify", "cone certificate of f_{k,r}");
  certify->add_option("--k", k)->required()->check(CLI::Range(5, 1 << 30));
  certify->add_option("--amplitude", amplitude)->required();
  certify->add_option("--radius", radius)->required();
  certify->add_option("--margin", margin);

  auto* lyapunov = app.add_subcommand("lyapunov", "Lyapunov spectrum of f_{k,r}");
  lyapunov->add_option("--k", k)->required()->check(CLI::Range(5, 1 << 30));
  lyapunov->add_option("--amplitude", amplitude)->required();
  lyapunov->add_option("--radius", radius)->required();
  lyapunov->add_option("--margin", margin);
  lyapunov->add_option("--seeds", seeds)->check(CLI::Range(2, 1 << 20));
  lyapunov->add_option("--iters", iters)->check(CLI::PositiveNumber);
  lyapunov->add_option("--seed", seed);

  auto* sweep = app.add_subcommand("sweep", "sweep over k");
  sweep->add_option("--config", config_path)->required();

  auto* positive = app.add_subcommand("find-positive",
                                      "search a positive central exponent");
  positive->add_option("--config", config_path);

  auto* r0 = app.add_subcommand("find-r0", "radius where sigma_c vanishes");
  r0->add_option("--k", k)->required()->check(CLI::Range(5, 1 << 30));
  r0->add_option("--amplitude", amplitude)->required();
  r0->add_option("--rhi", r_hi)->required();
  r0->add_option("--config", config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    set_threads(threads);
    if (*spectrum) {
      print(to_json(solve_spectrum(k)));
    } else if (*constants) {
      print(to_json(complete_constants(cone_constants(solve_spectrum(k)))));
    } else if (*ih) {
      QuadratureSpec q;
      q.grid = grid;
      print(to_json(I_of_h(BumpMap(amplitude, margin), q)));
    } else if (*certify) {
      ExperimentConfig c;
      c.margin = margin;
      const PerturbedDiffeo f = make_diffeo(c, k, amplitude, radius);
      const ConeConstants cc =
          complete_constants(cone_constants(f.spectral()));
      print(to_json(certify_perturbed(f, cc)));
    } else if (*lyapunov) {
      ExperimentConfig c;
      c.margin = margin;
      const PerturbedDiffeo f = make_diffeo(c, k, amplitude, radius);
      print(to_json(lyapunov_mc(f, seeds, iters, seed)));
    } else if (*sweep) {
      const ExperimentConfig c = config_or_default(config_path);
      const SweepTable table = sweep_k(c);
      json written = json::array();
      for (Format fmt : {Format::csv, Format::json, Format::dat}) {
        for (const auto& p : emit(table, fmt, c.out_dir, c.stem)) {
          written.push_back(p);
        }
      }
      print({{"rows", table.size()}, {"written", written}});
    } else if (*positive) {
      print(to_json(find_positive_example(config_or_default(config_path))));
    } else if (*r0) {
      const ExperimentConfig c = config_or_default(config_path);
      print(to_json(find_r0(k, amplitude, r_hi, c)));
    }
  } catch (const NotFound& e) {
    std::cerr << "not found: " << e.what() << '\n';
    return 2;
  } catch (const BracketInvalid& e) {
    std::cerr << "bracket invalid: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
