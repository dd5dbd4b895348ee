#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "cellless/errors.hpp"
#include "cellless/harness.hpp"
#include "cellless/serialization.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoFeasible = 3;

void print_records(const std::vector<cellless::RunRecord>& records) {
  std::printf("%-16s %6s %-8s %9s %14s %14s %12s %9s\n", "scenario", "seed", "solver",
              "feasible", "total_power_w", "min_rate_bps", "max_sar_wkg", "time_s");
  for (const auto& r : records) {
    if (!r.ok) {
      std::printf("%-16s %6llu %-8s  failed: %s\n", r.scenario_name.c_str(),
                  static_cast<unsigned long long>(r.seed), r.solver.c_str(), r.error.c_str());
      continue;
    }
    std::printf("%-16s %6llu %-8s %9s %14.6g %14.6g %12.6g %9.2f\n", r.scenario_name.c_str(),
                static_cast<unsigned long long>(r.seed), r.solver.c_str(),
                r.metrics.feasible ? "yes" : "no", r.metrics.total_power_w,
                r.metrics.min_rate(), r.metrics.max_sar(), r.wall_time_s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-power configuration of cell-less radio networks"};
  app.require_subcommand(1);

  cellless::ExperimentSpec spec;
  std::string solver = "both";
  std::string seeds = "1";
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Solve a scenario for a list of seeds");
  run->add_option("--scenario", spec.scenario, "Built-in name or scenario file")->required();
  run->add_option("--solver", solver, "ctm, maxrate or both")
      ->check(CLI::IsMember({"ctm", "maxrate", "both"}));
  run->add_option("--seeds", seeds, "Seed list, e.g. 1..10 or 1,2,5");
  run->add_option("--realizations", spec.n_realizations, "Channel realizations per evaluation")
      ->check(CLI::PositiveNumber);
  run->add_option("--workers", spec.workers, "Concurrent runs")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--delta-db", spec.ctm.delta_db, "Initial power step (dB)")
      ->check(CLI::PositiveNumber);
  run->add_option("--refine", spec.ctm.refinement_rounds, "Step halvings")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--kmeans-restarts", spec.ctm.kmeans_restarts, "k-means restarts")
      ->check(CLI::PositiveNumber);
  int check_realizations = 0;
  run->add_option("--check-realizations", check_realizations,
                  "Realizations per feasibility check (defaults to --realizations)");
  run->add_option("--sa-iterations", spec.anneal.iterations, "Annealing temperature steps")
      ->check(CLI::PositiveNumber);
  run->add_option("--sa-cooling", spec.anneal.cooling_factor, "Geometric cooling factor")
      ->check(CLI::Range(0.0, 1.0));
  run->add_option("--sa-temp", spec.anneal.initial_temp,
                  "Initial temperature in bit/s (0 calibrates)");
  run->add_option("--sa-moves", spec.anneal.moves_per_temp, "Moves per temperature step")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--dump-links", spec.dump_links, "Write the channel draws of every link");

  std::string plot_kind, plot_in, plot_out;
  auto* plot = app.add_subcommand("plot", "Emit tabular plot data from a results directory");
  plot->add_option("--kind", plot_kind, "power-bars, rate-cdf, sar-cdf, rate-map or sar-map")
      ->required()
      ->check(CLI::IsMember({"power-bars", "rate-cdf", "sar-cdf", "rate-map", "sar-map"}));
  plot->add_option("--in", plot_in, "Results directory")->required();
  plot->add_option("--out", plot_out, "Output file")->required();

  std::string validate_path;
  std::uint64_t validate_seed = 1;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", validate_path, "Built-in name or scenario file")->required();
  validate->add_option("--seed", validate_seed, "Placement seed for templates");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      spec.solver = cellless::solver_choice_from_string(solver);
      spec.seeds = cellless::parse_seeds(seeds);
      if (!out_dir.empty()) spec.out_dir = out_dir;
      spec.ctm.realizations_per_check =
          check_realizations > 0 ? check_realizations : spec.n_realizations;
      const auto records = cellless::run_experiment(spec);
      print_records(records);
      for (const auto& r : records) {
        if (r.no_feasible) return kExitNoFeasible;
      }
      for (const auto& r : records) {
        if (!r.ok) return 1;
      }
      return kExitOk;
    }
    if (*plot) {
      cellless::emit_plot_data(cellless::load_records(plot_in), plot_kind, plot_out);
      return kExitOk;
    }
    if (*validate) {
      const auto s = cellless::scenario_instance(validate_path, validate_seed);
      std::printf("%s: valid (%zu PoAs, %zu users, %zu humans)\n", s.name.c_str(), s.poas.size(),
                  s.users.size(), s.humans.size());
      return kExitOk;
    }
  } catch (const cellless::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const cellless::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const cellless::PlacementError& e) {
    std::cerr << "placement error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const cellless::NoFeasibleSolution& e) {
    std::cerr << e.what() << "\n";
    return kExitNoFeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
