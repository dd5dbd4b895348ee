#include "cellless/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cellless/errors.hpp"
#include "cellless/parallel.hpp"
#include "cellless/serialization.hpp"

namespace cellless {

namespace fs = std::filesystem;

SolverChoice solver_choice_from_string(std::string_view s) {
  if (s == "ctm") return SolverChoice::Ctm;
  if (s == "maxrate") return SolverChoice::MaxRate;
  if (s == "both") return SolverChoice::Both;
  throw std::invalid_argument("unknown solver '" + std::string(s) + "'");
}

Scenario scenario_instance(const std::string& name_or_path, std::uint64_t seed) {
  if (is_builtin(name_or_path)) return builtin_scenario(name_or_path, seed);
  Scenario s = load_scenario(name_or_path);
  if (s.name.empty()) s.name = fs::path(name_or_path).stem().string();
  if (s.placement && s.users.empty() && s.humans.empty()) s = generate_placements(s, seed);
  return s;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const auto dots = part.find("..");
    try {
      if (dots == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dots));
        const auto hi = std::stoull(part.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("empty range");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad seed list '" + text + "'");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("seed list is empty");
  return seeds;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Task {
  std::size_t seed_index;
  std::string solver;
};

RunRecord run_one(const ExperimentSpec& spec, std::shared_ptr<const Scenario> scenario,
                  std::uint64_t seed, const std::string& solver) {
  RunRecord rec;
  rec.scenario_name = scenario->name;
  rec.seed = seed;
  rec.solver = solver;
  rec.scenario = scenario;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (solver == "ctm") {
      CtmConfig c = spec.ctm;
      c.seed = seed;
      c.workers = 1;
      auto r = solve_ctm(*scenario, c);
      rec.solution = std::move(r.solution);
      rec.metrics = std::move(r.metrics);
    } else {
      AnnealConfig c = spec.anneal;
      c.seed = seed;
      c.n_realizations = spec.n_realizations;
      c.workers = 1;
      auto r = solve_maxrate(*scenario, c);
      rec.solution = std::move(r.solution);
      rec.metrics = std::move(r.metrics);
    }
    rec.ok = true;
  } catch (const NoFeasibleSolution& e) {
    rec.error = e.what();
    rec.no_feasible = true;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

fs::path run_dir(const fs::path& out, const RunRecord& r) {
  return out / r.scenario_name / std::to_string(r.seed) / r.solver;
}

std::string error_summary(const RunRecord& r) {
  std::ostringstream os;
  os << "{\n  \"scenario\": \"" << r.scenario_name << "\",\n  \"seed\": " << r.seed
     << ",\n  \"solver\": \"" << r.solver << "\",\n  \"feasible\": false,\n  \"error\": ";
  std::string escaped;
  for (char c : r.error) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += c;
  }
  os << '"' << escaped << "\"\n}\n";
  return os.str();
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
  if (spec.seeds.empty()) throw std::invalid_argument("no seeds given");
  std::vector<std::shared_ptr<const Scenario>> instances;
  for (auto seed : spec.seeds) {
    instances.push_back(std::make_shared<const Scenario>(scenario_instance(spec.scenario, seed)));
  }
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    if (spec.solver != SolverChoice::MaxRate) tasks.push_back({i, "ctm"});
    if (spec.solver != SolverChoice::Ctm) tasks.push_back({i, "maxrate"});
  }
  std::vector<RunRecord> records(tasks.size());
  parallel_for(tasks.size(), spec.workers, [&](std::size_t t) {
    const auto& task = tasks[t];
    records[t] = run_one(spec, instances[task.seed_index], spec.seeds[task.seed_index], task.solver);
  });

  if (spec.out_dir) {
    const fs::path& out = *spec.out_dir;
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
      const auto& s = *instances[i];
      const fs::path seed_dir = out / s.name / std::to_string(spec.seeds[i]);
      write_file(seed_dir / "scenario.json", scenario_to_json(s));
      if (spec.dump_links) {
        Evaluator ev(s, {spec.seeds[i], spec.n_realizations, spec.workers});
        write_file(seed_dir / "links.json", links_to_json(ev));
      }
    }
    std::string timing = "scenario,seed,solver,wall_time_s\n";
    for (const auto& r : records) {
      const fs::path dir = run_dir(out, r);
      if (r.ok) {
        write_file(dir / "solution.json", solution_to_json(r.solution));
        write_file(dir / "metrics.csv", metrics_to_csv(r.metrics, *r.scenario));
        write_file(dir / "summary.json",
                   summary_to_json(r.metrics, r.scenario_name, r.seed, r.solver));
      } else {
        write_file(dir / "summary.json", error_summary(r));
      }
      timing += r.scenario_name + "," + std::to_string(r.seed) + "," + r.solver + "," +
                format_double(r.wall_time_s) + "\n";
    }
    write_file(out / "aggregate.csv", aggregate_csv(records));
    // Wall times vary between runs; kept apart from the reproducible files.
    write_file(out / "timing.csv", timing);
  }
  return records;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(values.size() - 1, lo + 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

std::string aggregate_csv(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[{r.scenario_name, r.solver}].push_back(&r);
  std::string out =
      "scenario,solver,runs,ok_runs,feasible_runs,median_total_power_w,p10_total_power_w,"
      "p90_total_power_w,median_min_rate_bps,median_max_sar_wkg\n";
  for (const auto& [key, runs] : groups) {
    std::vector<double> power, rate, sar;
    int ok = 0, feasible = 0;
    for (const auto* r : runs) {
      if (!r->ok) continue;
      ++ok;
      if (r->metrics.feasible) ++feasible;
      power.push_back(r->metrics.total_power_w);
      if (!r->metrics.user_rate_bps.empty()) rate.push_back(r->metrics.min_rate());
      sar.push_back(r->metrics.max_sar());
    }
    out += key.first + "," + key.second + "," + std::to_string(runs.size()) + "," +
           std::to_string(ok) + "," + std::to_string(feasible) + "," +
           format_double(percentile(power, 0.5)) + "," + format_double(percentile(power, 0.1)) +
           "," + format_double(percentile(power, 0.9)) + "," +
           format_double(percentile(rate, 0.5)) + "," + format_double(percentile(sar, 0.5)) +
           "\n";
  }
  return out;
}

std::vector<RunRecord> load_records(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<RunRecord> records;
  std::vector<fs::path> scenario_dirs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory()) scenario_dirs.push_back(e.path());
  }
  std::sort(scenario_dirs.begin(), scenario_dirs.end());
  for (const auto& sd : scenario_dirs) {
    std::vector<std::pair<std::uint64_t, fs::path>> seed_dirs;
    for (const auto& e : fs::directory_iterator(sd)) {
      if (e.is_directory() && fs::exists(e.path() / "scenario.json")) {
        seed_dirs.emplace_back(std::stoull(e.path().filename().string()), e.path());
      }
    }
    std::sort(seed_dirs.begin(), seed_dirs.end());
    for (const auto& [seed, path] : seed_dirs) {
      auto scenario = std::make_shared<const Scenario>(load_scenario(path / "scenario.json"));
      for (const char* solver : {"ctm", "maxrate"}) {
        const fs::path run = path / solver;
        if (!fs::exists(run / "summary.json")) continue;
        RunRecord r;
        r.scenario_name = sd.filename().string();
        r.seed = seed;
        r.solver = solver;
        r.scenario = scenario;
        if (fs::exists(run / "metrics.csv")) {
          r.metrics = parse_metrics(read_file(run / "metrics.csv"), read_file(run / "summary.json"));
          r.solution = parse_solution(read_file(run / "solution.json"));
          r.ok = true;
        } else {
          r.error = "run failed";
        }
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

namespace {

std::string cdf_rows(const std::map<std::string, std::vector<double>>& by_solver) {
  std::string out;
  for (const auto& [solver, values] : by_solver) {
    auto v = values;
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += solver + "," + format_double(v[i]) + "," +
             format_double(static_cast<double>(i + 1) / static_cast<double>(v.size())) + "\n";
    }
  }
  return out;
}

}  // namespace

std::string plot_data(const std::vector<RunRecord>& records, const std::string& kind) {
  if (records.empty()) throw std::invalid_argument("no records to plot");
  std::string out;
  if (kind == "power-bars") {
    out = "solver,seed,poa,power_dbm,power_w\n";
    for (const auto& r : records) {
      if (!r.ok) continue;
      const std::string prefix = r.solver + "," + std::to_string(r.seed) + ",";
      for (const auto& [id, dbm] : r.metrics.poa_power_dbm) {
        out += prefix + std::to_string(id) + "," + format_double(dbm) + "," +
               format_double(dbm_to_watts(dbm)) + "\n";
      }
      out += prefix + "total," + format_double(watts_to_dbm(r.metrics.total_power_w)) + "," +
             format_double(r.metrics.total_power_w) + "\n";
    }
  } else if (kind == "rate-cdf" || kind == "sar-cdf") {
    const bool rate = kind == "rate-cdf";
    out = rate ? "solver,rate_bps,cdf\n" : "solver,sar_wkg,cdf\n";
    std::map<std::string, std::vector<double>> by_solver;
    for (const auto& r : records) {
      if (!r.ok) continue;
      const auto& v = rate ? r.metrics.user_rate_bps : r.metrics.human_sar_wkg;
      by_solver[r.solver].insert(by_solver[r.solver].end(), v.begin(), v.end());
    }
    out += cdf_rows(by_solver);
  } else if (kind == "rate-map") {
    out = "solver,seed,user,x,y,rate_bps\n";
    for (const auto& r : records) {
      if (!r.ok) continue;
      for (std::size_t i = 0; i < r.metrics.user_ids.size(); ++i) {
        const auto& u = r.scenario->user(r.metrics.user_ids[i]);
        out += r.solver + "," + std::to_string(r.seed) + "," + std::to_string(u.id) + "," +
               format_double(u.position.x) + "," + format_double(u.position.y) + "," +
               format_double(r.metrics.user_rate_bps[i]) + "\n";
      }
    }
  } else if (kind == "sar-map") {
    out = "solver,seed,human,x,y,phantom,sar_wkg\n";
    for (const auto& r : records) {
      if (!r.ok) continue;
      for (std::size_t i = 0; i < r.metrics.human_ids.size(); ++i) {
        const auto& h = r.scenario->humans[i];
        out += r.solver + "," + std::to_string(r.seed) + "," + std::to_string(h.id) + "," +
               format_double(h.position.x) + "," + format_double(h.position.y) + "," +
               h.phantom + "," + format_double(r.metrics.human_sar_wkg[i]) + "\n";
      }
    }
  } else {
    throw std::invalid_argument("unknown plot kind '" + kind + "'");
  }
  return out;
}

void emit_plot_data(const std::vector<RunRecord>& records, const std::string& kind,
                    const fs::path& out) {
  const auto text = plot_data(records, kind);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out.string());
  f << text;
}

}  // namespace cellless
