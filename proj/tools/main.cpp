// Command-line front end: solve single instances, sweep benchmark manifests,
// run the enumeration oracle and generate random instances.
//
// Exit codes: 0 success/converged, 2 flag or parse errors, 3 solver stopped
// at the outer iteration cap (report still printed), 4 oracle size refusal.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vpsdp/driver.hpp"
#include "vpsdp/instances.hpp"
#include "vpsdp/oracle.hpp"

namespace {

using vpsdp::detail::format_double;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitMaxOuter = 3;
constexpr int kExitOracleRefusal = 4;

struct InstanceArgs {
  std::string input;
  std::string format_tag;
  int index = 0;
  bool diag_to_linear = false;
};

void add_instance_flags(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--input", args.input, "Instance file")->required();
  cmd->add_option("--format", args.format_tag, "Input format")
      ->required()
      ->check(CLI::IsMember({"sparse-min", "orlib-max", "graph-maxcut"}));
  cmd->add_option("--index", args.index,
                  "Problem index inside a multi-problem file (0-based)");
  cmd->add_flag("--diag-to-linear", args.diag_to_linear,
                "Read diagonal sparse entries as linear coefficients");
}

vpsdp::QuadraticInstance load_one(const InstanceArgs& args) {
  auto all = vpsdp::load_file(args.input, vpsdp::parse_format_tag(args.format_tag),
                              args.diag_to_linear);
  if (args.index < 0 || static_cast<size_t>(args.index) >= all.size())
    throw vpsdp::ParseError("file holds " + std::to_string(all.size()) +
                            " problem(s), index " + std::to_string(args.index) +
                            " is out of range");
  return std::move(all[static_cast<size_t>(args.index)]);
}

struct SolverFlags {
  std::string algo = "pabb";
  double eta = 0.5;
  double epsilon = 1e-6;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
  double inner_tol = 1e-5;
  double outer_tol = 1e-5;
  int max_inner = 10000;
  int max_outer = 1000;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--algo", f.algo, "Subproblem engine")
      ->check(CLI::IsMember({"ppa", "pabb"}));
  cmd->add_option("--eta", f.eta, "Penalty step scaling, in (0,1)");
  cmd->add_option("--epsilon", f.epsilon, "Proximal diagonal floor");
  cmd->add_option("--sigma", f.sigma,
                  "Perturbation scale (default: 1e-4 * max|Q|)");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--inner-tol", f.inner_tol, "Subsolve KKT tolerance");
  cmd->add_option("--outer-tol", f.outer_tol, "Outer binary-distance tolerance");
  cmd->add_option("--max-inner", f.max_inner, "Inner iteration cap");
  cmd->add_option("--max-outer", f.max_outer, "Outer iteration cap");
}

vpsdp::SolverConfig to_config(const SolverFlags& f) {
  vpsdp::SolverConfig cfg;
  cfg.engine = f.algo == "ppa" ? vpsdp::Engine::Ppa : vpsdp::Engine::Pabb;
  cfg.eta = f.eta;
  cfg.epsilon = f.epsilon;
  cfg.sigma = f.sigma;
  cfg.seed = f.seed;
  cfg.inner_tol = f.inner_tol;
  cfg.outer_tol = f.outer_tol;
  cfg.max_inner = f.max_inner;
  cfg.max_outer = f.max_outer;
  return cfg;
}

double to_canonical(const vpsdp::QuadraticInstance& inst, double native) {
  return inst.native_sense() == vpsdp::Sense::Maximize ? -native : native;
}

// Signed GAP in the file's native sense; "n/a" when the bound is zero.
std::string gap_string(const vpsdp::QuadraticInstance& inst, double objective,
                       std::optional<double> lb) {
  if (!lb || *lb == 0.0) return "n/a";
  return format_double(
      vpsdp::gap_pct(to_canonical(inst, objective), to_canonical(inst, *lb)));
}

std::string bits_string(const std::vector<int>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

void write_trace_csv(const std::string& path,
                     const std::vector<vpsdp::IterateTrace>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
  out << "outer,inner_iters,residual,infeasible_count,alpha,h_value,f_rounded\n";
  for (const auto& t : trace)
    out << t.s << ',' << t.inner_iters << ',' << format_double(t.residual)
        << ',' << t.infeasible_count << ',' << format_double(t.alpha) << ','
        << format_double(t.h_value) << ',' << format_double(t.f_rounded)
        << '\n';
}

const char* status_name(vpsdp::SolveStatus s) {
  return s == vpsdp::SolveStatus::Converged ? "converged" : "max_outer_reached";
}

int cmd_solve(const InstanceArgs& iargs, const SolverFlags& sflags,
              std::optional<double> lb, const std::string& trace_path,
              bool as_json) {
  const vpsdp::QuadraticInstance inst = load_one(iargs);
  vpsdp::SolveReport report = vpsdp::solve(inst, to_config(sflags));
  if (lb && *lb != 0.0)
    report.gap_pct =
        vpsdp::gap_pct(to_canonical(inst, report.objective),
                       to_canonical(inst, *lb));

  if (!trace_path.empty()) write_trace_csv(trace_path, report.trace);

  const char* sense =
      inst.native_sense() == vpsdp::Sense::Maximize ? "maximize" : "minimize";
  if (as_json) {
    json j{{"instance", inst.name()},
           {"n", inst.n()},
           {"algo", sflags.algo},
           {"seed", sflags.seed},
           {"sense", sense},
           {"objective", report.objective},
           {"gap_pct", report.gap_pct ? json(*report.gap_pct) : json()},
           {"outer_iters", report.outer_iters},
           {"total_inner_iters", report.total_inner_iters},
           {"time_s", report.wall_time_s},
           {"status", status_name(report.status)},
           {"x", bits_string(report.x_binary)}};
    json rows = json::array();
    for (const auto& t : report.trace)
      rows.push_back({{"outer", t.s},
                      {"inner_iters", t.inner_iters},
                      {"residual", t.residual},
                      {"infeasible_count", t.infeasible_count},
                      {"alpha", t.alpha},
                      {"h_value", t.h_value},
                      {"f_rounded", t.f_rounded}});
    j["trace"] = std::move(rows);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "instance   " << (inst.name().empty() ? "-" : inst.name())
              << " (n=" << inst.n() << ", " << sense << ")\n"
              << "algo       " << sflags.algo << " seed=" << sflags.seed << "\n"
              << "objective  " << format_double(report.objective) << "\n"
              << "gap_pct    " << gap_string(inst, report.objective, lb) << "\n"
              << "iterations " << report.outer_iters << " outer, "
              << report.total_inner_iters << " inner\n"
              << "time_s     " << format_double(report.wall_time_s) << "\n"
              << "status     " << status_name(report.status) << "\n";
  }
  return report.status == vpsdp::SolveStatus::Converged ? kExitOk
                                                        : kExitMaxOuter;
}

// --- bench ---------------------------------------------------------------

struct ManifestRow {
  std::string file;
  std::string format_tag;
  std::optional<double> lb;  ///< In the file's native sense.
  std::string label;
};

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vpsdp::ParseError("cannot open manifest '" + path + "'");
  const auto base = std::filesystem::path(path).parent_path();

  std::vector<ManifestRow> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      const auto a = field.find_first_not_of(" \t\r");
      const auto b = field.find_last_not_of(" \t\r");
      fields.push_back(a == std::string::npos
                           ? std::string()
                           : field.substr(a, b - a + 1));
    }
    if (fields.size() < 3 || fields.size() > 4)
      throw vpsdp::ParseError("manifest rows are 'file,format,lb[,label]'",
                              lineno);
    ManifestRow row;
    row.file = (base / fields[0]).string();
    row.format_tag = fields[1];
    vpsdp::parse_format_tag(row.format_tag);  // validate early
    if (!fields[2].empty()) {
      try {
        row.lb = std::stod(fields[2]);
      } catch (const std::exception&) {
        throw vpsdp::ParseError("bad lb value '" + fields[2] + "'", lineno);
      }
    }
    row.label = fields.size() == 4 && !fields[3].empty()
                    ? fields[3]
                    : std::filesystem::path(fields[0]).stem().string();
    rows.push_back(std::move(row));
  }
  return rows;
}

int bench_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("VPSDP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

struct BenchRun {
  size_t manifest_idx;
  std::string algo;
  std::uint64_t seed;
};

int cmd_bench(const std::string& manifest_path,
              const std::vector<std::string>& algos, int repeats,
              std::uint64_t base_seed, const SolverFlags& sflags,
              const std::string& out_path, int threads_flag) {
  const auto manifest = read_manifest(manifest_path);

  struct Loaded {
    std::optional<vpsdp::QuadraticInstance> inst;
    std::string error;
  };
  std::vector<Loaded> loaded(manifest.size());
  for (size_t i = 0; i < manifest.size(); ++i) {
    try {
      InstanceArgs ia{manifest[i].file, manifest[i].format_tag, 0, false};
      loaded[i].inst = load_one(ia);
    } catch (const std::exception& e) {
      loaded[i].error = e.what();
    }
  }

  std::vector<BenchRun> runs;
  for (size_t i = 0; i < manifest.size(); ++i)
    for (const auto& algo : algos)
      for (int r = 0; r < repeats; ++r)
        runs.push_back({i, algo, base_seed + static_cast<std::uint64_t>(r)});

  std::vector<std::string> row_text(runs.size());
  struct Stat {
    double time_sum = 0.0, gap_sum = 0.0, abs_gap_sum = 0.0;
    int count = 0, gap_count = 0;
  };
  std::vector<Stat> stats(manifest.size() * algos.size());
  std::mutex stats_mutex;

  const auto run_one = [&](size_t ri) {
    const BenchRun& run = runs[ri];
    const ManifestRow& row = manifest[run.manifest_idx];
    std::ostringstream out;
    out << row.label << ',';
    if (!loaded[run.manifest_idx].inst) {
      out << 0 << ',' << run.algo << ',' << run.seed
          << ",n/a,n/a," << (row.lb ? format_double(*row.lb) : "n/a")
          << ",n/a,0,load_error";
      row_text[ri] = out.str();
      return;
    }
    const auto& inst = *loaded[run.manifest_idx].inst;
    SolverFlags f = sflags;
    f.algo = run.algo;
    f.seed = run.seed;
    const vpsdp::SolveReport rep = vpsdp::solve(inst, to_config(f));

    std::string gap = "n/a";
    double gap_value = 0.0;
    bool has_gap = false;
    if (row.lb && *row.lb != 0.0) {
      gap_value = vpsdp::gap_pct(to_canonical(inst, rep.objective),
                                 to_canonical(inst, *row.lb));
      gap = format_double(gap_value);
      has_gap = true;
    }
    out << inst.n() << ',' << run.algo << ',' << run.seed << ','
        << format_double(rep.wall_time_s) << ','
        << format_double(rep.objective) << ','
        << (row.lb ? format_double(*row.lb) : "n/a") << ',' << gap << ','
        << rep.outer_iters << ',' << status_name(rep.status);
    row_text[ri] = out.str();

    const size_t algo_idx = static_cast<size_t>(
        std::find(algos.begin(), algos.end(), run.algo) - algos.begin());
    std::lock_guard<std::mutex> lock(stats_mutex);
    Stat& st = stats[run.manifest_idx * algos.size() + algo_idx];
    st.time_sum += rep.wall_time_s;
    ++st.count;
    if (has_gap) {
      st.gap_sum += gap_value;
      st.abs_gap_sum += std::abs(gap_value);
      ++st.gap_count;
    }
  };

  const int threads = std::clamp<int>(
      bench_threads(threads_flag), 1,
      std::max<int>(1, static_cast<int>(runs.size())));
  if (threads <= 1) {
    for (size_t ri = 0; ri < runs.size(); ++ri) run_one(ri);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (size_t ri = next.fetch_add(1); ri < runs.size();
             ri = next.fetch_add(1))
          run_one(ri);
      });
    for (auto& th : pool) th.join();
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << "instance,n,algo,seed,time_s,obj,lb,gap_pct,outer_iters,status\n";
  for (const auto& r : row_text) out << r << '\n';

  // Aggregate block: per-instance, per-algo means.
  out << "\ninstance,algo,mean_time_s,mean_gap_pct,mean_abs_gap_pct,runs\n";
  for (size_t i = 0; i < manifest.size(); ++i)
    for (size_t a = 0; a < algos.size(); ++a) {
      const Stat& st = stats[i * algos.size() + a];
      out << manifest[i].label << ',' << algos[a] << ','
          << (st.count ? format_double(st.time_sum / st.count) : "n/a") << ','
          << (st.gap_count ? format_double(st.gap_sum / st.gap_count) : "n/a")
          << ','
          << (st.gap_count ? format_double(st.abs_gap_sum / st.gap_count)
                           : "n/a")
          << ',' << st.count << '\n';
    }
  return kExitOk;
}

// --- oracle / gen ---------------------------------------------------------

int cmd_oracle(const InstanceArgs& iargs) {
  const vpsdp::QuadraticInstance inst = load_one(iargs);
  const vpsdp::BruteForceResult res = vpsdp::brute_force(inst);
  std::cout << format_double(inst.to_native(res.value)) << "\n"
            << bits_string(res.x) << "\n";
  return kExitOk;
}

int cmd_gen(int n, std::uint64_t seed, double density,
            const std::vector<int>& diag_range,
            const std::vector<int>& offdiag_range, const std::string& out_path) {
  const auto inst = vpsdp::gen_random(
      n, seed, {diag_range.at(0), diag_range.at(1)},
      {offdiag_range.at(0), offdiag_range.at(1)}, density);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << vpsdp::serialize_sparse(inst);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-penalty solver for unconstrained binary quadratic programs"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  InstanceArgs solve_iargs;
  SolverFlags solve_sflags;
  std::optional<double> solve_lb;
  std::string solve_trace;
  bool solve_json = false;
  add_instance_flags(solve_cmd, solve_iargs);
  add_solver_flags(solve_cmd, solve_sflags);
  solve_cmd->add_option("--lb", solve_lb, "Reference bound (native sense)");
  solve_cmd->add_option("--trace", solve_trace, "Write per-outer CSV trace");
  solve_cmd->add_flag("--json", solve_json, "Emit the full report as JSON");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark manifest");
  std::string bench_manifest, bench_out;
  std::vector<std::string> bench_algos{"pabb"};
  int bench_repeats = 10;
  int bench_threads_flag = 0;
  SolverFlags bench_sflags;
  std::uint64_t bench_seed = 0;
  bench_cmd->add_option("--manifest", bench_manifest,
                        "CSV manifest: file,format,lb[,label]")
      ->required();
  bench_cmd->add_option("--algo", bench_algos, "Engines to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"ppa", "pabb"}));
  bench_cmd->add_option("--repeats", bench_repeats, "Seeds per instance")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench_seed, "Base seed");
  bench_cmd->add_option("--out", bench_out, "Output CSV path")->required();
  bench_cmd->add_option("--threads", bench_threads_flag,
                        "Worker count (overrides VPSDP_THREADS)");
  bench_cmd->add_option("--eta", bench_sflags.eta, "Penalty step scaling");
  bench_cmd->add_option("--sigma", bench_sflags.sigma, "Perturbation scale");
  bench_cmd->add_option("--inner-tol", bench_sflags.inner_tol, "");
  bench_cmd->add_option("--outer-tol", bench_sflags.outer_tol, "");
  bench_cmd->add_option("--max-inner", bench_sflags.max_inner, "");
  bench_cmd->add_option("--max-outer", bench_sflags.max_outer, "");

  // oracle
  auto* oracle_cmd =
      app.add_subcommand("oracle", "Exact optimum by enumeration (n <= 26)");
  InstanceArgs oracle_iargs;
  add_instance_flags(oracle_cmd, oracle_iargs);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  double gen_density = 1.0;
  std::vector<int> gen_diag{-100, 100}, gen_offdiag{-50, 50};
  std::string gen_out;
  gen_cmd->add_option("--n", gen_n, "Dimension")->required();
  gen_cmd->add_option("--seed", gen_seed, "RNG seed");
  gen_cmd->add_option("--density", gen_density, "Off-diagonal density in (0,1]");
  gen_cmd->add_option("--diag-range", gen_diag, "Diagonal value range")
      ->expected(2);
  gen_cmd->add_option("--offdiag-range", gen_offdiag, "Off-diagonal value range")
      ->expected(2);
  gen_cmd->add_option("--out", gen_out, "Output sparse-min file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_cmd)
      return cmd_solve(solve_iargs, solve_sflags, solve_lb, solve_trace,
                       solve_json);
    if (*bench_cmd)
      return cmd_bench(bench_manifest, bench_algos, bench_repeats, bench_seed,
                       bench_sflags, bench_out, bench_threads_flag);
    if (*oracle_cmd) return cmd_oracle(oracle_iargs);
    if (*gen_cmd)
      return cmd_gen(gen_n, gen_seed, gen_density, gen_diag, gen_offdiag,
                     gen_out);
  } catch (const vpsdp::EnumerationLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOracleRefusal;
  } catch (const vpsdp::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
