// End-to-end tests driving the installed CLI binary through a shell.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::string kCli = VPSDP_CLI_PATH;
const std::string kData = VPSDP_DATA_DIR;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
  const int rc = pclose(pipe);
  return {WEXITSTATUS(rc), std::move(output)};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve with an oracle bound reports a zero gap") {
  const auto oracle = run_cli("oracle --input " + kData +
                              "/two_var.sparse --format sparse-min");
  REQUIRE_EQ(oracle.exit_code, 0);
  const auto lines = lines_of(oracle.output);
  REQUIRE_GE(lines.size(), 2);
  CHECK_EQ(lines[0], "-1");
  CHECK_EQ(lines[1], "01");

  const auto solve = run_cli("solve --input " + kData +
                             "/two_var.sparse --format sparse-min --lb " +
                             lines[0] + " --json");
  REQUIRE_EQ(solve.exit_code, 0);
  const json j = json::parse(solve.output);
  CHECK_EQ(j["status"], "converged");
  CHECK_EQ(j["objective"].get<double>(), -1.0);
  CHECK_EQ(j["gap_pct"].get<double>(), 0.0);
}

TEST_CASE("max-cut front end reports the cut value") {
  const auto res = run_cli("solve --input " + kData +
                           "/triangle.graph --format graph-maxcut --json");
  REQUIRE_EQ(res.exit_code, 0);
  const json j = json::parse(res.output);
  CHECK_EQ(j["objective"].get<double>(), 2.0);
  CHECK_EQ(j["sense"], "maximize");
}

TEST_CASE("omitted bound prints n/a and succeeds") {
  const auto res = run_cli("solve --input " + kData +
                           "/two_var.sparse --format sparse-min");
  CHECK_EQ(res.exit_code, 0);
  CHECK_NE(res.output.find("gap_pct    n/a"), std::string::npos);
  CHECK_NE(res.output.find("status     converged"), std::string::npos);
}

TEST_CASE("json and human outputs agree on the objective") {
  const std::string base =
      "solve --input " + kData + "/gka_style.bqp --format orlib-max --seed 3";
  const auto human = run_cli(base);
  const auto machine = run_cli(base + " --json");
  REQUIRE_EQ(human.exit_code, 0);
  REQUIRE_EQ(machine.exit_code, 0);

  double human_obj = 0.0;
  for (const auto& line : lines_of(human.output))
    if (line.rfind("objective", 0) == 0)
      human_obj = std::stod(line.substr(line.find_first_of("-0123456789")));
  const json j = json::parse(machine.output);
  CHECK_EQ(human_obj, j["objective"].get<double>());
}

TEST_CASE("index selects a problem inside multi-problem files") {
  const auto first = run_cli("solve --input " + kData +
                             "/gka_style.bqp --format orlib-max --json");
  const auto second = run_cli("solve --input " + kData +
                              "/gka_style.bqp --format orlib-max --index 1 --json");
  REQUIRE_EQ(first.exit_code, 0);
  REQUIRE_EQ(second.exit_code, 0);
  CHECK_EQ(json::parse(first.output)["n"].get<int>(), 10);
  CHECK_EQ(json::parse(second.output)["n"].get<int>(), 6);
  CHECK_EQ(run_cli("solve --input " + kData +
                   "/gka_style.bqp --format orlib-max --index 7")
               .exit_code,
           2);
}

TEST_CASE("solve exits 3 when the outer cap is hit") {
  const auto gen = run_cli("gen --n 15 --seed 5 --out " +
                           temp_file("vpsdp_cap.sparse").string());
  REQUIRE_EQ(gen.exit_code, 0);
  const auto res =
      run_cli("solve --input " + temp_file("vpsdp_cap.sparse").string() +
              " --format sparse-min --max-outer 1 --max-inner 1");
  CHECK_EQ(res.exit_code, 3);
  CHECK_NE(res.output.find("max_outer_reached"), std::string::npos);
}

TEST_CASE("flag errors exit 2") {
  CHECK_EQ(run_cli("solve --input x --format nonsense").exit_code, 2);
  CHECK_EQ(run_cli("solve").exit_code, 2);
  CHECK_EQ(
      run_cli("solve --input /missing.sparse --format sparse-min").exit_code,
      2);
}

TEST_CASE("oracle refuses oversized instances with exit 4") {
  const auto path = temp_file("vpsdp_big.sparse").string();
  REQUIRE_EQ(run_cli("gen --n 30 --seed 1 --out " + path).exit_code, 0);
  const auto res = run_cli("oracle --input " + path + " --format sparse-min");
  CHECK_EQ(res.exit_code, 4);
}

TEST_CASE("gen is byte-deterministic per seed") {
  const auto a = temp_file("vpsdp_gen_a.sparse").string();
  const auto b = temp_file("vpsdp_gen_b.sparse").string();
  const auto c = temp_file("vpsdp_gen_c.sparse").string();
  REQUIRE_EQ(run_cli("gen --n 10 --seed 9 --out " + a).exit_code, 0);
  REQUIRE_EQ(run_cli("gen --n 10 --seed 9 --out " + b).exit_code, 0);
  REQUIRE_EQ(run_cli("gen --n 10 --seed 10 --out " + c).exit_code, 0);
  CHECK_EQ(slurp(a), slurp(b));
  CHECK_NE(slurp(a), slurp(c));
}

TEST_CASE("gen then oracle then solve computes an end-to-end gap") {
  const auto path = temp_file("vpsdp_pipe.sparse").string();
  REQUIRE_EQ(run_cli("gen --n 12 --seed 21 --density 0.8 --out " + path)
                 .exit_code, 0);
  const auto oracle =
      run_cli("oracle --input " + path + " --format sparse-min");
  REQUIRE_EQ(oracle.exit_code, 0);
  const std::string lb = lines_of(oracle.output)[0];
  const auto solve = run_cli("solve --input " + path +
                             " --format sparse-min --lb " + lb + " --json");
  REQUIRE_EQ(solve.exit_code, 0);
  const json j = json::parse(solve.output);
  REQUIRE_FALSE(j["gap_pct"].is_null());
  CHECK_GE(j["gap_pct"].get<double>(), -1e-9);
}

TEST_CASE("trace CSV has the documented schema") {
  const auto trace = temp_file("vpsdp_trace.csv").string();
  const auto res = run_cli("solve --input " + kData +
                           "/gka_style.bqp --format orlib-max --trace " + trace);
  REQUIRE_EQ(res.exit_code, 0);
  const auto lines = lines_of(slurp(trace));
  REQUIRE_GE(lines.size(), 2);
  CHECK_EQ(lines[0],
           "outer,inner_iters,residual,infeasible_count,alpha,h_value,f_rounded");
  // Final row of a converged run has no infeasible coordinates.
  std::istringstream last(lines.back());
  std::string field;
  std::vector<std::string> fields;
  while (std::getline(last, field, ',')) fields.push_back(field);
  REQUIRE_EQ(fields.size(), 7);
  CHECK_EQ(fields[3], "0");
}

TEST_CASE("bench produces rows, aggregates and load_error resilience") {
  const auto out = temp_file("vpsdp_bench.csv").string();
  const auto res = run_cli("bench --manifest " + kData +
                           "/manifest.csv --repeats 2 --out " + out);
  REQUIRE_EQ(res.exit_code, 0);
  const auto lines = lines_of(slurp(out));
  REQUIRE_GE(lines.size(), 1 + 6);
  CHECK_EQ(lines[0], "instance,n,algo,seed,time_s,obj,lb,gap_pct,outer_iters,status");
  int data_rows = 0;
  for (size_t i = 1; i < lines.size() && !lines[i].empty(); ++i) {
    ++data_rows;
    CHECK_NE(lines[i].find("converged"), std::string::npos);
  }
  CHECK_EQ(data_rows, 3 * 2);

  // Aggregate block follows a blank line.
  bool found_aggregate = false;
  for (size_t i = 1; i + 1 < lines.size(); ++i)
    if (lines[i].empty() &&
        lines[i + 1] ==
            "instance,algo,mean_time_s,mean_gap_pct,mean_abs_gap_pct,runs")
      found_aggregate = true;
  CHECK(found_aggregate);

  // A missing file yields load_error rows but the run continues.
  const auto broken = temp_file("vpsdp_broken_manifest.csv");
  std::ofstream(broken) << "no_such_file.sparse,sparse-min,-1,ghost\n"
                        << "two_var.sparse,sparse-min,-1,two_var\n";
  // Paths resolve relative to the manifest, so copy the fixture next to it.
  fs::copy_file(fs::path(kData) / "two_var.sparse",
                fs::temp_directory_path() / "two_var.sparse",
                fs::copy_options::overwrite_existing);
  const auto out2 = temp_file("vpsdp_bench2.csv").string();
  const auto res2 = run_cli("bench --manifest " + broken.string() +
                            " --repeats 1 --out " + out2);
  REQUIRE_EQ(res2.exit_code, 0);
  const auto lines2 = lines_of(slurp(out2));
  CHECK_NE(lines2[1].find("load_error"), std::string::npos);
  CHECK_NE(lines2[2].find("converged"), std::string::npos);
}

TEST_CASE("bench: empty manifest yields a header-only CSV") {
  const auto manifest = temp_file("vpsdp_empty_manifest.csv");
  std::ofstream(manifest) << "# nothing here\n";
  const auto out = temp_file("vpsdp_bench_empty.csv").string();
  const auto res =
      run_cli("bench --manifest " + manifest.string() + " --out " + out);
  REQUIRE_EQ(res.exit_code, 0);
  const auto lines = lines_of(slurp(out));
  REQUIRE_GE(lines.size(), 1);
  CHECK_EQ(lines[0], "instance,n,algo,seed,time_s,obj,lb,gap_pct,outer_iters,status");
}

TEST_CASE("bench rows are reproducible apart from timings") {
  const auto strip_time = [](const std::string& csv) {
    std::vector<std::string> rows;
    for (auto& line : lines_of(csv)) {
      std::vector<std::string> fields;
      std::istringstream ss(line);
      std::string f;
      while (std::getline(ss, f, ',')) fields.push_back(f);
      if (fields.size() == 10) fields[4] = "t";  // time_s column
      if (fields.size() == 6) fields[2] = "t";   // mean_time_s column
      std::string joined;
      for (size_t i = 0; i < fields.size(); ++i)
        joined += (i ? "," : "") + fields[i];
      rows.push_back(joined);
    }
    std::string all;
    for (auto& r : rows) all += r + "\n";
    return all;
  };

  const auto out_a = temp_file("vpsdp_bench_det_a.csv").string();
  const auto out_b = temp_file("vpsdp_bench_det_b.csv").string();
  const auto out_c = temp_file("vpsdp_bench_det_c.csv").string();
  const auto out_d = temp_file("vpsdp_bench_det_d.csv").string();
  const std::string base = "bench --manifest " + kData +
                           "/manifest.csv --repeats 2 --seed 5 --algo ppa,pabb";
  REQUIRE_EQ(run_cli(base + " --out " + out_a).exit_code, 0);
  REQUIRE_EQ(run_cli(base + " --out " + out_b).exit_code, 0);
  REQUIRE_EQ(run_cli(base + " --threads 3 --out " + out_c).exit_code, 0);
  CHECK_EQ(strip_time(slurp(out_a)), strip_time(slurp(out_b)));
  CHECK_EQ(strip_time(slurp(out_a)), strip_time(slurp(out_c)));

  // The VPSDP_THREADS environment variable caps parallelism the same way.
  {
    const std::string cmd = "VPSDP_THREADS=4 " + kCli + " " + base + " --out " +
                            out_d + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[256];
    while (fread(buf, 1, sizeof(buf), pipe) > 0) {}
    REQUIRE_EQ(WEXITSTATUS(pclose(pipe)), 0);
    CHECK_EQ(strip_time(slurp(out_a)), strip_time(slurp(out_d)));
  }

  // Seeds are enumerated from the base seed.
  bool saw5 = false, saw6 = false;
  for (const auto& line : lines_of(slurp(out_a))) {
    if (line.find(",5,") != std::string::npos) saw5 = true;
    if (line.find(",6,") != std::string::npos) saw6 = true;
  }
  CHECK(saw5);
  CHECK(saw6);
}

}  // TEST_SUITE
