// Runs the registered scenarios as acceptance criteria, one PASS/FAIL line each.
#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "geonet/scenarios.hpp"

namespace {

struct Criterion {
  int id;
  const char* scenario;
  double seconds;  // runtime limit
};

const Criterion kCriteria[] = {
    {1, "disk_widths", 5},          {2, "second_variation", 1},       {3, "sector_ls", 10},
    {4, "triangle_height", 60},     {5, "boundary_inequality", 10},   {6, "revolution_loop", 60},
    {7, "shortening_properties", 120}, {8, "network_audits", 30},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  std::string out = "acceptance_out";
  bool verbose = false;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  app.add_option("--out", out, "directory for scenario reports");
  app.add_flag("-v,--verbose", verbose, "print every row");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (const auto& c : kCriteria) {
    if (only && c.id != only) continue;
    geonet::ScenarioConfig cfg;
    cfg.name = c.scenario;
    cfg.output_dir = out;
    cfg.svg = true;
    auto t0 = std::chrono::steady_clock::now();
    geonet::ScenarioReport rep;
    std::string error;
    try {
      rep = geonet::run_scenario(cfg);
    } catch (const std::exception& e) {
      error = e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = dt < c.seconds;
    bool pass = error.empty() && rep.passed() && in_time;
    all = all && pass;
    std::printf("criterion %d %-22s %s  (%.2f s, limit %.0f s)\n", c.id, c.scenario, pass ? "PASS" : "FAIL", dt,
                c.seconds);
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    if (!in_time) std::printf("    runtime limit exceeded\n");
    for (const auto& row : rep.rows)
      if (verbose || !row.pass)
        std::printf("    %s %s: %.12g vs %.12g (tol %.3g)\n", row.pass ? "ok  " : "FAIL", row.quantity.c_str(),
                    row.computed, row.expected, row.tolerance);
    for (const auto& n : rep.notes)
      if (verbose || !pass) std::printf("    note: %s\n", n.c_str());
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
