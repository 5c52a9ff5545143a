#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfvcoord/coord.hpp"
#include "nfvcoord/scenario.hpp"

namespace nfvcoord::harness {

struct HarnessError : std::runtime_error {
  explicit HarnessError(const std::string& what) : std::runtime_error(what) {}
};

// every requested seed lost its scenario to screening; callers usually map
// this to a dedicated exit status
struct AllRejected : HarnessError {
  explicit AllRejected(const std::string& what) : HarnessError(what) {}
};

struct ExperimentConfig {
  int case_id = 12;
  int n_vn = 20;
  std::vector<std::uint64_t> seeds = {1};
  std::string mode = "rl";  // rl | random
  int total_steps = 5000;
  int episode_steps = 20;
  coord::Theta theta;
  double eps = 0.1;
  double alpha = 0.2;
  double gamma = 0.9;
  double penalty = -100.0;
  std::string out_dir;        // empty: keep results in memory only
  bool fixed_initial = true;  // one shared scenario; otherwise one per seed
  std::uint64_t scenario_seed = 1;
  std::string topology_file;  // optional custom backbone
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::string mode;
  double initial_cev = 0.0;
  double best_cev = 0.0;
  double u_link = 0.0;    // best solution's components
  double u_server = 0.0;
  double r_total = 0.0;
  int steps = 0;
  double seconds = 0.0;
  double initial_u_link = 0.0;
  double initial_u_server = 0.0;
  double initial_r_total = 0.0;
  std::vector<double> trajectory;
};

// builds the scenario(s), runs every seed, writes CSVs into out_dir when
// set. Seeds whose scenario chain is fully rejected are skipped; an empty
// result set raises HarnessError.
std::vector<RunRecord> run(const ExperimentConfig& cfg);

// scenario build with the deterministic retry chain on rejection
std::optional<scenario::Scenario> build_with_retries(const ExperimentConfig& cfg,
                                                     std::uint64_t base_seed, int tries,
                                                     std::string* last_reason = nullptr);

struct OracleResult {
  sys::Allocation best;
  double best_cev = 0.0;
  bool found = false;
  std::uint64_t examined = 0;
};

// exhaustive sweep over every integral allocation; refuses instances with
// more than a million of them
OracleResult brute_force_oracle(const scenario::Scenario& sc, const coord::Theta& theta);

struct ConvergenceRow {
  long steps = 0;
  double best_cev = 0.0;
  double ratio = 0.0;
  bool applicable = true;
};

// progress toward a reference solution at fixed step milestones
std::vector<ConvergenceRow> convergence_report(const std::vector<double>& trajectory,
                                               double initial_cev, double suboptimal_cev);

void write_trajectory_csv(std::ostream& out, const RunRecord& r);
RunRecord read_trajectory_csv(std::istream& in, const std::string& name);
void write_summary_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_summary_csv(std::istream& in, const std::string& name);

std::string trajectory_file_name(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace nfvcoord::harness
