#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nfvcoord/harness.hpp"

namespace {

using nfvcoord::harness::ExperimentConfig;
using nfvcoord::harness::RunRecord;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void do_run(const ExperimentConfig& cfg) {
  std::vector<RunRecord> records = nfvcoord::harness::run(cfg);
  nfvcoord::harness::write_summary_csv(std::cout, records);
  if (!cfg.out_dir.empty())
    std::cerr << "wrote " << records.size() << " trajectory file(s) and summary.csv to "
              << cfg.out_dir << "\n";
}

void do_oracle(const ExperimentConfig& cfg) {
  std::string reason = "no scenario was attempted";
  auto sc = nfvcoord::harness::build_with_retries(cfg, cfg.scenario_seed, 100, &reason);
  if (!sc)
    throw nfvcoord::harness::AllRejected("every scenario candidate was rejected: " + reason);
  auto res = nfvcoord::harness::brute_force_oracle(*sc, cfg.theta);
  std::printf("examined=%llu\n", static_cast<unsigned long long>(res.examined));
  if (!res.found) {
    std::printf("no feasible allocation\n");
    return;
  }
  std::printf("best_cev=%.17g\n", res.best_cev);
  std::printf("vm_server=");
  for (std::size_t i = 0; i < res.best.vm_server.size(); ++i)
    std::printf(i ? ",%d" : "%d", res.best.vm_server[i]);
  std::printf("\nids_server=");
  for (std::size_t i = 0; i < res.best.ids_server.size(); ++i)
    std::printf(i ? ",%d" : "%d", res.best.ids_server[i]);
  std::printf("\n");
}

void do_report(const std::string& in_dir, bool has_subopt, double subopt) {
  namespace fs = std::filesystem;
  fs::path dir(in_dir);
  std::ifstream s(dir / "summary.csv");
  if (!s)
    throw nfvcoord::harness::HarnessError("missing " + (dir / "summary.csv").string());
  auto records = nfvcoord::harness::read_summary_csv(s, "summary.csv");

  std::map<std::string, std::vector<const RunRecord*>> by_mode;
  for (const RunRecord& r : records) {
    std::printf("seed=%llu mode=%s initial=%.4f best=%.4f gain=%.4f u_link=%.4f u_server=%.4f r=%.4f steps=%d secs=%.2f\n",
                static_cast<unsigned long long>(r.seed), r.mode.c_str(), r.initial_cev,
                r.best_cev, r.best_cev - r.initial_cev, r.u_link, r.u_server, r.r_total, r.steps,
                r.seconds);
    by_mode[r.mode].push_back(&r);
  }
  for (const auto& [mode, group] : by_mode) {
    std::vector<double> initial, best, gain;
    for (const RunRecord* r : group) {
      initial.push_back(r->initial_cev);
      best.push_back(r->best_cev);
      gain.push_back(r->best_cev - r->initial_cev);
    }
    std::printf("mode=%s runs=%zu median_initial=%.4f median_best=%.4f median_gain=%.4f\n",
                mode.c_str(), group.size(), median(initial), median(best), median(gain));
  }

  if (!has_subopt) return;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("trajectory_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    std::ifstream f(p);
    if (!f) throw nfvcoord::harness::HarnessError("cannot read " + p.string());
    RunRecord r = nfvcoord::harness::read_trajectory_csv(f, p.filename().string());
    std::printf("%s initial=%.4f subopt=%.4f\n", p.filename().string().c_str(), r.initial_cev,
                subopt);
    auto rows = nfvcoord::harness::convergence_report(r.trajectory, r.initial_cev, subopt);
    for (const auto& row : rows) {
      if (row.applicable)
        std::printf("  steps=%ld best=%.4f ratio=%.2f\n", row.steps, row.best_cev, row.ratio);
      else
        std::printf("  steps=%ld best=%.4f ratio=na\n", row.steps, row.best_cev);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical vnf migration experiments on a shared backbone"};
  app.require_subcommand(1);
  app.set_config("--config", "", "ini file with the same keys, flags win on conflict");

  ExperimentConfig cfg;
  std::vector<double> theta = {1.0, 1.0, 1.0};

  auto add_scenario_opts = [&](CLI::App* sub) {
    sub->add_option("--case", cfg.case_id, "use case 1-12")->check(CLI::Range(1, 12));
    sub->add_option("--vn", cfg.n_vn, "virtual network count")->check(CLI::PositiveNumber);
    sub->add_option("--scenario-seed", cfg.scenario_seed, "seed for the shared scenario build");
    sub->add_option("--topology", cfg.topology_file, "backbone file instead of the built-in one")
        ->check(CLI::ExistingFile);
    sub->add_option("--theta", theta, "link,server,reliability weights")
        ->delimiter(',')
        ->expected(3);
  };

  CLI::App* run = app.add_subcommand("run", "run the coordinator over seeds");
  add_scenario_opts(run);
  run->add_option("--seeds", cfg.seeds, "run seeds")->delimiter(',')->expected(-1);
  run->add_option("--mode", cfg.mode, "rl or random")->check(CLI::IsMember({"rl", "random"}));
  run->add_option("--steps", cfg.total_steps, "global migration budget")
      ->check(CLI::PositiveNumber);
  run->add_option("--episode", cfg.episode_steps, "per-agent episode budget")
      ->check(CLI::PositiveNumber);
  run->add_option("--eps", cfg.eps, "exploration rate");
  run->add_option("--alpha", cfg.alpha, "learning rate");
  run->add_option("--gamma", cfg.gamma, "discount factor");
  run->add_option("--penalty", cfg.penalty, "reward on constraint violation");
  run->add_option("--out", cfg.out_dir, "directory for trajectory and summary csvs");
  run->add_flag("--fixed-initial,!--no-fixed-initial", cfg.fixed_initial,
                "share one scenario across all seeds (default on)");

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive best allocation for a scenario");
  add_scenario_opts(oracle);

  CLI::App* report = app.add_subcommand("report", "summarize a results directory");
  std::string in_dir;
  double subopt = 0.0;
  report->add_option("--in", in_dir, "directory written by run --out")
      ->required()
      ->check(CLI::ExistingDirectory);
  CLI::Option* subopt_opt =
      report->add_option("--subopt", subopt, "reference cev for convergence ratios");

  try {
    app.parse(argc, argv);
    cfg.theta.link = theta[0];
    cfg.theta.server = theta[1];
    cfg.theta.rel = theta[2];
    if (run->parsed()) do_run(cfg);
    if (oracle->parsed()) do_oracle(cfg);
    if (report->parsed()) do_report(in_dir, subopt_opt->count() > 0, subopt);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const nfvcoord::harness::AllRejected& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
