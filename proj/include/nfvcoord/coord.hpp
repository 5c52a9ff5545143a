#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "nfvcoord/options.hpp"
#include "nfvcoord/rng.hpp"
#include "nfvcoord/system.hpp"

namespace nfvcoord::coord {

struct CoordError : std::runtime_error {
  explicit CoordError(const std::string& what) : std::runtime_error(what) {}
};

struct Theta {
  double link = 1.0;
  double server = 1.0;
  double rel = 1.0;
};

struct AgentParams {
  double alpha = 0.2;
  double gamma = 0.9;
  double eps = 0.1;
  double penalty = -100.0;
  bool learn = true;
};

// weighted sum of engine scores; callers guarantee every constraint holds.
// The reliability term participates only when that option is on.
double cev(const sys::Evaluation& ev, const Theta& theta, const UseCaseOptions& opts);

// cev when everything is satisfied, otherwise the flat penalty
double reward(const sys::Evaluation& ev, const Theta& theta, const UseCaseOptions& opts,
              const AgentParams& params);

// tabular action values over hashed states; unseen pairs read as 0
class QTable {
 public:
  explicit QTable(int n_actions) : n_actions_(n_actions) {}

  double get(std::uint64_t state, int action) const;
  double max_value(std::uint64_t state) const;
  int greedy_action(std::uint64_t state) const;  // ties: lowest action index
  void add(std::uint64_t state, int action, double delta);

  int n_actions() const { return n_actions_; }
  std::size_t visited_states() const { return rows_.size(); }
  bool all_zero() const;

 private:
  int n_actions_ = 0;
  std::unordered_map<std::uint64_t, std::vector<double>> rows_;
};

// random action with probability eps, greedy otherwise
int epsilon_greedy(const QTable& q, std::uint64_t state, double eps, Rng& rng);

// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a))
void q_update(QTable& q, std::uint64_t s, int a, double r, std::uint64_t s_next, double alpha,
              double gamma);

enum class AgentKind { Vm, Ids };

struct RunConfig {
  int total_steps = 5000;   // global migration budget
  int episode_steps = 20;   // per-control-agent budget
  Theta theta;
  AgentParams params;
  bool random_mode = false;  // eps forced to 1 and learning dropped at both levels
};

struct EpisodeResult {
  double max_reward = 0.0;
  int steps = 0;
};

struct RunResult {
  sys::Allocation best;
  sys::Evaluation best_eval;
  double best_cev = 0.0;
  sys::Evaluation initial_eval;
  double initial_cev = 0.0;
  std::vector<double> trajectory;  // best cev after each global step
  int steps = 0;
  std::size_t q_states = 0;  // visited states across all tables
  bool q_all_zero = true;
  std::uint64_t eval_hits = 0;
  std::uint64_t eval_misses = 0;
};

// two-level loop: an instruction agent picks which control agent explores
// next; control agents try single-vnf migrations of their own metric
class Coordinator {
 public:
  Coordinator(const sys::SystemModel& model, const sys::Allocation& initial, const RunConfig& cfg,
              std::uint64_t seed);

  // full run; call once. Throws CoordError when the initial solution is
  // already violating (such scenarios never start).
  RunResult run();

  // one control-agent episode; exposed for tests and diagnostics
  EpisodeResult run_episode(AgentKind kind, int budget);

  // vnf of the given type picked for migration: lowest id on the
  // most-utilized (aggregate load) server hosting that type
  int migrating_vnf(AgentKind kind) const;

  const sys::Allocation& current() const { return current_; }
  const std::vector<AgentKind>& agents() const { return agents_; }
  QTable& table(AgentKind kind) { return kind == AgentKind::Vm ? q_vm_ : q_ids_; }

 private:
  const sys::SystemModel& model_;
  RunConfig cfg_;
  Rng rng_;
  sys::EvaluationCache cache_;
  std::vector<AgentKind> agents_;
  QTable q_instruction_;
  QTable q_vm_;
  QTable q_ids_;
  sys::Allocation current_;
  sys::Allocation best_;
  sys::Evaluation best_eval_;
  double best_cev_ = 0.0;
  std::vector<double> trajectory_;
};

// convenience wrapper
RunResult coordinate(const sys::SystemModel& model, const sys::Allocation& initial,
                     const RunConfig& cfg, std::uint64_t seed);

}  // namespace nfvcoord::coord
