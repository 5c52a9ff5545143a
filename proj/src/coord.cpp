#include "nfvcoord/coord.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace nfvcoord::coord {

namespace {

std::uint64_t vector_key(const std::vector<int>& v) {
  std::uint64_t h = 0x1F83D9ABFB41BD6BULL;
  h = splitmix64(h ^ v.size());
  for (int x : v) h = splitmix64(h ^ (static_cast<std::uint64_t>(x) + 1));
  return h;
}

}  // namespace

double cev(const sys::Evaluation& ev, const Theta& theta, const UseCaseOptions& opts) {
  double v = theta.link * (1.0 - ev.u_link_max) + theta.server * (1.0 - ev.u_server_max);
  if (opts.with_reliability) v += theta.rel * ev.r_total;
  return v;
}

double reward(const sys::Evaluation& ev, const Theta& theta, const UseCaseOptions& opts,
              const AgentParams& params) {
  return ev.all_satisfied() ? cev(ev, theta, opts) : params.penalty;
}

double QTable::get(std::uint64_t state, int action) const {
  auto it = rows_.find(state);
  return it == rows_.end() ? 0.0 : it->second[static_cast<std::size_t>(action)];
}

double QTable::max_value(std::uint64_t state) const {
  auto it = rows_.find(state);
  if (it == rows_.end()) return 0.0;
  double best = it->second[0];
  for (double v : it->second) best = std::max(best, v);
  return best;
}

int QTable::greedy_action(std::uint64_t state) const {
  auto it = rows_.find(state);
  if (it == rows_.end()) return 0;
  int best = 0;
  for (int a = 1; a < n_actions_; ++a)
    if (it->second[static_cast<std::size_t>(a)] > it->second[static_cast<std::size_t>(best)])
      best = a;
  return best;
}

void QTable::add(std::uint64_t state, int action, double delta) {
  auto it = rows_.find(state);
  if (it == rows_.end())
    it = rows_.emplace(state, std::vector<double>(static_cast<std::size_t>(n_actions_), 0.0)).first;
  it->second[static_cast<std::size_t>(action)] += delta;
}

bool QTable::all_zero() const {
  for (const auto& [s, row] : rows_)
    for (double v : row)
      if (v != 0.0) return false;
  return true;
}

int epsilon_greedy(const QTable& q, std::uint64_t state, double eps, Rng& rng) {
  if (rng.uniform01() < eps) return static_cast<int>(rng.uniform_int(0, q.n_actions() - 1));
  return q.greedy_action(state);
}

void q_update(QTable& q, std::uint64_t s, int a, double r, std::uint64_t s_next, double alpha,
              double gamma) {
  const double dq = r + gamma * q.max_value(s_next) - q.get(s, a);
  q.add(s, a, alpha * dq);
}

Coordinator::Coordinator(const sys::SystemModel& model, const sys::Allocation& initial,
                         const RunConfig& cfg, std::uint64_t seed)
    : model_(model),
      cfg_(cfg),
      rng_(seed),
      cache_(model),
      q_instruction_(1),
      q_vm_(model.net.num_nodes),
      q_ids_(model.net.num_nodes),
      current_(initial) {
  if (cfg_.random_mode) {
    cfg_.params.eps = 1.0;
    cfg_.params.learn = false;
  }
  agents_.push_back(AgentKind::Vm);
  if (model_.options.with_ids && !model_.ids.empty()) agents_.push_back(AgentKind::Ids);
  q_instruction_ = QTable(static_cast<int>(agents_.size()));
}

int Coordinator::migrating_vnf(AgentKind kind) const {
  const int n = model_.net.num_nodes;
  std::vector<double> load(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < current_.vm_server.size(); ++i)
    load[static_cast<std::size_t>(current_.vm_server[i])] += model_.vm_sizes[i];
  for (std::size_t j = 0; j < current_.ids_server.size(); ++j)
    load[static_cast<std::size_t>(current_.ids_server[j])] += model_.ids_sizes[j];

  const auto& hosts = kind == AgentKind::Vm ? current_.vm_server : current_.ids_server;
  int from = -1;
  double from_util = -1.0;
  for (int s = 0; s < n; ++s) {
    if (std::find(hosts.begin(), hosts.end(), s) == hosts.end()) continue;
    const double cap = model_.net.server_capacity[static_cast<std::size_t>(s)];
    double util;
    if (cap > 0)
      util = load[static_cast<std::size_t>(s)] / cap;
    else
      util = load[static_cast<std::size_t>(s)] > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    if (util > from_util) {
      from_util = util;
      from = s;
    }
  }
  for (std::size_t v = 0; v < hosts.size(); ++v)
    if (hosts[v] == from) return static_cast<int>(v);
  throw CoordError("no vnf of the requested type");  // unreachable for vms
}

EpisodeResult Coordinator::run_episode(AgentKind kind, int budget) {
  QTable& q = table(kind);
  auto& own = kind == AgentKind::Vm ? current_.vm_server : current_.ids_server;
  EpisodeResult out;
  out.max_reward = -std::numeric_limits<double>::infinity();
  for (int step = 0; step < budget; ++step) {
    const std::uint64_t s = vector_key(own);
    const int action = epsilon_greedy(q, s, cfg_.params.eps, rng_);
    const int vnf = migrating_vnf(kind);
    sys::Allocation next = current_;
    (kind == AgentKind::Vm ? next.vm_server : next.ids_server)[static_cast<std::size_t>(vnf)] =
        action;
    const sys::Evaluation& ev = cache_.get(next);
    const double r = reward(ev, cfg_.theta, model_.options, cfg_.params);
    const bool end_state = !ev.all_satisfied();
    current_ = std::move(next);
    if (cfg_.params.learn)
      q_update(q, s, action, r, vector_key(own), cfg_.params.alpha, cfg_.params.gamma);
    out.max_reward = std::max(out.max_reward, r);
    if (r > best_cev_ && !end_state) {
      best_ = current_;
      best_eval_ = ev;
      best_cev_ = r;
    }
    trajectory_.push_back(best_cev_);
    ++out.steps;
    if (end_state) break;
  }
  return out;
}

RunResult Coordinator::run() {
  const sys::Evaluation init_ev = cache_.get(current_);
  if (!init_ev.all_satisfied()) throw CoordError("initial solution violates constraints");
  const double init_cev = cev(init_ev, cfg_.theta, model_.options);
  best_ = current_;
  best_eval_ = init_ev;
  best_cev_ = init_cev;
  trajectory_.clear();
  trajectory_.reserve(static_cast<std::size_t>(cfg_.total_steps));

  int t = 0;
  std::uint64_t s =
      static_cast<std::uint64_t>(rng_.uniform_int(0, static_cast<std::int64_t>(agents_.size()) - 1));
  while (t < cfg_.total_steps) {
    const int a = epsilon_greedy(q_instruction_, s, cfg_.params.eps, rng_);
    const int budget = std::min(cfg_.episode_steps, cfg_.total_steps - t);
    const EpisodeResult ep = run_episode(agents_[static_cast<std::size_t>(a)], budget);
    if (cfg_.params.learn)
      q_update(q_instruction_, s, a, ep.max_reward, static_cast<std::uint64_t>(a),
               cfg_.params.alpha, cfg_.params.gamma);
    s = static_cast<std::uint64_t>(a);
    t += ep.steps;
  }

  RunResult res;
  res.best = best_;
  res.best_eval = best_eval_;
  res.best_cev = best_cev_;
  res.initial_eval = init_ev;
  res.initial_cev = init_cev;
  res.trajectory = std::move(trajectory_);
  res.steps = t;
  res.q_states = q_instruction_.visited_states() + q_vm_.visited_states() + q_ids_.visited_states();
  res.q_all_zero = q_instruction_.all_zero() && q_vm_.all_zero() && q_ids_.all_zero();
  res.eval_hits = cache_.hits();
  res.eval_misses = cache_.misses();
  return res;
}

RunResult coordinate(const sys::SystemModel& model, const sys::Allocation& initial,
                     const RunConfig& cfg, std::uint64_t seed) {
  Coordinator c(model, initial, cfg, seed);
  return c.run();
}

}  // namespace nfvcoord::coord
