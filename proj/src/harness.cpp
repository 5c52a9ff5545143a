#include "nfvcoord/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

namespace nfvcoord::harness {

namespace {

constexpr std::uint64_t kRetryStride = 0x9E3779B97F4A7C15ull;
const char* const kSummaryHeader = "seed,mode,initial_cev,best_cev,u_link,u_server,r_total,steps,seconds";

// shortest text form that reproduces the exact double on read-back
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw HarnessError(ctx + ": bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw HarnessError(ctx + ": bad integer '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& ctx) {
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw HarnessError(ctx + ": bad integer '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// reliability of the allocation even when the run itself did not track it;
// forcing the option on only adds the measurement, routing is unchanged
double measured_reliability(const sys::SystemModel& model, const sys::Allocation& alloc,
                            const sys::Evaluation& ev) {
  if (model.options.with_reliability) return ev.r_total;
  sys::SystemModel probe = model;
  probe.options.with_reliability = true;
  return sys::evaluate(probe, alloc).r_total;
}

RunRecord run_one(const ExperimentConfig& cfg, const scenario::Scenario& sc, std::uint64_t seed) {
  coord::RunConfig rc;
  rc.total_steps = cfg.total_steps;
  rc.episode_steps = cfg.episode_steps;
  rc.theta = cfg.theta;
  rc.params.alpha = cfg.alpha;
  rc.params.gamma = cfg.gamma;
  rc.params.eps = cfg.eps;
  rc.params.penalty = cfg.penalty;
  rc.random_mode = cfg.mode == "random";

  auto t0 = std::chrono::steady_clock::now();
  coord::RunResult res = coord::coordinate(sc.model, sc.initial, rc, seed);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunRecord rec;
  rec.seed = seed;
  rec.mode = cfg.mode;
  rec.initial_cev = res.initial_cev;
  rec.best_cev = res.best_cev;
  rec.u_link = res.best_eval.u_link_max;
  rec.u_server = res.best_eval.u_server_max;
  rec.r_total = measured_reliability(sc.model, res.best, res.best_eval);
  rec.steps = res.steps;
  rec.seconds = seconds;
  rec.initial_u_link = res.initial_eval.u_link_max;
  rec.initial_u_server = res.initial_eval.u_server_max;
  rec.initial_r_total = measured_reliability(sc.model, sc.initial, res.initial_eval);
  rec.trajectory = std::move(res.trajectory);
  return rec;
}

}  // namespace

std::optional<scenario::Scenario> build_with_retries(const ExperimentConfig& cfg,
                                                     std::uint64_t base_seed, int tries,
                                                     std::string* last_reason) {
  const auto& cases = scenario::case_matrix();
  if (cfg.case_id < 1 || cfg.case_id > static_cast<int>(cases.size()))
    throw HarnessError("case id out of range: " + std::to_string(cfg.case_id));
  for (int k = 0; k < tries; ++k) {
    std::uint64_t s = base_seed + static_cast<std::uint64_t>(k) * kRetryStride;
    scenario::BuildResult br;
    if (cfg.topology_file.empty()) {
      br = scenario::build(cfg.case_id, cfg.n_vn, s);
    } else {
      net::PhysicalNetwork base = net::load_topology_file(cfg.topology_file);
      const scenario::CaseParams& cp = cases[cfg.case_id - 1];
      scenario::ScaleParams sp = scenario::scale_for(cp, cfg.n_vn, base.num_nodes);
      br = scenario::build_on(std::move(base), cp, sp, s);
    }
    if (auto* sc = std::get_if<scenario::Scenario>(&br)) return std::move(*sc);
    if (last_reason) *last_reason = std::get<scenario::Rejected>(br).reason;
  }
  return std::nullopt;
}

std::vector<RunRecord> run(const ExperimentConfig& cfg) {
  if (cfg.mode != "rl" && cfg.mode != "random")
    throw HarnessError("mode must be rl or random, got '" + cfg.mode + "'");
  if (cfg.seeds.empty()) throw HarnessError("no seeds given");
  if (cfg.total_steps <= 0 || cfg.episode_steps <= 0)
    throw HarnessError("step budgets must be positive");

  std::string reason = "no scenario was attempted";
  std::optional<scenario::Scenario> shared;
  if (cfg.fixed_initial) {
    shared = build_with_retries(cfg, cfg.scenario_seed, 100, &reason);
    if (!shared) throw AllRejected("every scenario candidate was rejected: " + reason);
  }

  std::vector<RunRecord> records;
  for (std::uint64_t seed : cfg.seeds) {
    std::optional<scenario::Scenario> own;
    const scenario::Scenario* sc = nullptr;
    if (cfg.fixed_initial) {
      sc = &*shared;
    } else {
      own = build_with_retries(cfg, seed, 100, &reason);
      if (!own) continue;  // this seed found no workable scenario
      sc = &*own;
    }
    records.push_back(run_one(cfg, *sc, seed));
  }
  if (records.empty())
    throw AllRejected("every scenario candidate was rejected: " + reason);

  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    for (const RunRecord& rec : records) {
      fs::path p = fs::path(cfg.out_dir) / trajectory_file_name(cfg, rec.seed);
      std::ofstream f(p);
      if (!f) throw HarnessError("cannot write " + p.string());
      write_trajectory_csv(f, rec);
    }
    fs::path p = fs::path(cfg.out_dir) / "summary.csv";
    std::ofstream f(p);
    if (!f) throw HarnessError("cannot write " + p.string());
    write_summary_csv(f, records);
  }
  return records;
}

OracleResult brute_force_oracle(const scenario::Scenario& sc, const coord::Theta& theta) {
  const sys::SystemModel& m = sc.model;
  const int servers = m.net.num_nodes;
  const std::size_t n_vm = m.vm_sizes.size();
  const std::size_t n_ids = m.ids_sizes.size();
  const std::size_t slots = n_vm + n_ids;
  double space = std::pow(static_cast<double>(servers), static_cast<double>(slots));
  if (!(space <= 1e6)) {
    char bound[64];
    std::snprintf(bound, sizeof bound, "%.0f", space);
    throw HarnessError("oracle refuses " + std::to_string(servers) + "^" +
                       std::to_string(slots) + " = " + bound +
                       " allocations (limit 1000000)");
  }

  std::vector<int> digits(slots, 0);
  auto advance = [&]() {  // last digit fastest keeps the sweep lexicographic
    std::size_t i = slots;
    while (i-- > 0) {
      if (++digits[i] < servers) return true;
      digits[i] = 0;
    }
    return false;
  };

  sys::Allocation a;
  a.vm_server.assign(n_vm, 0);
  a.ids_server.assign(n_ids, 0);
  OracleResult out;
  do {
    for (std::size_t i = 0; i < n_vm; ++i) a.vm_server[i] = digits[i];
    for (std::size_t j = 0; j < n_ids; ++j) a.ids_server[j] = digits[n_vm + j];
    sys::Evaluation ev = sys::evaluate(m, a);
    ++out.examined;
    if (!ev.all_satisfied()) continue;
    double v = coord::cev(ev, theta, m.options);
    if (!out.found || v > out.best_cev) {  // strict: ties keep the earliest
      out.found = true;
      out.best_cev = v;
      out.best = a;
    }
  } while (advance());
  return out;
}

std::vector<ConvergenceRow> convergence_report(const std::vector<double>& trajectory,
                                               double initial_cev, double suboptimal_cev) {
  std::vector<ConvergenceRow> rows;
  const long total = static_cast<long>(trajectory.size());
  if (total == 0) return rows;

  static const long milestones[] = {1000, 5000, 10000, 50000, 100000, 500000, 1000000, 1500000};
  std::vector<long> steps;
  for (long m : milestones)
    if (m <= total) steps.push_back(m);
  if (steps.empty() || steps.back() != total) steps.push_back(total);

  const bool applicable = suboptimal_cev > initial_cev;
  for (long m : steps) {
    ConvergenceRow row;
    row.steps = m;
    row.best_cev = trajectory[m - 1];
    row.applicable = applicable;
    row.ratio = applicable ? (row.best_cev - initial_cev) / (suboptimal_cev - initial_cev) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_trajectory_csv(std::ostream& out, const RunRecord& r) {
  out << "# seed=" << r.seed << " mode=" << r.mode << " initial_cev=" << fmt(r.initial_cev)
      << " best_cev=" << fmt(r.best_cev) << " u_link=" << fmt(r.u_link)
      << " u_server=" << fmt(r.u_server) << " r_total=" << fmt(r.r_total)
      << " steps=" << r.steps << " seconds=" << fmt(r.seconds)
      << " initial_u_link=" << fmt(r.initial_u_link)
      << " initial_u_server=" << fmt(r.initial_u_server)
      << " initial_r_total=" << fmt(r.initial_r_total) << "\n";
  out << "step,best_cev\n";
  for (std::size_t i = 0; i < r.trajectory.size(); ++i)
    out << i + 1 << "," << fmt(r.trajectory[i]) << "\n";
}

RunRecord read_trajectory_csv(std::istream& in, const std::string& name) {
  RunRecord r;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw HarnessError(name + ": missing meta line");
  std::istringstream meta(line.substr(2));
  std::string tok;
  while (meta >> tok) {
    std::size_t eq = tok.find('=');
    if (eq == std::string::npos) throw HarnessError(name + ": bad meta token '" + tok + "'");
    std::string key = tok.substr(0, eq);
    std::string val = tok.substr(eq + 1);
    if (key == "seed")
      r.seed = parse_u64(val, name);
    else if (key == "mode")
      r.mode = val;
    else if (key == "initial_cev")
      r.initial_cev = parse_double(val, name);
    else if (key == "best_cev")
      r.best_cev = parse_double(val, name);
    else if (key == "u_link")
      r.u_link = parse_double(val, name);
    else if (key == "u_server")
      r.u_server = parse_double(val, name);
    else if (key == "r_total")
      r.r_total = parse_double(val, name);
    else if (key == "steps")
      r.steps = static_cast<int>(parse_int(val, name));
    else if (key == "seconds")
      r.seconds = parse_double(val, name);
    else if (key == "initial_u_link")
      r.initial_u_link = parse_double(val, name);
    else if (key == "initial_u_server")
      r.initial_u_server = parse_double(val, name);
    else if (key == "initial_r_total")
      r.initial_r_total = parse_double(val, name);
    else
      throw HarnessError(name + ": unknown meta key '" + key + "'");
  }
  if (!std::getline(in, line) || line != "step,best_cev")
    throw HarnessError(name + ": missing step,best_cev header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw HarnessError(name + ": bad row '" + line + "'");
    long long step = parse_int(line.substr(0, comma), name);
    if (step != static_cast<long long>(r.trajectory.size()) + 1)
      throw HarnessError(name + ": steps not sequential at row " + std::to_string(step));
    r.trajectory.push_back(parse_double(line.substr(comma + 1), name));
  }
  return r;
}

void write_summary_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kSummaryHeader << "\n";
  for (const RunRecord& r : records) {
    out << r.seed << "," << r.mode << "," << fmt(r.initial_cev) << "," << fmt(r.best_cev) << ","
        << fmt(r.u_link) << "," << fmt(r.u_server) << "," << fmt(r.r_total) << "," << r.steps
        << "," << fmt(r.seconds) << "\n";
  }
}

std::vector<RunRecord> read_summary_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader)
    throw HarnessError(name + ": missing summary header");
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells = split(line, ',');
    if (cells.size() != 9) throw HarnessError(name + ": bad row '" + line + "'");
    RunRecord r;
    r.seed = parse_u64(cells[0], name);
    r.mode = cells[1];
    r.initial_cev = parse_double(cells[2], name);
    r.best_cev = parse_double(cells[3], name);
    r.u_link = parse_double(cells[4], name);
    r.u_server = parse_double(cells[5], name);
    r.r_total = parse_double(cells[6], name);
    r.steps = static_cast<int>(parse_int(cells[7], name));
    r.seconds = parse_double(cells[8], name);
    records.push_back(std::move(r));
  }
  return records;
}

std::string trajectory_file_name(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::ostringstream os;
  os << "trajectory_case" << cfg.case_id << "_vn" << cfg.n_vn << "_" << cfg.mode << "_seed" << seed
     << ".csv";
  return os.str();
}

}  // namespace nfvcoord::harness
