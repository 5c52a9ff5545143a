#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfvcoord::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEq, Equal, GreaterEq };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEq;
  double rhs = 0.0;
};

// minimize objective . x  subject to row constraints and per-variable bounds
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;  // -kInf allowed (free below)
  std::vector<double> upper;  // +kInf allowed
  std::vector<Constraint> constraints;

  std::size_t num_vars() const { return objective.size(); }

  int add_variable(double lo, double hi, double cost) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    return static_cast<int>(objective.size()) - 1;
  }

  void add_constraint(std::vector<double> coeffs, Relation rel, double rhs) {
    constraints.push_back({std::move(coeffs), rel, rhs});
  }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> values;  // empty unless Optimal
  int iterations = 0;
};

struct LpError : std::runtime_error {
  explicit LpError(const std::string& what) : std::runtime_error(what) {}
};

// Two-phase dense-tableau simplex with native variable bounds.
// Deterministic: Dantzig pricing with lowest-index ties, switching to
// Bland's rule after a degenerate stall to guarantee termination.
LpSolution solve(const LinearProgram& lp);

// residual helpers shared by tests and internal verification
double max_constraint_violation(const LinearProgram& lp, const std::vector<double>& x);
double max_bound_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace nfvcoord::lp
