#include "nfvcoord/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace nfvcoord::lp {

namespace {

constexpr double kEpsCost = 1e-9;
constexpr double kEpsPivot = 1e-9;
constexpr double kEpsZero = 1e-12;
constexpr double kPhase1Tol = 1e-7;

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

// how a user variable maps onto internal columns (internal vars live in [0, ub])
struct VarMap {
  enum Kind { Shift, Mirror, Split } kind;
  int col0 = -1;
  int col1 = -1;      // Split only
  double offset = 0;  // lower bound for Shift, upper bound for Mirror
};

bool finite(double v) { return std::isfinite(v); }

class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) { build(); }

  LpSolution run() {
    LpSolution out;
    if (nart_ > 0) {
      set_phase1_costs();
      SolveStatus st = iterate(/*phase1=*/true);
      out.iterations = iters_;
      if (st != SolveStatus::Optimal) throw LpError("phase-1 anomaly");
      refresh_bval();
      if (phase_objective() > kPhase1Tol * rhs_scale_) {
        out.status = SolveStatus::Infeasible;
        return out;
      }
      drop_artificials();
    }
    set_phase2_costs();
    SolveStatus st = iterate(/*phase1=*/false);
    out.iterations = iters_;
    if (st == SolveStatus::Unbounded) {
      out.status = SolveStatus::Unbounded;
      return out;
    }
    refresh_bval();
    out.status = SolveStatus::Optimal;
    out.values = extract();
    out.objective = 0;
    for (std::size_t j = 0; j < lp_.num_vars(); ++j)
      out.objective += lp_.objective[j] * out.values[j];
    return out;
  }

 private:
  const LinearProgram& lp_;

  int m_ = 0;      // rows
  int ns_ = 0;     // structural columns
  int nslack_ = 0;
  int nart_ = 0;
  int ntot_ = 0;   // ns + nslack + nart
  int width_ = 0;  // ntot + 1, last column tracks Binv * b0

  std::vector<double> a_;         // m x width
  std::vector<double> d_;         // reduced costs
  std::vector<double> cost_;      // current phase objective over internal columns
  std::vector<double> ub_;
  std::vector<double> bval_;      // value of the basic variable of each row
  std::vector<int> basic_;
  std::vector<int> pos_;          // column -> row when basic, else -1
  std::vector<VarState> state_;
  std::vector<char> dead_;        // column may never enter
  std::vector<VarMap> map_;
  double rhs_scale_ = 1.0;
  bool bland_ = false;
  int degen_run_ = 0;
  int iters_ = 0;

  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * width_; }
  const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * width_; }

  void build() {
    const std::size_t nv = lp_.num_vars();
    if (lp_.lower.size() != nv || lp_.upper.size() != nv)
      throw LpError("bounds arrays do not match variable count");
    map_.resize(nv);
    std::vector<double> iub;
    for (std::size_t j = 0; j < nv; ++j) {
      double lo = lp_.lower[j], hi = lp_.upper[j];
      if (std::isnan(lo) || std::isnan(hi) || !finite(lp_.objective[j]))
        throw LpError("nonfinite objective or bound");
      if (lo > hi) throw LpError("lower bound exceeds upper bound");
      if (finite(lo)) {
        map_[j] = {VarMap::Shift, ns_++, -1, lo};
        iub.push_back(finite(hi) ? hi - lo : kInf);
      } else if (finite(hi)) {
        map_[j] = {VarMap::Mirror, ns_++, -1, hi};
        iub.push_back(kInf);
      } else {
        map_[j] = {VarMap::Split, ns_, ns_ + 1, 0};
        ns_ += 2;
        iub.push_back(kInf);
        iub.push_back(kInf);
      }
    }

    m_ = static_cast<int>(lp_.constraints.size());
    std::vector<std::vector<double>> rows(m_);
    std::vector<double> rhs(m_);
    std::vector<Relation> rel(m_);
    for (int i = 0; i < m_; ++i) {
      const Constraint& c = lp_.constraints[i];
      if (c.coeffs.size() != nv) throw LpError("constraint width does not match variable count");
      if (!finite(c.rhs)) throw LpError("nonfinite constraint rhs");
      rows[i].assign(ns_, 0.0);
      double b = c.rhs;
      for (std::size_t j = 0; j < nv; ++j) {
        double aj = c.coeffs[j];
        if (!finite(aj)) throw LpError("nonfinite constraint coefficient");
        if (aj == 0.0) continue;
        const VarMap& vm = map_[j];
        switch (vm.kind) {
          case VarMap::Shift:
            rows[i][vm.col0] += aj;
            b -= aj * vm.offset;
            break;
          case VarMap::Mirror:
            rows[i][vm.col0] -= aj;
            b -= aj * vm.offset;
            break;
          case VarMap::Split:
            rows[i][vm.col0] += aj;
            rows[i][vm.col1] -= aj;
            break;
        }
      }
      rel[i] = c.relation;
      if (b < 0) {
        b = -b;
        for (double& v : rows[i]) v = -v;
        if (rel[i] == Relation::LessEq) rel[i] = Relation::GreaterEq;
        else if (rel[i] == Relation::GreaterEq) rel[i] = Relation::LessEq;
      }
      rhs[i] = b;
      rhs_scale_ = std::max(rhs_scale_, b);
    }

    for (int i = 0; i < m_; ++i)
      if (rel[i] != Relation::Equal) ++nslack_;
    for (int i = 0; i < m_; ++i)
      if (rel[i] != Relation::LessEq) ++nart_;
    ntot_ = ns_ + nslack_ + nart_;
    width_ = ntot_ + 1;

    a_.assign(static_cast<std::size_t>(m_) * width_, 0.0);
    ub_.assign(ntot_, kInf);
    for (int j = 0; j < ns_; ++j) ub_[j] = iub[j];
    state_.assign(ntot_, VarState::AtLower);
    dead_.assign(ntot_, 0);
    basic_.assign(m_, -1);
    pos_.assign(ntot_, -1);
    bval_.assign(m_, 0.0);

    int slack = ns_, art = ns_ + nslack_;
    for (int i = 0; i < m_; ++i) {
      double* r = row(i);
      std::copy(rows[i].begin(), rows[i].end(), r);
      r[ntot_] = rhs[i];
      bval_[i] = rhs[i];
      if (rel[i] == Relation::LessEq) {
        r[slack] = 1.0;
        set_basic(slack, i);
        ++slack;
      } else {
        if (rel[i] == Relation::GreaterEq) r[slack++] = -1.0;
        r[art] = 1.0;
        set_basic(art, i);
        ++art;
      }
    }
    // a fixed variable can never move, so it never prices in
    for (int j = 0; j < ntot_; ++j)
      if (ub_[j] < kEpsZero) dead_[j] = 1;
  }

  void set_basic(int col, int r) {
    basic_[r] = col;
    pos_[col] = r;
    state_[col] = VarState::Basic;
  }

  void set_phase1_costs() {
    cost_.assign(ntot_, 0.0);
    for (int j = ns_ + nslack_; j < ntot_; ++j) cost_[j] = 1.0;
    recompute_costs();
  }

  void set_phase2_costs() {
    cost_.assign(ntot_, 0.0);
    for (std::size_t j = 0; j < lp_.num_vars(); ++j) {
      const VarMap& vm = map_[j];
      double cj = lp_.objective[j];
      switch (vm.kind) {
        case VarMap::Shift: cost_[vm.col0] += cj; break;
        case VarMap::Mirror: cost_[vm.col0] -= cj; break;
        case VarMap::Split:
          cost_[vm.col0] += cj;
          cost_[vm.col1] -= cj;
          break;
      }
    }
    recompute_costs();
  }

  void recompute_costs() {
    d_ = cost_;
    for (int i = 0; i < m_; ++i) {
      double cb = cost_[basic_[i]];
      if (cb == 0.0) continue;
      const double* r = row(i);
      for (int j = 0; j < ntot_; ++j) d_[j] -= cb * r[j];
    }
  }

  // the basic values drift over long pivot sequences; rebuild them from the
  // carried Binv*b0 column and the nonbasic-at-upper offsets
  void refresh_bval() {
    std::vector<int> at_upper;
    for (int j = 0; j < ntot_; ++j)
      if (state_[j] == VarState::AtUpper) at_upper.push_back(j);
    for (int i = 0; i < m_; ++i) {
      const double* r = row(i);
      double v = r[ntot_];
      for (int j : at_upper) v -= r[j] * ub_[j];
      bval_[i] = v;
    }
  }

  double phase_objective() const {
    double z = 0;
    for (int i = 0; i < m_; ++i) z += cost_[basic_[i]] * bval_[i];
    return z;
  }

  double nonbasic_value(int j) const { return state_[j] == VarState::AtUpper ? ub_[j] : 0.0; }

  int choose_entering() const {
    int best = -1;
    double best_score = -kEpsCost;
    for (int j = 0; j < ntot_; ++j) {
      if (state_[j] == VarState::Basic || dead_[j]) continue;
      double score = state_[j] == VarState::AtLower ? d_[j] : -d_[j];
      if (score < best_score) {
        if (bland_) return j;
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  SolveStatus iterate(bool phase1) {
    const int iter_cap = 50000 + 200 * (m_ + ntot_);
    while (true) {
      if (++iters_ > iter_cap) throw LpError("simplex iteration limit exceeded");
      if ((iters_ & 0x1FF) == 0) refresh_bval();
      const int e = choose_entering();
      if (e < 0) return SolveStatus::Optimal;
      const double sigma = state_[e] == VarState::AtLower ? 1.0 : -1.0;

      // ratio test: entering moves by delta, first binding limit wins
      double best_delta = ub_[e];  // entering reaches its opposite bound
      int leave_row = -1;
      bool leave_at_upper = false;
      double leave_piv = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double alpha = sigma * row(i)[e];
        double delta;
        bool at_upper;
        if (alpha > kEpsPivot) {
          delta = std::max(0.0, bval_[i]) / alpha;
          at_upper = false;
        } else if (alpha < -kEpsPivot && finite(ub_[basic_[i]])) {
          delta = std::max(0.0, ub_[basic_[i]] - bval_[i]) / (-alpha);
          at_upper = true;
        } else {
          continue;
        }
        bool better;
        if (delta < best_delta - kEpsZero) {
          better = true;
        } else if (delta > best_delta + kEpsZero) {
          better = false;
        } else if (leave_row < 0) {
          better = delta < best_delta;  // tie against the flip bound: prefer the flip
        } else if (bland_) {
          better = basic_[i] < basic_[leave_row];
        } else {
          better = std::abs(alpha) > std::abs(leave_piv) + kEpsZero ||
                   (std::abs(alpha) >= std::abs(leave_piv) - kEpsZero &&
                    basic_[i] < basic_[leave_row]);
        }
        if (better) {
          best_delta = delta;
          leave_row = i;
          leave_at_upper = at_upper;
          leave_piv = alpha;
        }
      }

      if (!finite(best_delta)) {
        if (phase1) throw LpError("phase-1 anomaly");
        return SolveStatus::Unbounded;
      }
      const double delta = std::max(0.0, best_delta);
      degen_run_ = delta <= 1e-10 ? degen_run_ + 1 : 0;
      if (degen_run_ > 2 * (m_ + ntot_)) bland_ = true;

      if (delta > 0) {
        for (int i = 0; i < m_; ++i) bval_[i] -= sigma * delta * row(i)[e];
      }
      if (leave_row < 0) {
        state_[e] = state_[e] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        continue;
      }

      const double enter_val = nonbasic_value(e) + sigma * delta;
      const int leaving = basic_[leave_row];
      state_[leaving] = leave_at_upper ? VarState::AtUpper : VarState::AtLower;
      pos_[leaving] = -1;
      if (leaving >= ns_ + nslack_) dead_[leaving] = 1;  // artificial never reenters
      set_basic(e, leave_row);
      bval_[leave_row] = enter_val;
      pivot(leave_row, e);
    }
  }

  void pivot(int r, int e) {
    double* pr = row(r);
    const double inv = 1.0 / pr[e];
    for (int j = 0; j <= ntot_; ++j) pr[j] *= inv;
    pr[e] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double f = ri[e];
      if (f == 0.0) continue;
      for (int j = 0; j <= ntot_; ++j) ri[j] -= f * pr[j];
      ri[e] = 0.0;
    }
    const double fd = d_[e];
    if (fd != 0.0) {
      for (int j = 0; j < ntot_; ++j) d_[j] -= fd * pr[j];
      d_[e] = 0.0;
    }
  }

  void drop_artificials() {
    const int art_begin = ns_ + nslack_;
    // degenerate pivots drive leftover artificials out of the basis
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < art_begin) continue;
      bval_[i] = 0.0;
      int e = -1;
      const double* r = row(i);
      for (int j = 0; j < art_begin; ++j) {
        if (!dead_[j] && state_[j] != VarState::Basic && std::abs(r[j]) > 1e-7) {
          e = j;
          break;
        }
      }
      if (e >= 0) {
        const double enter_val = nonbasic_value(e);
        const int old = basic_[i];
        state_[old] = VarState::AtLower;
        pos_[old] = -1;
        set_basic(e, i);
        bval_[i] = enter_val;
        pivot(i, e);
      }
    }
    // rows still owned by an artificial are redundant
    int w = 0;
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] >= art_begin) {
        pos_[basic_[i]] = -1;
        continue;
      }
      if (w != i) {
        std::copy(row(i), row(i) + width_, row(w));
        basic_[w] = basic_[i];
        bval_[w] = bval_[i];
        pos_[basic_[w]] = w;
      }
      ++w;
    }
    m_ = w;

    // strip the artificial columns; dst stays at or before src so the
    // forward copies are safe in place
    const int new_tot = art_begin;
    const int new_width = new_tot + 1;
    for (int i = 0; i < m_; ++i) {
      const double* src = a_.data() + static_cast<std::size_t>(i) * width_;
      double* dst = a_.data() + static_cast<std::size_t>(i) * new_width;
      std::copy(src, src + new_tot, dst);
      dst[new_tot] = src[ntot_];
    }
    ntot_ = new_tot;
    width_ = new_width;
    a_.resize(static_cast<std::size_t>(m_) * width_);
    ub_.resize(ntot_);
    state_.resize(ntot_);
    dead_.resize(ntot_);
    pos_.resize(ntot_);
    basic_.resize(m_);
    bval_.resize(m_);
  }

  std::vector<double> extract() const {
    std::vector<double> y(ntot_, 0.0);
    for (int j = 0; j < ntot_; ++j)
      if (state_[j] == VarState::AtUpper) y[j] = ub_[j];
    for (int i = 0; i < m_; ++i) y[basic_[i]] = bval_[i];

    std::vector<double> x(lp_.num_vars(), 0.0);
    for (std::size_t j = 0; j < lp_.num_vars(); ++j) {
      const VarMap& vm = map_[j];
      switch (vm.kind) {
        case VarMap::Shift: x[j] = y[vm.col0] + vm.offset; break;
        case VarMap::Mirror: x[j] = vm.offset - y[vm.col0]; break;
        case VarMap::Split: x[j] = y[vm.col0] - y[vm.col1]; break;
      }
      if (finite(lp_.lower[j])) x[j] = std::max(x[j], lp_.lower[j]);
      if (finite(lp_.upper[j])) x[j] = std::min(x[j], lp_.upper[j]);
    }
    return x;
  }
};

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  if (lp.num_vars() == 0) {
    LpSolution out;
    out.status = SolveStatus::Optimal;
    for (const Constraint& c : lp.constraints) {
      bool ok = c.relation == Relation::LessEq   ? 0.0 <= c.rhs + kPhase1Tol
                : c.relation == Relation::Equal  ? std::abs(c.rhs) <= kPhase1Tol
                                                 : 0.0 >= c.rhs - kPhase1Tol;
      if (!ok) out.status = SolveStatus::Infeasible;
    }
    return out;
  }
  Simplex s(lp);
  return s.run();
}

double max_constraint_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0;
  for (const Constraint& c : lp.constraints) {
    double lhs = 0;
    for (std::size_t j = 0; j < c.coeffs.size(); ++j) lhs += c.coeffs[j] * x[j];
    double v = 0;
    switch (c.relation) {
      case Relation::LessEq: v = lhs - c.rhs; break;
      case Relation::Equal: v = std::abs(lhs - c.rhs); break;
      case Relation::GreaterEq: v = c.rhs - lhs; break;
    }
    worst = std::max(worst, v);
  }
  return worst;
}

double max_bound_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::isfinite(lp.lower[j])) worst = std::max(worst, lp.lower[j] - x[j]);
    if (std::isfinite(lp.upper[j])) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

}  // namespace nfvcoord::lp
