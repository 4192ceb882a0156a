// Copyright 2026 The speedcov Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bounded-variable revised primal simplex.
//
// Every row i gets a slack s_i so that A x + s = b, with s_i in [0, inf)
// for <= rows, (-inf, 0] for >= rows and [0, 0] for equalities. The basis
// inverse is held densely (column-major) and updated by elementary row
// operations; it is rebuilt from scratch every `refactor_interval` pivots.
//
// There is no separate artificial phase. Any basis may be loaded; basic
// variables outside their bounds are driven back by minimising the sum of
// infeasibilities, after which the true objective takes over. This is what
// lets branch-and-bound restart children from the parent's basis.
//
// Pricing is Dantzig's rule. After a run of degenerate pivots the solver
// falls back to Bland's rule until progress resumes.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "speedcov/milp_model.hpp"

namespace speedcov {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit,
                      time_limit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
    case LpStatus::iteration_limit:
      return "iteration_limit";
    case LpStatus::time_limit:
      return "time_limit";
  }
  return "?";
}

struct SimplexOptions {
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 100;
  int degenerate_pivots_before_bland = 1000;
  std::int64_t iteration_limit = 50'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Snapshot of a simplex basis, sufficient to warm start a later solve.
/// Column indices >= number of structural columns denote row slacks.
struct SimplexBasis {
  std::vector<int> head;
  std::vector<std::uint8_t> at_upper;

  bool empty() const { return head.empty(); }
};

class SimplexSolver {
 public:
  static constexpr double kDualFeasibility = 1e-7;
  // Pivots since the last factorisation after which an optimal verdict is
  // re-checked on a fresh one.
  static constexpr int kVerifyAfter = 50;

  explicit SimplexSolver(const MilpModel& model) {
    n_ = model.num_variables();
    cols_.resize(static_cast<std::size_t>(n_));
    lo_.reserve(static_cast<std::size_t>(n_));
    up_.reserve(static_cast<std::size_t>(n_));
    cost_.reserve(static_cast<std::size_t>(n_));
    for (const Variable& v : model.variables()) {
      lo_.push_back(v.lower);
      up_.push_back(v.upper);
      cost_.push_back(v.objective);
    }
    for (const auto& row : model.constraints())
      add_row(row.terms, row.sense, row.rhs);
  }

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }

  double lower(int j) const { return lo_[static_cast<std::size_t>(j)]; }
  double upper(int j) const { return up_[static_cast<std::size_t>(j)]; }

  void set_bounds(int j, double lower, double upper) {
    lo_[static_cast<std::size_t>(j)] = lower;
    up_[static_cast<std::size_t>(j)] = upper;
  }

  /// Appends a row. Its slack joins the basis, so any factorisation held
  /// is discarded and rebuilt on the next solve.
  int add_row(const std::vector<Term>& terms, RowSense sense, double rhs) {
    const int i = m_++;
    for (const Term& t : terms)
      if (t.coef != 0.0)
        cols_[static_cast<std::size_t>(t.var)].push_back({i, t.coef});
    rhs_.push_back(rhs);
    switch (sense) {
      case RowSense::less_equal:
        lo_.push_back(0.0);
        up_.push_back(kInf);
        break;
      case RowSense::greater_equal:
        lo_.push_back(-kInf);
        up_.push_back(0.0);
        break;
      case RowSense::equal:
        lo_.push_back(0.0);
        up_.push_back(0.0);
        break;
    }
    cost_.push_back(0.0);
    // Slack columns live after all structurals; rows are appended after
    // structurals were fixed, so slack index is n_ + i.
    if (!head_.empty()) {
      head_.push_back(n_ + i);
      state_.push_back(kBasic);
      x_.push_back(0.0);
    }
    factor_valid_ = false;
    return i;
  }

  /// Deletes rows i >= first whose slack is basic and for which
  /// drop(i, slack value) holds. A basic slack carries no dual weight, so
  /// the current basis restricted to the kept rows is still a basis with
  /// the same primal values. Returns the number of rows removed.
  template <typename Drop>
  int remove_rows(int first, Drop&& drop) {
    if (head_.empty()) return 0;
    std::vector<int> new_index(static_cast<std::size_t>(m_), -1);
    int next = 0;
    for (int i = 0; i < m_; ++i) {
      const auto s = static_cast<std::size_t>(n_ + i);
      const bool gone = i >= first && state_[s] == kBasic && drop(i, x_[s]);
      if (!gone) new_index[static_cast<std::size_t>(i)] = next++;
    }
    const int removed = m_ - next;
    if (removed == 0) return 0;
    for (auto& col : cols_) {
      std::size_t w = 0;
      for (const auto& [i, a] : col) {
        const int ni = new_index[static_cast<std::size_t>(i)];
        if (ni >= 0) col[w++] = {ni, a};
      }
      col.resize(w);
    }
    auto compact = [&](auto& v) {
      for (int i = 0; i < m_; ++i) {
        const int ni = new_index[static_cast<std::size_t>(i)];
        if (ni >= 0)
          v[static_cast<std::size_t>(n_ + ni)] = v[static_cast<std::size_t>(n_ + i)];
      }
      v.resize(static_cast<std::size_t>(n_ + next));
    };
    for (int i = 0; i < m_; ++i) {
      const int ni = new_index[static_cast<std::size_t>(i)];
      if (ni >= 0)
        rhs_[static_cast<std::size_t>(ni)] = rhs_[static_cast<std::size_t>(i)];
    }
    rhs_.resize(static_cast<std::size_t>(next));
    compact(lo_);
    compact(up_);
    compact(cost_);
    compact(state_);
    compact(x_);
    std::vector<int> head;
    head.reserve(static_cast<std::size_t>(next));
    for (int c : head_) {
      if (c < n_) {
        head.push_back(c);
      } else {
        const int ni = new_index[static_cast<std::size_t>(c - n_)];
        if (ni >= 0) head.push_back(n_ + ni);
      }
    }
    head_ = std::move(head);
    m_ = next;
    binv_.clear();
    factor_valid_ = false;
    return removed;
  }

  void load_basis(const SimplexBasis& basis) {
    std::vector<int> target = basis.head;
    // Rows added after the snapshot keep their slack basic.
    for (int i = static_cast<int>(target.size()); i < m_; ++i)
      target.push_back(n_ + i);
    const bool kept = factor_valid_ && transition_to(target);
    if (!kept) head_ = std::move(target);
    const auto total = static_cast<std::size_t>(n_ + m_);
    state_.assign(total, kLower);
    for (std::size_t j = 0; j < total; ++j)
      if (j < basis.at_upper.size() && basis.at_upper[j]) state_[j] = kUpper;
    for (int c : head_) state_[static_cast<std::size_t>(c)] = kBasic;
    x_.assign(total, 0.0);
    factor_valid_ = kept;
  }

  SimplexBasis basis() const {
    SimplexBasis b;
    b.head = head_;
    b.at_upper.assign(state_.size(), 0);
    for (std::size_t j = 0; j < state_.size(); ++j)
      b.at_upper[j] = state_[j] == kUpper ? 1 : 0;
    return b;
  }

  LpStatus solve(const SimplexOptions& opt = {}) {
    opt_ = opt;
    if (head_.empty()) slack_basis();
    place_nonbasics();
    if (!factor_valid_) refactor();
    compute_basic_values();
    bool bland = false;
    int degenerate_run = 0;
    certificate_row_ = -1;
    unbounded_column_ = -1;
    const std::int64_t first_iteration = iterations_;

    std::vector<double> cb(static_cast<std::size_t>(m_));
    std::vector<double> y(static_cast<std::size_t>(m_));
    std::vector<double> alpha(static_cast<std::size_t>(m_));

    // A dual feasible start (typical after a bound change or a new row)
    // is repaired by dual pivots; the primal loop below then certifies it.
    if (infeasibility() > 0.0 && make_dual_feasible(cb, y)) {
      const LpStatus ds = dual_phase(cb, y, alpha, first_iteration);
      if (ds != LpStatus::optimal) return ds;
    }

    for (;;) {
      if (iterations_ - first_iteration >= opt_.iteration_limit)
        return LpStatus::iteration_limit;
      if (opt_.deadline && (iterations_ & 31) == 0 &&
          std::chrono::steady_clock::now() > *opt_.deadline)
        return LpStatus::time_limit;
      if (since_refactor_ >= opt_.refactor_interval) {
        refactor();
        compute_basic_values();
      }

      const bool phase1 = infeasibility() > 0.0;
      for (int r = 0; r < m_; ++r) {
        const auto c = static_cast<std::size_t>(head_[static_cast<std::size_t>(r)]);
        cb[static_cast<std::size_t>(r)] =
            phase1 ? infeasibility_cost(c) : cost_[c];
      }
      compute_duals(cb, y);

      const int q = choose_entering(phase1, y, bland);
      if (q < 0) {
        if (since_refactor_ >= kVerifyAfter) {
          // Re-verify on a fresh factorisation before declaring a result.
          refactor();
          compute_basic_values();
          if ((infeasibility() > 0.0) != phase1) continue;
          for (int r = 0; r < m_; ++r) {
            const auto c = static_cast<std::size_t>(head_[static_cast<std::size_t>(r)]);
            cb[static_cast<std::size_t>(r)] =
                phase1 ? infeasibility_cost(c) : cost_[c];
          }
          compute_duals(cb, y);
          if (choose_entering(phase1, y, bland) >= 0) continue;
        }
        if (phase1) {
          certificate_row_ = largest_dual_row(y);
          return LpStatus::infeasible;
        }
        return LpStatus::optimal;
      }

      const double d = reduced_cost(q, y, phase1);
      const double dir = entering_direction(q, d);
      compute_column(q, alpha);

      const auto step = ratio_test(q, dir, alpha, phase1, bland);
      if (!step.bounded) {
        if (phase1) {
          // Numerical trouble; rebuild and try again.
          refactor();
          compute_basic_values();
          ++iterations_;
          continue;
        }
        unbounded_column_ = q;
        return LpStatus::unbounded;
      }
      apply_step(q, dir, step, alpha);
      ++iterations_;
      if (step.theta <= 1e-12) {
        if (++degenerate_run >= opt_.degenerate_pivots_before_bland)
          bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  /// Reduced costs of the structural columns at the current basis (zero
  /// for basic ones). Valid after an optimal solve.
  std::vector<double> reduced_costs() {
    std::vector<double> cb(static_cast<std::size_t>(m_));
    std::vector<double> y(static_cast<std::size_t>(m_));
    phase2_duals(cb, y);
    std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j)
      if (state_[static_cast<std::size_t>(j)] != kBasic)
        d[static_cast<std::size_t>(j)] = reduced_cost(j, y, false);
    return d;
  }

  bool is_basic(int j) const { return state_[static_cast<std::size_t>(j)] == kBasic; }

  /// Values of the structural columns.
  std::vector<double> primal() const {
    return {x_.begin(), x_.begin() + n_};
  }

  double objective() const {
    double s = 0.0;
    for (int j = 0; j < n_; ++j)
      s += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
    return s;
  }

  std::int64_t iterations() const { return iterations_; }

  /// Row with the largest phase-one multiplier when infeasible, else -1.
  int certificate_row() const { return certificate_row_; }
  /// Entering column along which the objective is unbounded, else -1.
  int unbounded_column() const { return unbounded_column_; }

 private:
  enum State : std::uint8_t { kBasic, kLower, kUpper, kFree };

  struct Step {
    bool bounded = false;
    bool flip = false;
    int leave_row = -1;
    double theta = 0.0;
    bool leave_at_upper = false;
  };

  std::size_t total() const { return static_cast<std::size_t>(n_ + m_); }

  template <typename F>
  void for_each_entry(int j, F&& f) const {
    if (j < n_) {
      for (const auto& [i, a] : cols_[static_cast<std::size_t>(j)]) f(i, a);
    } else {
      f(j - n_, 1.0);
    }
  }

  double& binv(int r, int i) {
    return binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
                 static_cast<std::size_t>(r)];
  }

  void slack_basis() {
    head_.resize(static_cast<std::size_t>(m_));
    state_.assign(total(), kLower);
    for (int i = 0; i < m_; ++i) {
      head_[static_cast<std::size_t>(i)] = n_ + i;
      state_[static_cast<std::size_t>(n_ + i)] = kBasic;
    }
    x_.assign(total(), 0.0);
  }

  // Puts every nonbasic column on a finite bound consistent with its state.
  void place_nonbasics() {
    for (std::size_t j = 0; j < total(); ++j) {
      if (state_[j] == kBasic) continue;
      const bool lo_fin = std::isfinite(lo_[j]);
      const bool up_fin = std::isfinite(up_[j]);
      if (state_[j] == kUpper && up_fin) {
        x_[j] = up_[j];
      } else if (lo_fin) {
        state_[j] = kLower;
        x_[j] = lo_[j];
      } else if (up_fin) {
        state_[j] = kUpper;
        x_[j] = up_[j];
      } else {
        state_[j] = kFree;
        x_[j] = 0.0;
      }
    }
  }

  // Dense Gauss-Jordan on the basis matrix. Slack columns are unit vectors
  // and are pivoted first at no cost. Columns that turn out dependent are
  // swapped for slacks of the rows left without a pivot.
  void refactor() {
    const auto m = static_cast<std::size_t>(m_);
    for (int attempt = 0;; ++attempt) {
      std::vector<double> w(m * m, 0.0);    // row-major B
      std::vector<double> inv(m * m, 0.0);  // row-major, ends as P B^-1
      for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
      for (std::size_t k = 0; k < m; ++k)
        for_each_entry(head_[k], [&](int i, double a) {
          w[static_cast<std::size_t>(i) * m + k] = a;
        });

      std::vector<int> pivot_row(m, -1);
      std::vector<std::uint8_t> row_used(m, 0);
      std::vector<std::size_t> order;
      order.reserve(m);
      for (std::size_t k = 0; k < m; ++k)
        if (head_[k] >= n_) order.push_back(k);
      for (std::size_t k = 0; k < m; ++k)
        if (head_[k] < n_) order.push_back(k);

      std::vector<std::size_t> deficient;
      std::vector<std::size_t> nz_w, nz_inv;
      for (std::size_t k : order) {
        std::size_t p = m;
        double best = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          if (row_used[r]) continue;
          const double v = std::abs(w[r * m + k]);
          if (v > best) {
            best = v;
            p = r;
          }
        }
        if (p == m || best < 1e-11) {
          deficient.push_back(k);
          continue;
        }
        row_used[p] = 1;
        pivot_row[k] = static_cast<int>(p);
        const double piv = w[p * m + k];
        nz_w.clear();
        nz_inv.clear();
        for (std::size_t c = 0; c < m; ++c) {
          if (w[p * m + c] != 0.0) {
            w[p * m + c] /= piv;
            nz_w.push_back(c);
          }
          if (inv[p * m + c] != 0.0) {
            inv[p * m + c] /= piv;
            nz_inv.push_back(c);
          }
        }
        for (std::size_t r = 0; r < m; ++r) {
          if (r == p) continue;
          const double f = w[r * m + k];
          if (f == 0.0) continue;
          for (std::size_t c : nz_w) w[r * m + c] -= f * w[p * m + c];
          for (std::size_t c : nz_inv) inv[r * m + c] -= f * inv[p * m + c];
          w[r * m + k] = 0.0;
        }
      }

      if (deficient.empty()) {
        binv_.assign(m * m, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
          const std::size_t p = static_cast<std::size_t>(pivot_row[k]);
          for (std::size_t i = 0; i < m; ++i)
            binv(static_cast<int>(k), static_cast<int>(i)) = inv[p * m + i];
        }
        factor_valid_ = true;
        since_refactor_ = 0;
        return;
      }
      if (attempt > 2)
        throw Error("simplex basis repair failed");
      // Replace each dependent column by the slack of an unused row.
      std::size_t next_free = 0;
      for (std::size_t k : deficient) {
        while (row_used[next_free]) ++next_free;
        const auto old = static_cast<std::size_t>(head_[k]);
        state_[old] = (std::isfinite(up_[old]) &&
                       std::abs(x_[old] - up_[old]) < std::abs(x_[old] - lo_[old]))
                          ? kUpper
                          : kLower;
        head_[k] = n_ + static_cast<int>(next_free);
        state_[static_cast<std::size_t>(head_[k])] = kBasic;
        row_used[next_free] = 1;
      }
      place_nonbasics();
    }
  }

  void compute_basic_values() {
    std::vector<double> r(rhs_);
    for (std::size_t j = 0; j < total(); ++j) {
      if (state_[j] == kBasic || x_[j] == 0.0) continue;
      const double v = x_[j];
      for_each_entry(static_cast<int>(j), [&](int i, double a) {
        r[static_cast<std::size_t>(i)] -= a * v;
      });
    }
    const auto m = static_cast<std::size_t>(m_);
    std::vector<double> xb(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double ri = r[i];
      if (ri == 0.0) continue;
      const double* col = &binv_[i * m];
      for (std::size_t k = 0; k < m; ++k) xb[k] += col[k] * ri;
    }
    for (std::size_t k = 0; k < m; ++k)
      x_[static_cast<std::size_t>(head_[k])] = xb[k];
  }

  // Sum of bound violations of the basic variables beyond the tolerance.
  double infeasibility() const {
    double s = 0.0;
    for (int c : head_) {
      const auto j = static_cast<std::size_t>(c);
      if (x_[j] < lo_[j] - opt_.feasibility_tolerance)
        s += lo_[j] - x_[j];
      else if (x_[j] > up_[j] + opt_.feasibility_tolerance)
        s += x_[j] - up_[j];
    }
    return s;
  }

  double infeasibility_cost(std::size_t j) const {
    if (x_[j] < lo_[j] - opt_.feasibility_tolerance) return -1.0;
    if (x_[j] > up_[j] + opt_.feasibility_tolerance) return 1.0;
    return 0.0;
  }

  void compute_duals(const std::vector<double>& cb, std::vector<double>& y) {
    const auto m = static_cast<std::size_t>(m_);
    nz_.clear();
    for (std::size_t k = 0; k < m; ++k)
      if (cb[k] != 0.0) nz_.push_back(k);
    for (std::size_t i = 0; i < m; ++i) {
      const double* col = &binv_[i * m];
      double s = 0.0;
      for (std::size_t k : nz_) s += cb[k] * col[k];
      y[i] = s;
    }
  }

  double reduced_cost(int j, const std::vector<double>& y, bool phase1) const {
    double d = phase1 ? 0.0 : cost_[static_cast<std::size_t>(j)];
    for_each_entry(j, [&](int i, double a) {
      d -= y[static_cast<std::size_t>(i)] * a;
    });
    return d;
  }

  double entering_direction(int j, double d) const {
    const auto s = state_[static_cast<std::size_t>(j)];
    if (s == kLower) return 1.0;
    if (s == kUpper) return -1.0;
    return d < 0.0 ? 1.0 : -1.0;
  }

  int choose_entering(bool phase1, const std::vector<double>& y,
                      bool bland) const {
    int best = -1;
    double best_score = 0.0;
    const double tol = opt_.optimality_tolerance;
    for (std::size_t j = 0; j < total(); ++j) {
      const auto s = state_[j];
      if (s == kBasic) continue;
      if (lo_[j] == up_[j]) continue;
      const double d = reduced_cost(static_cast<int>(j), y, phase1);
      double score = 0.0;
      if (s == kLower && d < -tol)
        score = -d;
      else if (s == kUpper && d > tol)
        score = d;
      else if (s == kFree && std::abs(d) > tol)
        score = std::abs(d);
      if (score <= 0.0) continue;
      if (bland) return static_cast<int>(j);
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(j);
      }
    }
    return best;
  }

  void compute_column(int q, std::vector<double>& alpha) const {
    const auto m = static_cast<std::size_t>(m_);
    std::fill(alpha.begin(), alpha.end(), 0.0);
    for_each_entry(q, [&](int i, double a) {
      const double* col = &binv_[static_cast<std::size_t>(i) * m];
      for (std::size_t k = 0; k < m; ++k) alpha[k] += col[k] * a;
    });
  }

  // Effective bounds for basic variable j during the ratio test. In phase
  // one an infeasible variable may move freely away from feasibility and
  // stops once it reaches the violated bound.
  std::pair<double, double> ratio_bounds(std::size_t j, bool phase1) const {
    if (phase1) {
      if (x_[j] < lo_[j] - opt_.feasibility_tolerance) return {-kInf, lo_[j]};
      if (x_[j] > up_[j] + opt_.feasibility_tolerance) return {up_[j], kInf};
    }
    return {lo_[j], up_[j]};
  }

  Step ratio_test(int q, double dir, const std::vector<double>& alpha,
                  bool phase1, bool bland) const {
    const double tol = opt_.feasibility_tolerance;
    const double ptol = opt_.pivot_tolerance;
    Step step;

    // Harris pass one: largest step with bounds relaxed by the tolerance.
    double theta_max = kInf;
    for (int r = 0; r < m_; ++r) {
      const double delta = -alpha[static_cast<std::size_t>(r)] * dir;
      if (std::abs(delta) <= ptol) continue;
      const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(r)]);
      const auto [lo, up] = ratio_bounds(j, phase1);
      double t = kInf;
      if (delta < 0.0 && std::isfinite(lo))
        t = (x_[j] - (lo - tol)) / -delta;
      else if (delta > 0.0 && std::isfinite(up))
        t = ((up + tol) - x_[j]) / delta;
      theta_max = std::min(theta_max, t);
    }

    const auto qj = static_cast<std::size_t>(q);
    const double span = up_[qj] - lo_[qj];

    // Pass two: among rows blocking within theta_max take the largest pivot
    // (Bland: the smallest basic column index).
    int leave = -1;
    double leave_theta = kInf;
    double leave_mag = 0.0;
    bool leave_up = false;
    for (int r = 0; r < m_; ++r) {
      const double delta = -alpha[static_cast<std::size_t>(r)] * dir;
      if (std::abs(delta) <= ptol) continue;
      const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(r)]);
      const auto [lo, up] = ratio_bounds(j, phase1);
      double t;
      bool to_up;
      if (delta < 0.0 && std::isfinite(lo)) {
        t = (x_[j] - lo) / -delta;
        to_up = false;
      } else if (delta > 0.0 && std::isfinite(up)) {
        t = (up - x_[j]) / delta;
        to_up = true;
      } else {
        continue;
      }
      t = std::max(t, 0.0);
      if (t > theta_max) continue;
      bool take;
      if (bland) {
        take = leave < 0 || t < leave_theta - 1e-12 ||
               (t <= leave_theta + 1e-12 &&
                head_[static_cast<std::size_t>(r)] <
                    head_[static_cast<std::size_t>(leave)]);
      } else {
        take = std::abs(delta) > leave_mag;
      }
      if (take) {
        leave = r;
        leave_theta = t;
        leave_mag = std::abs(delta);
        leave_up = to_up;
      }
    }

    if (std::isfinite(span) && span <= std::min(theta_max, leave_theta)) {
      step.bounded = true;
      step.flip = true;
      step.theta = span;
      return step;
    }
    if (leave < 0) return step;
    step.bounded = true;
    step.leave_row = leave;
    step.theta = leave_theta;
    step.leave_at_upper = leave_up;
    // In phase one a below-lower variable stopping at its lower bound is
    // recorded with the state of the bound it reached.
    if (phase1) {
      const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(leave)]);
      const auto [lo, up] = ratio_bounds(j, true);
      if (leave_up && up == lo_[j]) step.leave_at_upper = false;
      if (!leave_up && lo == up_[j]) step.leave_at_upper = true;
    }
    return step;
  }

  // Turns the factorised basis into `target` (same size) by pivoting in the
  // missing columns. Gives up when too many differ or a pivot is tiny.
  bool transition_to(const std::vector<int>& target) {
    if (target.size() != head_.size()) return false;
    std::vector<std::uint8_t> in_target(total(), 0), in_head(total(), 0);
    for (int c : target) in_target[static_cast<std::size_t>(c)] = 1;
    for (int c : head_) in_head[static_cast<std::size_t>(c)] = 1;
    std::vector<int> entering;
    for (int c : target)
      if (!in_head[static_cast<std::size_t>(c)]) entering.push_back(c);
    if (entering.empty()) return true;
    if (entering.size() * 4 > head_.size() || entering.size() > 60) return false;
    std::vector<std::size_t> free_pos;
    for (std::size_t k = 0; k < head_.size(); ++k)
      if (!in_target[static_cast<std::size_t>(head_[k])]) free_pos.push_back(k);
    std::vector<double> alpha(static_cast<std::size_t>(m_));
    for (int q : entering) {
      compute_column(q, alpha);
      std::size_t best = free_pos.size();
      double mag = 1e-7;
      for (std::size_t f = 0; f < free_pos.size(); ++f)
        if (std::abs(alpha[free_pos[f]]) > mag) {
          mag = std::abs(alpha[free_pos[f]]);
          best = f;
        }
      if (best == free_pos.size()) return false;
      const std::size_t k = free_pos[best];
      free_pos.erase(free_pos.begin() + static_cast<std::ptrdiff_t>(best));
      pivot_inverse(k, alpha);
      head_[k] = q;
    }
    return true;
  }

  // B^-1 update for replacing the column at basis position pj; alpha is
  // B^-1 times the entering column.
  void pivot_inverse(std::size_t pj, const std::vector<double>& alpha) {
    const auto m = static_cast<std::size_t>(m_);
    const double piv = alpha[pj];
    nz_.clear();
    for (std::size_t k = 0; k < m; ++k)
      if (alpha[k] != 0.0 && k != pj) nz_.push_back(k);
    for (std::size_t i = 0; i < m; ++i) {
      double* col = &binv_[i * m];
      const double vp = col[pj];
      if (vp == 0.0) continue;
      const double s = vp / piv;
      for (std::size_t k : nz_) col[k] -= alpha[k] * s;
      col[pj] = s;
    }
    ++since_refactor_;
  }

  void apply_step(int q, double dir, const Step& step,
                  const std::vector<double>& alpha) {
    const auto qj = static_cast<std::size_t>(q);
    const double theta = step.theta;
    if (theta != 0.0) {
      x_[qj] += dir * theta;
      for (int r = 0; r < m_; ++r) {
        const double a = alpha[static_cast<std::size_t>(r)];
        if (a != 0.0)
          x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(r)])] -=
              a * dir * theta;
      }
    }
    if (step.flip) {
      state_[qj] = state_[qj] == kUpper ? kLower : kUpper;
      x_[qj] = state_[qj] == kUpper ? up_[qj] : lo_[qj];
      return;
    }
    const int p = step.leave_row;
    const auto pj = static_cast<std::size_t>(p);
    const auto leaving = static_cast<std::size_t>(head_[pj]);
    state_[leaving] = step.leave_at_upper ? kUpper : kLower;
    x_[leaving] = step.leave_at_upper ? up_[leaving] : lo_[leaving];
    head_[pj] = q;
    state_[qj] = kBasic;

    pivot_inverse(pj, alpha);
  }

  void phase2_duals(std::vector<double>& cb, std::vector<double>& y) {
    for (int r = 0; r < m_; ++r)
      cb[static_cast<std::size_t>(r)] =
          cost_[static_cast<std::size_t>(head_[static_cast<std::size_t>(r)])];
    compute_duals(cb, y);
  }

  // Flips boxed nonbasics whose reduced cost has the wrong sign. Returns
  // false when some other nonbasic is dual infeasible.
  bool make_dual_feasible(std::vector<double>& cb, std::vector<double>& y) {
    phase2_duals(cb, y);
    const double tol = kDualFeasibility;
    bool flipped = false;
    for (std::size_t j = 0; j < total(); ++j) {
      const auto st = state_[j];
      if (st == kBasic || lo_[j] == up_[j]) continue;
      const double d = reduced_cost(static_cast<int>(j), y, false);
      const bool boxed = std::isfinite(lo_[j]) && std::isfinite(up_[j]);
      if (st == kLower && d < -tol) {
        if (!boxed) return false;
        state_[j] = kUpper;
        x_[j] = up_[j];
        flipped = true;
      } else if (st == kUpper && d > tol) {
        if (!boxed) return false;
        state_[j] = kLower;
        x_[j] = lo_[j];
        flipped = true;
      } else if (st == kFree && std::abs(d) > tol) {
        return false;
      }
    }
    if (flipped) compute_basic_values();
    return true;
  }

  // Bounded dual simplex: the leaving row is the most infeasible basic
  // variable, the entering column comes from a two-pass ratio test on the
  // reduced costs. Returns optimal once primal feasible (the caller's
  // primal loop re-verifies), infeasible when a row admits no entering
  // column, or a limit status.
  LpStatus dual_phase(std::vector<double>& cb, std::vector<double>& y,
                      std::vector<double>& alpha, std::int64_t first_iteration) {
    const auto m = static_cast<std::size_t>(m_);
    const double ftol = opt_.feasibility_tolerance;
    const double ptol = 1e-7;
    std::vector<double> rho(m);
    std::vector<double> arow(total());
    std::vector<double> d(total());
    auto reprice = [&] {
      phase2_duals(cb, y);
      for (std::size_t j = 0; j < total(); ++j)
        d[j] = state_[j] == kBasic ? 0.0
                                   : reduced_cost(static_cast<int>(j), y, false);
    };
    reprice();
    const std::int64_t cap = 20 * static_cast<std::int64_t>(m_ + n_) + 1000;
    for (std::int64_t it = 0;; ++it) {
      if (it >= cap) return LpStatus::optimal;  // hand over to primal
      if (iterations_ - first_iteration >= opt_.iteration_limit)
        return LpStatus::iteration_limit;
      if (opt_.deadline && (iterations_ & 31) == 0 &&
          std::chrono::steady_clock::now() > *opt_.deadline)
        return LpStatus::time_limit;
      if (since_refactor_ >= opt_.refactor_interval) {
        refactor();
        compute_basic_values();
        reprice();
      }

      int r = -1;
      double worst = ftol;
      for (int k = 0; k < m_; ++k) {
        const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(k)]);
        const double v = std::max(lo_[j] - x_[j], x_[j] - up_[j]);
        if (v > worst) {
          worst = v;
          r = k;
        }
      }
      if (r < 0) return LpStatus::optimal;
      const auto rb = static_cast<std::size_t>(head_[static_cast<std::size_t>(r)]);
      const bool below = x_[rb] < lo_[rb];

      for (std::size_t i = 0; i < m; ++i) rho[i] = binv_[i * m + static_cast<std::size_t>(r)];

      // Eligible j move x_rb towards its violated bound: with direction
      // dir_j the basic value changes by -alpha_rj * dir_j per unit step.
      auto eligible = [&](std::size_t j) {
        const double a = arow[j];
        if (std::abs(a) <= ptol) return false;
        const auto st = state_[j];
        if (st == kBasic || lo_[j] == up_[j]) return false;
        if (st == kFree) return true;
        const double change = -a * (st == kLower ? 1.0 : -1.0);
        return below ? change > 0.0 : change < 0.0;
      };
      double theta_max = kInf;
      for (std::size_t j = 0; j < total(); ++j) {
        double a = 0.0;
        if (state_[j] != kBasic) {
          for_each_entry(static_cast<int>(j), [&](int i, double v) {
            a += rho[static_cast<std::size_t>(i)] * v;
          });
        }
        arow[j] = a;
        if (!eligible(j)) continue;
        theta_max = std::min(theta_max,
                             (std::abs(d[j]) + kDualFeasibility) / std::abs(a));
      }
      int q = -1;
      double q_mag = 0.0;
      if (std::isfinite(theta_max)) {
        for (std::size_t j = 0; j < total(); ++j) {
          if (!eligible(j)) continue;
          const double a = std::abs(arow[j]);
          if (std::abs(d[j]) / a > theta_max) continue;
          if (a > q_mag) {
            q_mag = a;
            q = static_cast<int>(j);
          }
        }
      }
      if (q < 0) {
        certificate_row_ = r;
        return LpStatus::infeasible;
      }
      const auto qj = static_cast<std::size_t>(q);
      double dir;
      if (state_[qj] == kFree)
        dir = (below ? -arow[qj] : arow[qj]) > 0.0 ? 1.0 : -1.0;
      else
        dir = state_[qj] == kLower ? 1.0 : -1.0;

      compute_column(q, alpha);
      const double arq = alpha[static_cast<std::size_t>(r)];
      if (std::abs(arq) <= ptol * 0.1 ||
          std::abs(arq - arow[qj]) > 1e-6 * (1.0 + std::abs(arq))) {
        // Row and column disagree numerically; start over from a fresh
        // factorisation.
        refactor();
        compute_basic_values();
        reprice();
        ++iterations_;
        continue;
      }
      const double theta_d = d[qj] / arow[qj];
      for (std::size_t j = 0; j < total(); ++j)
        if (arow[j] != 0.0) d[j] -= theta_d * arow[j];
      d[qj] = 0.0;
      d[rb] = -theta_d;

      const double target = below ? lo_[rb] : up_[rb];
      Step step;
      step.bounded = true;
      step.leave_row = r;
      step.theta = std::max(0.0, (x_[rb] - target) / (arq * dir));
      step.leave_at_upper = !below;
      apply_step(q, dir, step, alpha);
      ++iterations_;
    }
  }

  int largest_dual_row(const std::vector<double>& y) const {
    int best = -1;
    double mag = 0.0;
    for (int i = 0; i < m_; ++i)
      if (std::abs(y[static_cast<std::size_t>(i)]) > mag) {
        mag = std::abs(y[static_cast<std::size_t>(i)]);
        best = i;
      }
    return best;
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> rhs_;
  std::vector<double> lo_, up_, cost_;

  std::vector<int> head_;
  std::vector<State> state_;
  std::vector<double> x_;
  std::vector<double> binv_;
  std::vector<std::size_t> nz_;  // scratch index list
  bool factor_valid_ = false;
  int since_refactor_ = 0;

  SimplexOptions opt_;
  std::int64_t iterations_ = 0;
  int certificate_row_ = -1;
  int unbounded_column_ = -1;
};

}  // namespace speedcov
