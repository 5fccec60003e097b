#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "rgsc/solver.hpp"

namespace rgsc {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

enum class VarState : char { Basic, AtLower, AtUpper, FreeZero, Fixed };

/// Column-compressed constraint matrix with logical (-e_i) and artificial
/// (sigma_i e_i) columns appended implicitly.
struct Columns {
  int m = 0, n = 0;
  std::vector<int> start, row;
  std::vector<double> val;
  std::vector<double> sigma;

  int total() const { return n + 2 * m; }

  template <typename F>
  void for_each(int j, F&& f) const {
    if (j < n) {
      for (int p = start[j]; p < start[j + 1]; ++p) f(row[p], val[p]);
    } else if (j < n + m) {
      f(j - n, -1.0);
    } else {
      f(j - n - m, sigma[j - n - m]);
    }
  }

  double dot(int j, const Vec& y) const {
    double d = 0.0;
    for_each(j, [&](int i, double v) { d += v * y[i]; });
    return d;
  }
};

struct Eta {
  int pos;
  double pivot;
  std::vector<std::pair<int, double>> entries;  // i != pos
};

class BasisFactor {
 public:
  explicit BasisFactor(int m) : m_(m) {}

  void refactor(const Columns& cols, const std::vector<int>& basis) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(basis.size() * 3);
    for (int p = 0; p < m_; ++p)
      cols.for_each(basis[p], [&](int i, double v) { trip.emplace_back(i, p, v); });
    SpMat B(m_, m_);
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    lu_.analyzePattern(B);
    lu_.factorize(B);
    if (lu_.info() != Eigen::Success) throw std::runtime_error("simplex: singular basis");
    etas_.clear();
  }

  Vec ftran(const Vec& a) const {
    Vec v = lu_.solve(a);
    for (const Eta& e : etas_) {
      const double vp = v[e.pos] / e.pivot;
      v[e.pos] = vp;
      if (vp != 0.0)
        for (const auto& [i, a_i] : e.entries) v[i] -= a_i * vp;
    }
    return v;
  }

  Vec btran(Vec c) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = c[it->pos];
      for (const auto& [i, a_i] : it->entries) s -= a_i * c[i];
      c[it->pos] = s / it->pivot;
    }
    return lu_.transpose().solve(c);
  }

  void update(int pos, const Vec& alpha) {
    Eta e{pos, alpha[pos], {}};
    for (int i = 0; i < m_; ++i)
      if (i != pos && alpha[i] != 0.0) e.entries.emplace_back(i, alpha[i]);
    etas_.push_back(std::move(e));
  }

  std::size_t num_updates() const { return etas_.size(); }

 private:
  int m_;
  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

class Simplex {
 public:
  Simplex(Columns cols, std::vector<double> lower, std::vector<double> upper,
          std::vector<double> cost, const SolverOptions& opts)
      : cols_(std::move(cols)),
        m_(cols_.m),
        lower_(std::move(lower)),
        upper_(std::move(upper)),
        true_cost_(std::move(cost)),
        opts_(opts),
        factor_(cols_.m) {}

  LpStatus run(long& iterations);

  const std::vector<double>& x() const { return x_; }
  const std::vector<VarState>& state() const { return state_; }
  Vec duals() const { return factor_.btran(basic_costs()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

 private:
  void initialise();
  LpStatus phase(long& iterations);
  void recompute_basics();
  Vec basic_costs() const {
    Vec c(m_);
    for (int p = 0; p < m_; ++p) c[p] = cost_[basis_[p]];
    return c;
  }

  Columns cols_;
  int m_;
  std::vector<double> lower_, upper_, true_cost_, cost_;
  SolverOptions opts_;
  BasisFactor factor_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  double dual_tol_ = 0.0;
};

void Simplex::initialise() {
  const int n = cols_.n, N = cols_.total();
  x_.assign(N, 0.0);
  state_.assign(N, VarState::AtLower);
  basis_.assign(m_, -1);
  cols_.sigma.assign(m_, 1.0);

  for (int j = 0; j < n; ++j) {
    if (lower_[j] == upper_[j]) {
      state_[j] = VarState::Fixed;
      x_[j] = lower_[j];
    } else if (std::isfinite(lower_[j])) {
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      state_[j] = VarState::AtUpper;
      x_[j] = upper_[j];
    } else {
      state_[j] = VarState::FreeZero;
    }
  }
  std::vector<double> activity(m_, 0.0);
  for (int j = 0; j < n; ++j)
    if (x_[j] != 0.0) cols_.for_each(j, [&](int i, double v) { activity[i] += v * x_[j]; });

  for (int i = 0; i < m_; ++i) {
    const int r = n + i, a = n + m_ + i;
    const double act = activity[i];
    if (act >= lower_[r] - opts_.tol_feas && act <= upper_[r] + opts_.tol_feas) {
      basis_[i] = r;
      state_[r] = VarState::Basic;
      x_[r] = act;
      upper_[a] = 0.0;
      state_[a] = VarState::Fixed;
      x_[a] = 0.0;
    } else {
      const double b = act < lower_[r] ? lower_[r] : upper_[r];
      x_[r] = b;
      state_[r] = lower_[r] == upper_[r] ? VarState::Fixed
                  : b == lower_[r]       ? VarState::AtLower
                                         : VarState::AtUpper;
      cols_.sigma[i] = b > act ? 1.0 : -1.0;
      basis_[i] = a;
      state_[a] = VarState::Basic;
      x_[a] = std::abs(b - act);
    }
  }
}

void Simplex::recompute_basics() {
  Vec rhs = Vec::Zero(m_);
  const int N = cols_.total();
  for (int j = 0; j < N; ++j) {
    if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
    cols_.for_each(j, [&](int i, double v) { rhs[i] -= v * x_[j]; });
  }
  const Vec xb = factor_.ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[basis_[p]] = xb[p];
}

LpStatus Simplex::phase(long& iterations) {
  const int N = cols_.total();
  double cmax = 0.0;
  for (double c : cost_) cmax = std::max(cmax, std::abs(c));
  dual_tol_ = opts_.tol_opt * std::max(1.0, cmax);
  const double pivot_tol = 1e-9;

  factor_.refactor(cols_, basis_);
  recompute_basics();

  int degenerate = 0;
  bool bland = false;
  std::vector<int> pos_of(N, -1);
  for (int p = 0; p < m_; ++p) pos_of[basis_[p]] = p;

  while (true) {
    if (iterations >= opts_.iteration_limit) return LpStatus::IterationLimit;

    const Vec y = factor_.btran(basic_costs());

    int enter = -1;
    double best = 0.0, enter_d = 0.0;
    for (int j = 0; j < N; ++j) {
      const VarState st = state_[j];
      if (st == VarState::Basic || st == VarState::Fixed) continue;
      const double d = cost_[j] - cols_.dot(j, y);
      bool eligible = false;
      if (st == VarState::AtLower) eligible = d < -dual_tol_;
      else if (st == VarState::AtUpper) eligible = d > dual_tol_;
      else eligible = std::abs(d) > dual_tol_;
      if (!eligible) continue;
      if (bland) {
        enter = j;
        enter_d = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        enter_d = d;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    Vec a = Vec::Zero(m_);
    cols_.for_each(enter, [&](int i, double v) { a[i] = v; });
    const Vec alpha = factor_.ftran(a);
    const double dir = enter_d < 0.0 ? 1.0 : -1.0;

    // Harris two-pass ratio test (plain min-ratio with index ties in Bland mode).
    const double flip = upper_[enter] - lower_[enter];
    double theta_max = kInf;
    if (!bland) {
      for (int p = 0; p < m_; ++p) {
        if (std::abs(alpha[p]) <= pivot_tol) continue;
        const int b = basis_[p];
        const double rate = -dir * alpha[p];
        const double r = rate < 0.0 ? (x_[b] - lower_[b] + opts_.tol_feas) / -rate
                                    : (upper_[b] + opts_.tol_feas - x_[b]) / rate;
        theta_max = std::min(theta_max, r);
      }
    }
    int leave = -1;
    double theta = kInf, best_pivot = 0.0;
    for (int p = 0; p < m_; ++p) {
      if (std::abs(alpha[p]) <= pivot_tol) continue;
      const int b = basis_[p];
      const double rate = -dir * alpha[p];
      const double bound = rate < 0.0 ? lower_[b] : upper_[b];
      if (!std::isfinite(bound)) continue;
      const double r = std::max(0.0, (bound - x_[b]) / rate);
      if (bland) {
        if (r < theta || (r == theta && leave >= 0 && b < basis_[leave])) {
          theta = r;
          leave = p;
        }
      } else if (r <= theta_max && std::abs(alpha[p]) > best_pivot) {
        best_pivot = std::abs(alpha[p]);
        theta = r;
        leave = p;
      }
    }

    ++iterations;
    if (flip <= theta) {
      if (!std::isfinite(flip)) return LpStatus::Unbounded;
      for (int p = 0; p < m_; ++p)
        if (alpha[p] != 0.0) x_[basis_[p]] -= dir * flip * alpha[p];
      if (state_[enter] == VarState::AtLower) {
        state_[enter] = VarState::AtUpper;
        x_[enter] = upper_[enter];
      } else {
        state_[enter] = VarState::AtLower;
        x_[enter] = lower_[enter];
      }
      degenerate = 0;
      bland = false;
      continue;
    }
    if (leave < 0) return LpStatus::Unbounded;

    for (int p = 0; p < m_; ++p)
      if (alpha[p] != 0.0) x_[basis_[p]] -= dir * theta * alpha[p];
    x_[enter] += dir * theta;

    const int out = basis_[leave];
    const double rate = -dir * alpha[leave];
    if (lower_[out] == upper_[out]) {
      state_[out] = VarState::Fixed;
      x_[out] = lower_[out];
    } else if (rate < 0.0) {
      state_[out] = VarState::AtLower;
      x_[out] = lower_[out];
    } else {
      state_[out] = VarState::AtUpper;
      x_[out] = upper_[out];
    }
    pos_of[out] = -1;
    basis_[leave] = enter;
    pos_of[enter] = leave;
    state_[enter] = VarState::Basic;

    if (theta <= 1e-12) {
      if (++degenerate >= opts_.degenerate_stall) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }

    if (static_cast<int>(factor_.num_updates()) + 1 >= opts_.refactor_interval) {
      factor_.refactor(cols_, basis_);
      recompute_basics();
    } else {
      factor_.update(leave, alpha);
    }
  }
}

LpStatus Simplex::run(long& iterations) {
  initialise();
  const int n = cols_.n, N = cols_.total();

  bool need_phase1 = false;
  for (int i = 0; i < m_; ++i)
    if (state_[n + m_ + i] == VarState::Basic) need_phase1 = true;

  if (need_phase1) {
    cost_.assign(N, 0.0);
    for (int i = 0; i < m_; ++i) cost_[n + m_ + i] = 1.0;
    const LpStatus st = phase(iterations);
    if (st == LpStatus::IterationLimit) return st;
    factor_.refactor(cols_, basis_);
    recompute_basics();
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) infeas = std::max(infeas, x_[n + m_ + i]);
    if (infeas > opts_.tol_feas) return LpStatus::Infeasible;
    for (int i = 0; i < m_; ++i) {
      const int a = n + m_ + i;
      upper_[a] = 0.0;
      if (state_[a] != VarState::Basic) {
        state_[a] = VarState::Fixed;
        x_[a] = 0.0;
      }
    }
  }

  cost_.assign(N, 0.0);
  std::copy(true_cost_.begin(), true_cost_.end(), cost_.begin());
  const LpStatus st = phase(iterations);
  if (st == LpStatus::Optimal) {
    factor_.refactor(cols_, basis_);
    recompute_basics();
  }
  return st;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const SolverOptions& opts) {
  const int n_all = lp.num_cols(), m = lp.num_rows();
  LpResult res;

  for (int j = 0; j < n_all; ++j)
    if (lp.col_lower[j] > lp.col_upper[j] + opts.tol_feas) {
      res.status = LpStatus::Infeasible;
      return res;
    }

  // Eliminate fixed columns.
  std::vector<int> kept;
  std::vector<int> new_index(n_all, -1);
  std::vector<double> fixed_value(n_all, 0.0);
  double offset = lp.objective_offset;
  for (int j = 0; j < n_all; ++j) {
    if (lp.col_lower[j] >= lp.col_upper[j]) {
      fixed_value[j] = lp.col_lower[j];
      offset += lp.cost[j] * fixed_value[j];
    } else {
      new_index[j] = static_cast<int>(kept.size());
      kept.push_back(j);
    }
  }
  const int n = static_cast<int>(kept.size());

  Columns cols;
  cols.m = m;
  cols.n = n;
  std::vector<int> counts(n + 1, 0);
  std::vector<double> row_shift(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (std::size_t p = lp.row_start[i]; p < lp.row_start[i + 1]; ++p) {
      const int j = lp.row_index[p];
      if (new_index[j] >= 0) ++counts[new_index[j] + 1];
      else row_shift[i] += lp.row_value[p] * fixed_value[j];
    }
  for (int j = 0; j < n; ++j) counts[j + 1] += counts[j];
  cols.start = counts;
  cols.row.resize(counts[n]);
  cols.val.resize(counts[n]);
  std::vector<int> fill(counts.begin(), counts.end() - 1);
  for (int i = 0; i < m; ++i)
    for (std::size_t p = lp.row_start[i]; p < lp.row_start[i + 1]; ++p) {
      const int j = new_index[lp.row_index[p]];
      if (j < 0) continue;
      cols.row[fill[j]] = i;
      cols.val[fill[j]++] = lp.row_value[p];
    }

  const int N = n + 2 * m;
  std::vector<double> lower(N), upper(N), cost(N, 0.0);
  for (int k = 0; k < n; ++k) {
    lower[k] = lp.col_lower[kept[k]];
    upper[k] = lp.col_upper[kept[k]];
    cost[k] = lp.cost[kept[k]];
  }
  for (int i = 0; i < m; ++i) {
    lower[n + i] = lp.row_lower[i] - row_shift[i];
    upper[n + i] = lp.row_upper[i] - row_shift[i];
    lower[n + m + i] = 0.0;
    upper[n + m + i] = kInf;
  }

  res.primal.assign(n_all, 0.0);
  res.dual.assign(m, 0.0);
  res.reduced_cost.assign(n_all, 0.0);

  if (m == 0) {
    // Pure bound problem: each column independently at its cheaper bound.
    for (int j = 0; j < n_all; ++j) {
      const double c = lp.cost[j];
      double v = new_index[j] < 0 ? fixed_value[j] : 0.0;
      if (new_index[j] >= 0) {
        if (c > 0) v = lp.col_lower[j];
        else if (c < 0) v = lp.col_upper[j];
        else v = std::isfinite(lp.col_lower[j]) ? lp.col_lower[j]
                 : std::isfinite(lp.col_upper[j]) ? lp.col_upper[j] : 0.0;
        if (!std::isfinite(v)) {
          res.status = LpStatus::Unbounded;
          return res;
        }
      }
      res.primal[j] = v;
      res.reduced_cost[j] = c;
    }
    res.status = LpStatus::Optimal;
    res.objective = lp.objective(res.primal);
    res.dual_objective = res.objective;
    return res;
  }

  Simplex simplex(std::move(cols), std::move(lower), std::move(upper), std::move(cost), opts);
  res.status = simplex.run(res.iterations);
  if (res.status != LpStatus::Optimal) return res;

  const auto& x = simplex.x();
  for (int j = 0; j < n_all; ++j) res.primal[j] = new_index[j] < 0 ? fixed_value[j] : x[new_index[j]];
  res.objective = lp.objective(res.primal);

  const Vec y = simplex.duals();
  for (int i = 0; i < m; ++i) res.dual[i] = y[i];
  // Dual objective from bounds only: sum over rows of y_i * active row bound
  // plus reduced cost times the bound of each nonbasic column.
  double dual_obj = offset;
  const auto& st = simplex.state();
  for (int j = 0; j < n_all; ++j) res.reduced_cost[j] = lp.cost[j];
  for (int i = 0; i < m; ++i)
    for (std::size_t p = lp.row_start[i]; p < lp.row_start[i + 1]; ++p)
      res.reduced_cost[lp.row_index[p]] -= lp.row_value[p] * y[i];
  for (int k = 0; k < n; ++k) {
    if (st[k] == VarState::AtLower || st[k] == VarState::Fixed)
      dual_obj += res.reduced_cost[kept[k]] * simplex.lower()[k];
    else if (st[k] == VarState::AtUpper)
      dual_obj += res.reduced_cost[kept[k]] * simplex.upper()[k];
  }
  for (int i = 0; i < m; ++i) {
    const int r = n + i;
    if (st[r] == VarState::AtLower || st[r] == VarState::Fixed)
      dual_obj += y[i] * simplex.lower()[r];
    else if (st[r] == VarState::AtUpper)
      dual_obj += y[i] * simplex.upper()[r];
  }
  res.dual_objective = dual_obj;
  return res;
}

std::vector<LpViolation> check_point(const LinearProgram& lp, const std::vector<double>& x,
                                     double tol_feas, double tol_int) {
  std::vector<LpViolation> out;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const double a = lp.row_activity(i, x);
    const double excess = std::max(lp.row_lower[i] - a, a - lp.row_upper[i]);
    if (excess > tol_feas) out.push_back({LpViolation::Row, i, excess});
  }
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double excess = std::max(lp.col_lower[j] - x[j], x[j] - lp.col_upper[j]);
    if (excess > tol_feas) out.push_back({LpViolation::Bound, j, excess});
    if (lp.is_integer[j]) {
      const double frac = std::abs(x[j] - std::round(x[j]));
      if (frac > tol_int) out.push_back({LpViolation::Integrality, j, frac});
    }
  }
  return out;
}

}  // namespace rgsc
