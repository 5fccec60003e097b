#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "rgsc/solver.hpp"

namespace rgsc {

std::string to_string(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::NodeLimit: return "node-limit";
    case MipStatus::TimeLimit: return "time-limit";
    case MipStatus::GapLimit: return "gap-limit";
  }
  return "?";
}

std::string to_string(Branching b) {
  return b == Branching::PseudoCost ? "pseudo-cost" : "most-fractional";
}

Branching parse_branching(const std::string& name) {
  if (name == "most-fractional") return Branching::MostFractional;
  if (name == "pseudo-cost") return Branching::PseudoCost;
  throw std::invalid_argument("unknown branching rule '" + name + "'");
}

namespace {

struct BoundChange {
  int col;
  double lower, upper;
};

struct Node {
  long id = 0;
  double parent_bound = -kInf;
  std::vector<BoundChange> changes;
  int branch_col = -1;
  double branch_frac = 0.0;  // distance moved by the branching bound
  bool branch_up = false;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_bound != b.parent_bound) return a.parent_bound > b.parent_bound;
    return a.id > b.id;
  }
};

class PseudoCosts {
 public:
  explicit PseudoCosts(int n) : sum_up_(n, 0.0), sum_down_(n, 0.0), n_up_(n, 0), n_down_(n, 0) {}

  void record(int col, bool up, double frac, double gain) {
    if (frac <= 0.0) return;
    const double unit = std::max(gain, 0.0) / frac;
    if (up) {
      sum_up_[col] += unit;
      ++n_up_[col];
    } else {
      sum_down_[col] += unit;
      ++n_down_[col];
    }
  }

  double estimate(int col, bool up) const {
    const auto& sum = up ? sum_up_ : sum_down_;
    const auto& cnt = up ? n_up_ : n_down_;
    if (cnt[col] > 0) return sum[col] / cnt[col];
    double total = 0.0;
    long count = 0;
    for (std::size_t j = 0; j < sum.size(); ++j)
      if (cnt[j] > 0) {
        total += sum[j] / cnt[j];
        ++count;
      }
    return count > 0 ? total / count : 1.0;
  }

 private:
  std::vector<double> sum_up_, sum_down_;
  std::vector<long> n_up_, n_down_;
};

}  // namespace

MipResult solve_mip(const LinearProgram& lp, const SolverOptions& opts, const MipHooks& hooks) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  MipResult res;
  const int n = lp.num_cols();
  double incumbent_obj = kInf;
  std::optional<std::vector<double>> incumbent;

  auto try_incumbent = [&](std::vector<double> x) {
    for (int j = 0; j < n; ++j)
      if (lp.is_integer[j]) x[j] = std::round(x[j]);
    if (!check_point(lp, x, opts.tol_feas, opts.tol_int).empty()) return false;
    const double z = lp.objective(x);
    if (z < incumbent_obj) {
      incumbent_obj = z;
      incumbent = std::move(x);
      return true;
    }
    return false;
  };
  auto prune_tol = [&] { return opts.tol_opt * std::max(1.0, std::abs(incumbent_obj)); };

  if (hooks.start) try_incumbent(*hooks.start);

  PseudoCosts pseudo(n);
  std::vector<Node> stack;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
  long next_id = 0;
  stack.push_back(Node{next_id++, -kInf, {}, -1, 0.0, false});
  double lost_bound = kInf;  // bound of nodes whose LP hit the iteration limit

  LinearProgram work = lp;
  bool root = true;

  auto open_min = [&] {
    double b = lost_bound;
    for (const Node& nd : stack) b = std::min(b, nd.parent_bound);
    if (!heap.empty()) b = std::min(b, heap.top().parent_bound);
    return b;
  };
  auto global_bound = [&] { return std::min(open_min(), incumbent_obj); };
  auto gap_of = [&](double bound) {
    if (!incumbent) return kInf;
    return (incumbent_obj - bound) / std::max(1.0, std::abs(incumbent_obj));
  };

  MipStatus status = MipStatus::Optimal;
  while (!stack.empty() || !heap.empty()) {
    if (res.nodes >= opts.node_limit) {
      status = MipStatus::NodeLimit;
      break;
    }
    if (elapsed() >= opts.time_limit) {
      status = MipStatus::TimeLimit;
      break;
    }
    if (opts.mip_gap > 0.0 && incumbent && gap_of(global_bound()) <= opts.mip_gap) {
      status = MipStatus::GapLimit;
      break;
    }

    Node node;
    if (!incumbent && !stack.empty()) {
      node = std::move(stack.back());
      stack.pop_back();
    } else {
      for (Node& nd : stack) heap.push(std::move(nd));
      stack.clear();
      node = heap.top();
      heap.pop();
    }
    ++res.nodes;

    if (incumbent && node.parent_bound >= incumbent_obj - prune_tol()) {
      res.bound_trace.push_back(global_bound());
      continue;
    }

    work.col_lower = lp.col_lower;
    work.col_upper = lp.col_upper;
    for (const auto& c : node.changes) {
      work.col_lower[c.col] = std::max(work.col_lower[c.col], c.lower);
      work.col_upper[c.col] = std::min(work.col_upper[c.col], c.upper);
    }
    const LpResult rel = solve_lp(work, opts);

    if (root) {
      root = false;
      if (rel.status == LpStatus::Unbounded)
        throw std::runtime_error("branch-and-bound: LP relaxation is unbounded");
      if (rel.status == LpStatus::Optimal) {
        res.root_lp = rel.objective;
        if (hooks.root_heuristic)
          if (auto x = hooks.root_heuristic(rel.primal)) try_incumbent(std::move(*x));
      }
    }
    if (rel.status == LpStatus::IterationLimit) {
      lost_bound = std::min(lost_bound, node.parent_bound);
      res.bound_trace.push_back(global_bound());
      continue;
    }
    if (rel.status != LpStatus::Optimal) {
      res.bound_trace.push_back(global_bound());
      continue;
    }
    if (node.branch_col >= 0)
      pseudo.record(node.branch_col, node.branch_up, node.branch_frac,
                    rel.objective - node.parent_bound);
    const double node_bound = std::max(rel.objective, node.parent_bound);
    if (incumbent && node_bound >= incumbent_obj - prune_tol()) {
      res.bound_trace.push_back(global_bound());
      continue;
    }

    int branch = -1;
    double best_score = -1.0;
    for (int j = 0; j < n; ++j) {
      if (!lp.is_integer[j]) continue;
      const double v = rel.primal[j];
      const double frac = v - std::floor(v);
      const double dist = std::min(frac, 1.0 - frac);
      if (dist <= opts.tol_int) continue;
      double score = dist;
      if (opts.branching == Branching::PseudoCost) {
        const double down = std::max(frac * pseudo.estimate(j, false), 1e-6);
        const double up = std::max((1.0 - frac) * pseudo.estimate(j, true), 1e-6);
        score = down * up;
      }
      if (score > best_score) {
        best_score = score;
        branch = j;
      }
    }

    if (branch < 0) {
      try_incumbent(rel.primal);
      res.bound_trace.push_back(global_bound());
      continue;
    }

    const double v = rel.primal[branch];
    const double lo = std::floor(v), hi = std::ceil(v);
    Node down{next_id++, node_bound, node.changes, branch, v - lo, false};
    down.changes.push_back({branch, -kInf, lo});
    Node up{next_id++, node_bound, node.changes, branch, hi - v, true};
    up.changes.push_back({branch, hi, kInf});
    // The child on the rounding side is explored first while diving.
    if (v - lo >= 0.5) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    } else {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
    res.bound_trace.push_back(global_bound());
  }

  if (status == MipStatus::Optimal && lost_bound < incumbent_obj - prune_tol())
    status = MipStatus::NodeLimit;

  res.seconds = elapsed();
  res.incumbent = incumbent;
  res.objective = incumbent_obj;
  if (status == MipStatus::Optimal) {
    res.status = incumbent ? MipStatus::Optimal : MipStatus::Infeasible;
    res.bound = incumbent ? incumbent_obj : kInf;
  } else {
    res.status = status;
    res.bound = global_bound();
  }
  res.gap = incumbent ? gap_of(res.bound) : kInf;
  return res;
}

}  // namespace rgsc
