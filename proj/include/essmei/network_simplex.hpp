#pragma once

// Minimum-cost flow via the network simplex method with arc capacities.
//
// Scope: linear min-cost flow on a directed graph with per-arc bounds
// [lower, upper] and node supplies summing to zero. Lower bounds are shifted
// away on entry, so the pivot machinery only ever sees [0, capacity] arcs.
// The caller supplies an initial spanning tree whose implied flows must be
// feasible; this library's flow problems always have a natural one, which
// avoids a Phase 1 / big-M bootstrap and its numerical noise entirely.
//
// Pivoting uses block-search Dantzig pricing and falls back to Bland's rule
// after a long run of degenerate steps, which guarantees termination. After
// each basis change the node potentials and tree labels are recomputed from
// the root in O(n); with the problem sizes this library feeds (a few thousand
// nodes, ~3 arcs per node) the simple recompute is far below any time budget
// and removes a whole class of subtree-relabeling bugs.
//
// verify() returns a primal/dual certificate (balance, bounds, complementary
// slackness) so callers can assert optimality instead of trusting the solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "essmei/errors.hpp"

namespace essmei {

class NetworkSimplex {
 public:
  explicit NetworkSimplex(int node_count)
      : supply_(node_count, 0.0) {
    if (node_count < 1) raise(ErrorKind::InvalidParams, "flow network needs at least one node");
  }

  void add_supply(int node, double b) { supply_.at(node) += b; }

  int add_arc(int tail, int head, double lower, double upper, double cost) {
    if (tail < 0 || head < 0 || tail >= node_count() || head >= node_count() || tail == head) {
      raise(ErrorKind::InvalidParams, "arc endpoints out of range");
    }
    if (!(lower <= upper)) {
      raise(ErrorKind::InvalidParams, "arc lower bound exceeds upper bound");
    }
    Arc a;
    a.tail = tail;
    a.head = head;
    a.cap = upper - lower;
    a.cost = cost;
    a.shift = lower;
    // A fixed lower bound is flow that always moves tail -> head.
    supply_[tail] -= lower;
    supply_[head] += lower;
    arcs_.push_back(a);
    return static_cast<int>(arcs_.size()) - 1;
  }

  int node_count() const { return static_cast<int>(supply_.size()); }
  int arc_count() const { return static_cast<int>(arcs_.size()); }

  // Flow and objective in the caller's (unshifted) space.
  double flow(int arc) const { return arcs_.at(arc).flow + arcs_.at(arc).shift; }

  double objective() const {
    double obj = 0.0;
    for (const Arc& a : arcs_) obj += a.cost * (a.flow + a.shift);
    return obj;
  }

  double potential(int node) const { return pi_.at(node); }
  long pivot_count() const { return pivots_; }

  struct Certificate {
    double max_balance_violation = 0.0;
    double max_bound_violation = 0.0;
    double max_dual_violation = 0.0;  // complementary slackness residual
    bool ok(double tol) const {
      return max_balance_violation <= tol && max_bound_violation <= tol &&
             max_dual_violation <= tol;
    }
  };

  // `tree` must hold exactly node_count()-1 arc ids forming a spanning tree;
  // every non-tree arc starts at its lower bound. Raises Infeasible when the
  // implied tree flows violate capacities.
  void solve(const std::vector<int>& tree) {
    const int n = node_count();
    double total = 0.0, scale = 0.0;
    for (double b : supply_) {
      total += b;
      scale += std::abs(b);
    }
    if (std::abs(total) > 1e-9 * (1.0 + scale)) {
      raise(ErrorKind::Infeasible, "node supplies do not balance");
    }
    if (static_cast<int>(tree.size()) != n - 1) {
      raise(ErrorKind::InvalidParams, "initial tree must have node_count - 1 arcs");
    }

    for (Arc& a : arcs_) {
      a.flow = 0.0;
      a.state = State::kLower;
    }
    adj_.assign(n, {});
    for (int id : tree) {
      Arc& a = arcs_.at(id);
      if (a.state == State::kTree) {
        raise(ErrorKind::InvalidParams, "initial tree repeats an arc");
      }
      a.state = State::kTree;
      adj_[a.tail].push_back(id);
      adj_[a.head].push_back(id);
    }
    relabel_from_root();
    for (int v = 0; v < n; ++v) {
      if (v != root_ && parent_[v] < 0) {
        raise(ErrorKind::InvalidParams, "initial tree does not span the graph");
      }
    }
    push_initial_tree_flows();

    double max_cost = 0.0;
    for (const Arc& a : arcs_) max_cost = std::max(max_cost, std::abs(a.cost));
    tol_rc_ = 1e-9 * (1.0 + max_cost);

    pivots_ = 0;
    long degenerate_streak = 0;
    bool bland = false;
    const long streak_limit = 4L * n + 64;
    const long hard_limit = 64L * arc_count() + 100000;

    while (true) {
      const int e = bland ? find_entering_bland() : find_entering_block();
      if (e < 0) break;
      const double theta = pivot(e);
      if (++pivots_ > hard_limit) {
        raise(ErrorKind::SolverFailure, "pivot limit exceeded; solver is cycling");
      }
      if (theta <= 1e-12) {
        if (++degenerate_streak > streak_limit) bland = true;
      } else {
        degenerate_streak = 0;
      }
    }
    solved_ = true;
  }

  Certificate verify() const {
    Certificate cert;
    std::vector<double> balance(supply_);
    for (const Arc& a : arcs_) {
      balance[a.tail] -= a.flow;
      balance[a.head] += a.flow;
      cert.max_bound_violation =
          std::max({cert.max_bound_violation, -a.flow, a.flow - a.cap});
      if (a.cap <= 0.0) continue;  // fixed arc, any dual sign is fine
      const double rc = reduced_cost(a);
      switch (a.state) {
        case State::kLower:
          cert.max_dual_violation = std::max(cert.max_dual_violation, -rc);
          break;
        case State::kUpper:
          cert.max_dual_violation = std::max(cert.max_dual_violation, rc);
          break;
        case State::kTree:
          cert.max_dual_violation = std::max(cert.max_dual_violation, std::abs(rc));
          break;
      }
    }
    for (double b : balance) {
      cert.max_balance_violation = std::max(cert.max_balance_violation, std::abs(b));
    }
    return cert;
  }

 private:
  enum class State : std::uint8_t { kLower, kTree, kUpper };

  struct Arc {
    int tail = 0;
    int head = 0;
    double cap = 0.0;
    double cost = 0.0;
    double shift = 0.0;  // original lower bound
    double flow = 0.0;   // in shifted space, within [0, cap]
    State state = State::kLower;
  };

  double reduced_cost(const Arc& a) const { return a.cost + pi_[a.tail] - pi_[a.head]; }

  // Rebuilds parent/pred/depth and potentials by a DFS over the tree arcs.
  void relabel_from_root() {
    const int n = node_count();
    parent_.assign(n, -1);
    pred_arc_.assign(n, -1);
    depth_.assign(n, 0);
    pi_.assign(n, 0.0);
    order_.clear();
    order_.reserve(n);
    std::vector<int> stack = {root_};
    std::vector<char> seen(n, 0);
    seen[root_] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      order_.push_back(v);
      for (int id : adj_[v]) {
        const Arc& a = arcs_[id];
        const int w = a.tail == v ? a.head : a.tail;
        if (seen[w]) continue;
        seen[w] = 1;
        parent_[w] = v;
        pred_arc_[w] = id;
        depth_[w] = depth_[v] + 1;
        // Tree arcs have zero reduced cost: cost + pi[tail] - pi[head] = 0.
        pi_[w] = a.tail == v ? pi_[v] + a.cost : pi_[v] - a.cost;
        stack.push_back(w);
      }
    }
  }

  // Derives the unique tree flows that balance all supplies, given that every
  // non-tree arc carries zero (shifted) flow.
  void push_initial_tree_flows() {
    std::vector<double> net(supply_);
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const int v = *it;
      if (v == root_) continue;
      Arc& a = arcs_[pred_arc_[v]];
      // Subtree surplus leaves through the predecessor arc.
      const double f = a.tail == v ? net[v] : -net[v];
      if (f < -1e-9 || f > a.cap + 1e-9) {
        raise(ErrorKind::Infeasible, "initial tree flow violates arc bounds");
      }
      a.flow = std::min(std::max(f, 0.0), a.cap);
      net[parent_[v]] += net[v];
      net[v] = 0.0;
    }
  }

  double violation(const Arc& a) const {
    if (a.state == State::kTree || a.cap <= 0.0) return 0.0;
    const double rc = reduced_cost(a);
    if (a.state == State::kLower) return -rc;
    return rc;
  }

  int find_entering_block() {
    const int m = arc_count();
    if (m == 0) return -1;
    int block = 64;
    while (block * block < m) block *= 2;
    int best = -1;
    double best_viol = tol_rc_;
    int pos = next_scan_;
    int scanned = 0;
    while (scanned < m) {
      const int stop = std::min(scanned + block, m);
      for (; scanned < stop; ++scanned, ++pos) {
        if (pos >= m) pos = 0;
        const double v = violation(arcs_[pos]);
        if (v > best_viol) {
          best_viol = v;
          best = pos;
        }
      }
      if (best >= 0) {
        next_scan_ = pos;
        return best;
      }
    }
    return -1;
  }

  int find_entering_bland() const {
    for (int a = 0; a < arc_count(); ++a) {
      if (violation(arcs_[a]) > tol_rc_) return a;
    }
    return -1;
  }

  // One simplex step on entering arc e. Returns the amount of flow moved.
  double pivot(int e) {
    Arc& ea = arcs_[e];
    const int sign_e = ea.state == State::kLower ? +1 : -1;

    // The cycle consists of e and the tree path between its endpoints. Flow
    // travels head -> tail through the tree when e enters rising from its
    // lower bound, tail -> head when it falls from its upper bound.
    cycle_.clear();
    int x = sign_e > 0 ? ea.head : ea.tail;  // flow source side in the tree
    int y = sign_e > 0 ? ea.tail : ea.head;  // flow sink side
    while (depth_[x] > depth_[y]) {
      const Arc& a = arcs_[pred_arc_[x]];
      // Travel direction is x -> parent(x), i.e. away from the source side.
      cycle_.push_back({pred_arc_[x], a.tail == x ? +1 : -1});
      x = parent_[x];
    }
    while (depth_[y] > depth_[x]) {
      const Arc& a = arcs_[pred_arc_[y]];
      // Travel direction is parent(y) -> y, toward the sink side.
      cycle_.push_back({pred_arc_[y], a.tail == y ? -1 : +1});
      y = parent_[y];
    }
    while (x != y) {
      const Arc& ax = arcs_[pred_arc_[x]];
      cycle_.push_back({pred_arc_[x], ax.tail == x ? +1 : -1});
      x = parent_[x];
      const Arc& ay = arcs_[pred_arc_[y]];
      cycle_.push_back({pred_arc_[y], ay.tail == y ? -1 : +1});
      y = parent_[y];
    }

    double theta = sign_e > 0 ? ea.cap - ea.flow : ea.flow;
    int blocking = e;
    int blocking_sign = sign_e;
    for (const auto& [id, s] : cycle_) {
      const Arc& a = arcs_[id];
      const double room = s > 0 ? a.cap - a.flow : a.flow;
      if (room < theta || (room == theta && id < blocking)) {
        theta = room;
        blocking = id;
        blocking_sign = s;
      }
    }
    theta = std::max(theta, 0.0);
    if (!std::isfinite(theta)) {
      raise(ErrorKind::SolverFailure, "unbounded flow direction");
    }

    ea.flow += sign_e * theta;
    for (const auto& [id, s] : cycle_) {
      Arc& a = arcs_[id];
      a.flow += s * theta;
      if (a.flow < 0.0) a.flow = 0.0;
      if (a.flow > a.cap) a.flow = a.cap;
    }

    if (blocking == e) {
      // The entering arc ran bound to bound; the tree is unchanged.
      ea.state = sign_e > 0 ? State::kUpper : State::kLower;
      ea.flow = sign_e > 0 ? ea.cap : 0.0;
      return theta;
    }

    Arc& la = arcs_[blocking];
    la.state = blocking_sign > 0 ? State::kUpper : State::kLower;
    la.flow = blocking_sign > 0 ? la.cap : 0.0;
    detach(blocking);
    ea.state = State::kTree;
    adj_[ea.tail].push_back(e);
    adj_[ea.head].push_back(e);
    relabel_from_root();
    return theta;
  }

  void detach(int arc_id) {
    for (int v : {arcs_[arc_id].tail, arcs_[arc_id].head}) {
      auto& list = adj_[v];
      for (size_t i = 0; i < list.size(); ++i) {
        if (list[i] == arc_id) {
          list[i] = list.back();
          list.pop_back();
          break;
        }
      }
    }
  }

  std::vector<double> supply_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_, pred_arc_, depth_, order_;
  std::vector<double> pi_;
  std::vector<std::pair<int, int>> cycle_;
  int root_ = 0;
  int next_scan_ = 0;
  double tol_rc_ = 1e-9;
  long pivots_ = 0;
  bool solved_ = false;
};

}  // namespace essmei
