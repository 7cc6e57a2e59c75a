#include "redalert/sat.hpp"

#include <algorithm>

namespace redalert {

void SatSolver::add_clause(std::vector<Lit> clause) {
  if (clause.empty()) {
    has_empty_ = true;
    return;
  }
  for (Lit l : clause) ensure_vars(lit_var(l) + 1);
  clauses_.push_back(std::move(clause));
}

namespace {

class Search {
 public:
  Search(std::uint32_t n, const std::vector<std::vector<Lit>>& clauses) : val_(n, -1), clauses_(clauses) {}

  // 1 = true, 0 = false, -1 = unassigned
  int value(Lit l) const {
    int v = val_[lit_var(l)];
    return v < 0 ? -1 : (lit_neg(l) ? 1 - v : v);
  }

  bool assign(Lit l) {
    int cur = value(l);
    if (cur == 0) return false;
    if (cur == 1) return true;
    val_[lit_var(l)] = lit_neg(l) ? 0 : 1;
    trail_.push_back(lit_var(l));
    return true;
  }

  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : clauses_) {
        Lit unit = 0;
        int open = 0;
        bool sat = false;
        for (Lit l : c) {
          int v = value(l);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v < 0 && ++open == 1) unit = l;
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          assign(unit);
          changed = true;
        }
      }
    }
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      val_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  SatResult run(const std::vector<Lit>& assumptions) {
    for (Lit a : assumptions)
      if (!assign(a)) return {};
    struct Decision {
      std::size_t trail_size;
      std::uint32_t var;
      bool flipped;
    };
    std::vector<Decision> stack;
    std::uint32_t next = 0;
    while (true) {
      if (!propagate()) {
        while (!stack.empty() && stack.back().flipped) stack.pop_back();
        if (stack.empty()) return {};
        Decision& d = stack.back();
        undo_to(d.trail_size);
        d.flipped = true;
        assign(neg_lit(d.var));
        next = 0;
        continue;
      }
      while (next < val_.size() && val_[next] >= 0) ++next;
      if (next == val_.size()) {
        SatResult r;
        r.satisfiable = true;
        r.model.resize(val_.size());
        for (std::size_t i = 0; i < val_.size(); ++i) r.model[i] = val_[i] == 1;
        return r;
      }
      stack.push_back({trail_.size(), next, false});
      assign(pos_lit(next));
    }
  }

 private:
  std::vector<int> val_;
  std::vector<std::uint32_t> trail_;
  const std::vector<std::vector<Lit>>& clauses_;
};

}  // namespace

SatResult SatSolver::solve(const std::vector<Lit>& assumptions) const {
  if (has_empty_) return {};
  std::uint32_t n = num_vars_;
  for (Lit a : assumptions) n = std::max(n, lit_var(a) + 1);
  Search s(n, clauses_);
  return s.run(assumptions);
}

}  // namespace redalert
