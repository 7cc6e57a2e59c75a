#pragma once

#include <cstdint>
#include <vector>

namespace redalert {

/// Literal encoding shared by the solver and the Pos domain: 2*var for the
/// positive literal, 2*var+1 for its negation.
using Lit = std::uint32_t;
inline Lit pos_lit(std::uint32_t v) { return 2 * v; }
inline Lit neg_lit(std::uint32_t v) { return 2 * v + 1; }
inline std::uint32_t lit_var(Lit l) { return l >> 1; }
inline bool lit_neg(Lit l) { return (l & 1u) != 0; }
inline Lit lit_not(Lit l) { return l ^ 1u; }

struct SatResult {
  bool satisfiable = false;
  std::vector<bool> model;  // indexed by variable; empty when unsatisfiable
};

/// Complete DPLL solver with unit propagation. Branching is deterministic:
/// lowest unassigned variable first, true before false.
class SatSolver {
 public:
  explicit SatSolver(std::uint32_t num_vars = 0) : num_vars_(num_vars) {}

  std::uint32_t num_vars() const { return num_vars_; }
  void ensure_vars(std::uint32_t n) {
    if (n > num_vars_) num_vars_ = n;
  }
  /// An empty clause makes the instance unsatisfiable.
  void add_clause(std::vector<Lit> clause);
  SatResult solve(const std::vector<Lit>& assumptions = {}) const;

 private:
  std::uint32_t num_vars_;
  std::vector<std::vector<Lit>> clauses_;
  bool has_empty_ = false;
};

}  // namespace redalert
