#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "redalert/posdom.hpp"
#include "redalert/term.hpp"

namespace redalert {

/// Generator of variable names that cannot clash with program variables.
class FreshNames {
 public:
  std::string next() { return "_K" + std::to_string(++n_); }

 private:
  long n_ = 0;
};

/// A conjunction of equations x = t in idempotent solved form, or False.
struct ConstraintConj {
  std::map<std::string, Term> eqs;
  bool is_false = false;

  static ConstraintConj falsity() {
    ConstraintConj c;
    c.is_false = true;
    return c;
  }
  bool operator<(const ConstraintConj& o) const;
  bool operator==(const ConstraintConj&) const = default;
};

/// Replaces each subterm at depth k by a fresh variable (k >= 1).
Term truncate(const Term& t, int k, FreshNames& fresh);

/// Adds s = t to c by unification with occurs check; False on failure.
/// The result is not truncated.
ConstraintConj add_equation(ConstraintConj c, const Term& s, const Term& t);
/// Truncates every right-hand side to depth k.
ConstraintConj truncate_all(const ConstraintConj& c, int k, FreshNames& fresh);
/// Most general unifier of both conjunctions, truncated to depth k.
ConstraintConj conj_cc(const ConstraintConj& a, const ConstraintConj& b, int k, FreshNames& fresh);

/// Variables of `c` (among `among`) bound to ground terms.
VarSet fix_of(const ConstraintConj& c, const VarSet& among);
VarSet fix_of(const ConstraintConj& c);

/// Existential projection onto Y. Variables outside Y are renamed `_1`, `_2`, ...
/// by first occurrence, so equal constraints get equal representations.
ConstraintConj project_exists(const ConstraintConj& c, const VarSet& Y);
/// Renames every variable outside Y by appending `suffix`.
ConstraintConj rename_apart(const ConstraintConj& c, const VarSet& Y, const std::string& suffix);
/// The value of variable v under c (v itself when unbound).
Term resolve(const ConstraintConj& c, const std::string& v);

std::string to_string(const ConstraintConj& c);

/// Finite set of constraint conjunctions over a fixed scope, with widening to
/// top once more than `cap` elements accumulate.
struct DepthKSet {
  std::set<ConstraintConj> elems;
  VarSet scope;
  int k = 3;
  std::size_t cap = 64;
  bool is_top = false;

  static DepthKSet empty(VarSet scope, int k, std::size_t cap);
  static DepthKSet truth(VarSet scope, int k, std::size_t cap);
  static DepthKSet top(VarSet scope, int k, std::size_t cap);

  /// Projects c onto the scope and inserts it, widening on overflow.
  void insert(const ConstraintConj& c);
  bool operator==(const DepthKSet& o) const { return is_top == o.is_top && (is_top || elems == o.elems); }
};

DepthKSet union_dk(const DepthKSet& a, const DepthKSet& b);
DepthKSet conj_dk(const DepthKSet& a, const DepthKSet& b, FreshNames& fresh);
/// Same elements projected onto a new scope.
DepthKSet reproject(const DepthKSet& s, const VarSet& scope);

std::string to_string(const DepthKSet& s);

/// Sufficient condition for mutual exclusion of two success sets over `scope`:
/// the disjunction of /\Y over all Y (|Y| <= max_subset) on which every pair of
/// projections clashes. Either set empty gives true; a top operand gives bottom.
PosFormula abstract_mux(const DepthKSet& s1, const DepthKSet& s2, const std::vector<std::string>& scope,
                        const std::vector<VarId>& ids, const SpacePtr& space, std::size_t max_subset);

}  // namespace redalert
