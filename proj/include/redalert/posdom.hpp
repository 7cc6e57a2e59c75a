#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "redalert/sat.hpp"

namespace redalert {

using VarId = std::uint32_t;

/// Append-only registry of Boolean variables. Formulas over different spaces
/// cannot be combined.
class VarSpace {
 public:
  /// Returns the variable registered under `key`, creating it on first use.
  VarId get(const std::string& key);
  /// A new variable whose key is derived from `base` and guaranteed unused.
  VarId fresh(const std::string& base);
  const std::string& name(VarId v) const;
  std::size_t size() const;
  bool has(const std::string& key) const;

 private:
  mutable std::mutex mu_;
  std::deque<std::string> names_;
  std::map<std::string, VarId> index_;
  std::map<std::string, int> counters_;
};

using SpacePtr = std::shared_ptr<VarSpace>;
inline SpacePtr make_space() { return std::make_shared<VarSpace>(); }

using PosClause = std::vector<Lit>;  // sorted, duplicate-free, non-tautological

/// A Boolean function in CNF, or the explicit bottom constant. Values stored
/// in fixpoint environments are positive or bottom; intermediate results of
/// implication may be arbitrary.
class PosFormula {
 public:
  PosFormula() = default;
  static PosFormula top(SpacePtr s);
  static PosFormula bottom(SpacePtr s);
  static PosFormula var(SpacePtr s, VarId v);
  static PosFormula lit(SpacePtr s, Lit l);
  static PosFormula conj_of(SpacePtr s, const std::vector<VarId>& vs);
  /// Simplifies the clause set; unsatisfiability is canonicalized to bottom.
  static PosFormula from_clauses(SpacePtr s, std::vector<PosClause> clauses);

  const SpacePtr& space() const { return space_; }
  bool is_bottom() const { return bottom_; }
  bool is_top() const { return !bottom_ && clauses_.empty(); }
  const std::vector<PosClause>& clauses() const { return clauses_; }
  /// f evaluated with every variable true.
  bool is_positive() const;
  std::vector<VarId> support() const;
  bool eval(const std::vector<bool>& assignment) const;

  bool operator==(const PosFormula& o) const {
    return space_ == o.space_ && bottom_ == o.bottom_ && clauses_ == o.clauses_;
  }

 private:
  SpacePtr space_;
  std::vector<PosClause> clauses_;
  bool bottom_ = false;
};

PosFormula conj(const PosFormula& a, const PosFormula& b);
PosFormula disj(const PosFormula& a, const PosFormula& b);
/// Material implication a -> b; the result may lie outside Pos.
PosFormula implies_fn(const PosFormula& a, const PosFormula& b);
PosFormula negate(const PosFormula& f);
PosFormula exists_elim(const PosFormula& f, VarId x);
PosFormula exists_elim(const PosFormula& f, const std::vector<VarId>& xs);
PosFormula forall_elim(const PosFormula& f, VarId x);
PosFormula forall_elim(const PosFormula& f, const std::vector<VarId>& xs);
/// Eliminates every variable outside `keep`.
PosFormula exists_except(const PosFormula& f, const std::vector<VarId>& keep);
PosFormula forall_except(const PosFormula& f, const std::vector<VarId>& keep);
/// Literal-wise substitution; throws if two support variables collide.
PosFormula rename(const PosFormula& f, const std::map<VarId, VarId>& mapping);
bool entails(const PosFormula& a, const PosFormula& b);
bool equiv(const PosFormula& a, const PosFormula& b);
SatResult sat(const PosFormula& f);
/// Pos_bottom reading of an arbitrary function: bottom unless f is positive.
PosFormula to_pos_bottom(const PosFormula& f);

/// x <-> (v1 /\ ... /\ vn); just x when vs is empty.
PosFormula iff_conj(const SpacePtr& s, VarId x, const std::vector<VarId>& vs);
/// Abstraction of one atomic constraint: (/\fixed /\ ~\/(scope \ fixed)) \/ /\scope.
PosFormula alpha_atomic(const SpacePtr& s, const std::vector<VarId>& scope, const std::vector<VarId>& fixed);

/// Prime implicants of f, sorted by size then literal order. Bottom gives none,
/// top gives one empty cube.
std::vector<std::vector<Lit>> prime_implicants(const PosFormula& f);

/// Display names for formula variables.
using NameFn = std::function<std::string(VarId)>;
NameFn space_names(const SpacePtr& s);
/// Byte-stable CNF text: clauses sorted, literals by VarId, `~` for negation.
std::string to_cnf_string(const PosFormula& f, const NameFn& names);
/// Readable rendering from the prime implicants, with literals common to all
/// products factored out: e.g. `w /\ (y \/ z)`.
std::string to_dnf_string(const PosFormula& f, const NameFn& names);
/// Orders literals by rank(var), then positive first; cubes by size, then rank.
using RankFn = std::function<long(VarId)>;
std::vector<std::vector<Lit>> prime_implicants(const PosFormula& f, const RankFn& rank);
std::string to_dnf_string(const PosFormula& f, const NameFn& names, const RankFn& rank);
/// Parses `~`, `/\`, `\/`, parentheses, `true`, `false` and names resolved by `lookup`.
PosFormula parse_formula(const SpacePtr& s, const std::string& text,
                         const std::function<VarId(const std::string&)>& lookup);

}  // namespace redalert
