#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "redalert/term.hpp"

namespace redalert {

/// Body goal. Conjunctions are kept flat (n-ary); a disjunction has exactly two parts.
struct Goal {
  enum class Kind : std::uint8_t { True, Fail, Post, Call, Builtin, Cut, Conj, Disj };

  Kind kind = Kind::True;
  Term lhs, rhs;            // Post: lhs = rhs
  PredKey pred;             // Call, Builtin
  std::vector<Term> args;   // Call, Builtin
  std::vector<Goal> parts;  // Conj, Disj

  static Goal truth() { return Goal{}; }
  static Goal fail() { return Goal{Kind::Fail, {}, {}, {}, {}, {}}; }
  static Goal cut() { return Goal{Kind::Cut, {}, {}, {}, {}, {}}; }
  static Goal post(Term l, Term r) { return Goal{Kind::Post, std::move(l), std::move(r), {}, {}, {}}; }
  static Goal call(std::string name, std::vector<Term> args);
  static Goal builtin(std::string name, std::vector<Term> args);
  /// Flattens nested conjunctions and drops `true`; a singleton collapses to its element.
  static Goal conj(std::vector<Goal> parts);
  static Goal disj(Goal l, Goal r);

  bool is_true() const { return kind == Kind::True; }
  bool is_fail() const { return kind == Kind::Fail; }
  bool operator==(const Goal&) const = default;
};

/// Conjuncts of a goal (a non-conjunction is its own single conjunct; `true` has none).
std::vector<Goal> conjuncts(const Goal& g);
bool contains_cut(const Goal& g);
bool contains_disj(const Goal& g);
void collect_vars(const Goal& g, VarSet& out);
void collect_vars_ordered(const Goal& g, std::vector<std::string>& out);
Goal apply(const Subst& s, const Goal& g);
Goal rename_vars(const Goal& g, const std::map<std::string, std::string>& m);
/// Every Call target in g, in order of appearance.
void collect_calls(const Goal& g, std::vector<PredKey>& out);

/// Structural equality up to a consistent bijective renaming of variables.
bool is_variant(const Goal& a, const Goal& b);

Term goal_to_term(const Goal& g);
std::string to_string(const Goal& g);

struct Clause {
  Term head;
  Goal body;
  int line = 0;

  PredKey key() const { return PredKey{head.name, head.arity()}; }
  bool operator==(const Clause& o) const { return head == o.head && body == o.body; }
};

std::string to_string(const Clause& c);

/// Clauses in source order plus an index from predicate to clause positions.
class Program {
 public:
  void add(Clause c);

  const std::vector<Clause>& clauses() const { return clauses_; }
  /// Predicates in order of first definition.
  const std::vector<PredKey>& predicates() const { return order_; }
  std::vector<Clause> clauses_of(const PredKey& k) const;
  bool defines(const PredKey& k) const { return index_.count(k) != 0; }
  /// Call targets that are neither defined nor builtin.
  std::vector<PredKey> undefined_calls() const;

  bool operator==(const Program& o) const { return clauses_ == o.clauses_; }

 private:
  std::vector<Clause> clauses_;
  std::vector<PredKey> order_;
  std::map<PredKey, std::vector<std::size_t>> index_;
};

std::string to_string(const Program& p);

/// Source of reserved auxiliary predicate names: $aux_1, $aux_2, ...
class AuxNamer {
 public:
  std::string mint() { return "$aux_" + std::to_string(next_++); }
  int minted() const { return next_ - 1; }

 private:
  int next_ = 1;
};

inline bool is_aux_name(std::string_view name) { return name.starts_with("$aux_"); }

Program parse_program(std::string_view source);
/// Parses a single goal (e.g. a query) in the same syntax as clause bodies.
Goal parse_goal(std::string_view source);
Term parse_term(std::string_view source);

/// Replaces every in-body disjunction by a call to a fresh auxiliary predicate.
Program expand_disjunctions(const Program& p, AuxNamer& namer);
Program expand_disjunctions(const Program& p);

}  // namespace redalert
