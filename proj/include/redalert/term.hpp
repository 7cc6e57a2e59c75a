#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace redalert {

/// A first-order Prolog term. Lists are plain '.'/2 and '[]' compounds.
struct Term {
  enum class Kind : std::uint8_t { Var, Atom, Int, Compound };

  Kind kind = Kind::Atom;
  std::string name;  // variable name, atom name or functor
  std::int64_t value = 0;
  std::vector<Term> args;

  static Term var(std::string n) { return Term{Kind::Var, std::move(n), 0, {}}; }
  static Term atom(std::string n) { return Term{Kind::Atom, std::move(n), 0, {}}; }
  static Term integer(std::int64_t v) { return Term{Kind::Int, {}, v, {}}; }
  static Term compound(std::string f, std::vector<Term> a);
  static Term cons(Term head, Term tail);
  static Term nil() { return atom("[]"); }
  static Term list(const std::vector<Term>& elems, Term tail = nil());

  bool is_var() const { return kind == Kind::Var; }
  bool is_atom() const { return kind == Kind::Atom; }
  bool is_int() const { return kind == Kind::Int; }
  bool is_compound() const { return kind == Kind::Compound; }
  bool is_atomic() const { return kind == Kind::Atom || kind == Kind::Int; }
  std::size_t arity() const { return args.size(); }

  bool operator==(const Term&) const = default;
  /// Total structural order (kind, name, value, then arguments).
  bool operator<(const Term& o) const;
};

using VarSet = std::set<std::string>;
using Subst = std::map<std::string, Term>;

/// Term depth: variables and constants count 1, a compound 1 + deepest argument.
int compare(const Term& a, const Term& b);
int depth(const Term& t);
bool is_ground(const Term& t);
void collect_vars(const Term& t, VarSet& out);
/// Variables in first-occurrence order, no duplicates.
void collect_vars_ordered(const Term& t, std::vector<std::string>& out);
bool occurs(const std::string& v, const Term& t);

Term apply(const Subst& s, const Term& t);
Term rename_vars(const Term& t, const std::map<std::string, std::string>& m);

/// True when `general` can be instantiated to `specific` (one-way matching).
bool matches(const Term& general, const Term& specific, Subst& bindings);

/// Prolog-syntax rendering; re-readable by the parser.
std::string to_string(const Term& t);
std::string quote_atom(const std::string& a);

/// Key for predicate symbols, e.g. member/2.
struct PredKey {
  std::string name;
  std::size_t arity = 0;
  auto operator<=>(const PredKey&) const = default;
  bool operator==(const PredKey&) const = default;
  std::string str() const { return name + "/" + std::to_string(arity); }
};

}  // namespace redalert
