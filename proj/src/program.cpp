#include "redalert/program.hpp"

#include <algorithm>
#include <sstream>

#include "redalert/builtins.hpp"
#include "redalert/errors.hpp"

namespace redalert {

NonStratifiedError::NonStratifiedError(std::vector<std::string> cycle)
    : AnalysisError("stratify", [&] {
        std::string s = "program is not cut-stratified; cycle through a cut guard: ";
        for (std::size_t i = 0; i < cycle.size(); ++i) s += (i ? " -> " : "") + cycle[i];
        return s;
      }()),
      cycle_(std::move(cycle)) {}

Goal Goal::call(std::string name, std::vector<Term> args) {
  Goal g;
  g.kind = Kind::Call;
  g.pred = PredKey{std::move(name), args.size()};
  g.args = std::move(args);
  return g;
}

Goal Goal::builtin(std::string name, std::vector<Term> args) {
  Goal g = call(std::move(name), std::move(args));
  g.kind = Kind::Builtin;
  return g;
}

Goal Goal::conj(std::vector<Goal> parts) {
  std::vector<Goal> flat;
  for (auto& p : parts) {
    if (p.kind == Kind::Conj) {
      for (auto& q : p.parts) flat.push_back(std::move(q));
    } else if (!p.is_true()) {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return std::move(flat.front());
  Goal g;
  g.kind = Kind::Conj;
  g.parts = std::move(flat);
  return g;
}

Goal Goal::disj(Goal l, Goal r) {
  Goal g;
  g.kind = Kind::Disj;
  g.parts = {std::move(l), std::move(r)};
  return g;
}

std::vector<Goal> conjuncts(const Goal& g) {
  if (g.kind == Goal::Kind::Conj) return g.parts;
  if (g.is_true()) return {};
  return {g};
}

bool contains_cut(const Goal& g) {
  if (g.kind == Goal::Kind::Cut) return true;
  return std::any_of(g.parts.begin(), g.parts.end(), [](const Goal& p) { return contains_cut(p); });
}

bool contains_disj(const Goal& g) {
  if (g.kind == Goal::Kind::Disj) return true;
  return std::any_of(g.parts.begin(), g.parts.end(), [](const Goal& p) { return contains_disj(p); });
}

void collect_vars(const Goal& g, VarSet& out) {
  redalert::collect_vars(g.lhs, out);
  redalert::collect_vars(g.rhs, out);
  for (const auto& a : g.args) redalert::collect_vars(a, out);
  for (const auto& p : g.parts) collect_vars(p, out);
}

void collect_vars_ordered(const Goal& g, std::vector<std::string>& out) {
  if (g.kind == Goal::Kind::Post) {
    redalert::collect_vars_ordered(g.lhs, out);
    redalert::collect_vars_ordered(g.rhs, out);
  }
  for (const auto& a : g.args) redalert::collect_vars_ordered(a, out);
  for (const auto& p : g.parts) collect_vars_ordered(p, out);
}

Goal apply(const Subst& s, const Goal& g) {
  Goal out = g;
  if (g.kind == Goal::Kind::Post) {
    out.lhs = redalert::apply(s, g.lhs);
    out.rhs = redalert::apply(s, g.rhs);
  }
  for (auto& a : out.args) a = redalert::apply(s, a);
  for (auto& p : out.parts) p = redalert::apply(s, p);
  return out;
}

Goal rename_vars(const Goal& g, const std::map<std::string, std::string>& m) {
  Goal out = g;
  if (g.kind == Goal::Kind::Post) {
    out.lhs = rename_vars(g.lhs, m);
    out.rhs = rename_vars(g.rhs, m);
  }
  for (auto& a : out.args) a = rename_vars(a, m);
  for (auto& p : out.parts) p = rename_vars(p, m);
  return out;
}

void collect_calls(const Goal& g, std::vector<PredKey>& out) {
  if (g.kind == Goal::Kind::Call) out.push_back(g.pred);
  for (const auto& p : g.parts) collect_calls(p, out);
}

namespace {
struct VariantCheck {
  std::map<std::string, std::string> fwd, bwd;

  bool term(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    if (a.is_var()) {
      auto [f, fnew] = fwd.emplace(a.name, b.name);
      auto [r, rnew] = bwd.emplace(b.name, a.name);
      return f->second == b.name && r->second == a.name;
    }
    if (a.name != b.name || a.value != b.value || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!term(a.args[i], b.args[i])) return false;
    return true;
  }

  bool goal(const Goal& a, const Goal& b) {
    if (a.kind != b.kind || !(a.pred == b.pred) || a.args.size() != b.args.size() ||
        a.parts.size() != b.parts.size())
      return false;
    if (a.kind == Goal::Kind::Post && !(term(a.lhs, b.lhs) && term(a.rhs, b.rhs))) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!term(a.args[i], b.args[i])) return false;
    for (std::size_t i = 0; i < a.parts.size(); ++i)
      if (!goal(a.parts[i], b.parts[i])) return false;
    return true;
  }
};
}  // namespace

bool is_variant(const Goal& a, const Goal& b) { return VariantCheck{}.goal(a, b); }

Term goal_to_term(const Goal& g) {
  switch (g.kind) {
    case Goal::Kind::True: return Term::atom("true");
    case Goal::Kind::Fail: return Term::atom("false");
    case Goal::Kind::Cut: return Term::atom("!");
    case Goal::Kind::Post: return Term::compound("=", {g.lhs, g.rhs});
    case Goal::Kind::Call:
    case Goal::Kind::Builtin: return Term::compound(g.pred.name, g.args);
    case Goal::Kind::Conj: {
      Term t = goal_to_term(g.parts.back());
      for (auto it = g.parts.rbegin() + 1; it != g.parts.rend(); ++it)
        t = Term::compound(",", {goal_to_term(*it), std::move(t)});
      return t;
    }
    case Goal::Kind::Disj: return Term::compound(";", {goal_to_term(g.parts[0]), goal_to_term(g.parts[1])});
  }
  return Term::atom("true");
}

namespace {
// Goal-position rendering: priority 1200 so top-level ',' and ';' need no parentheses.
std::string render_goal(const Goal& g) {
  Term t = goal_to_term(g);
  std::string s = to_string(Term::compound("{}", {t}));
  return s.substr(1, s.size() - 2);
}
}  // namespace

std::string to_string(const Goal& g) { return render_goal(g); }

std::string to_string(const Clause& c) {
  std::string h = to_string(c.head);
  if (c.body.is_true()) return h + ".";
  return h + " :- " + render_goal(c.body) + ".";
}

void Program::add(Clause c) {
  PredKey k = c.key();
  auto [it, fresh] = index_.try_emplace(k);
  if (fresh) order_.push_back(k);
  it->second.push_back(clauses_.size());
  clauses_.push_back(std::move(c));
}

std::vector<Clause> Program::clauses_of(const PredKey& k) const {
  std::vector<Clause> out;
  auto it = index_.find(k);
  if (it == index_.end()) return out;
  for (auto i : it->second) out.push_back(clauses_[i]);
  return out;
}

std::vector<PredKey> Program::undefined_calls() const {
  std::vector<PredKey> out;
  for (const auto& c : clauses_) {
    std::vector<PredKey> calls;
    collect_calls(c.body, calls);
    for (const auto& k : calls)
      if (!defines(k) && !is_builtin(k) && std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

std::string to_string(const Program& p) {
  std::ostringstream os;
  for (const auto& c : p.clauses()) os << to_string(c) << '\n';
  return os.str();
}

}  // namespace redalert
