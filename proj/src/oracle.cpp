#include "redalert/oracle.hpp"

#include <pthread.h>

#include <functional>
#include <map>
#include <random>
#include <unordered_map>

#include "redalert/builtins.hpp"
#include "redalert/errors.hpp"

namespace redalert {

namespace {

struct PrologError {
  std::string message;
};

struct Signal {
  enum Kind { Fail, Halt, Cut } kind = Fail;
  long barrier = 0;
};

using Cont = std::function<Signal()>;

struct Prepared {
  const Clause* clause;
  std::vector<std::string> vars;
};

class Machine {
 public:
  Machine(const Program& p, const Budget& b) : budget_(b) {
    for (const auto& c : p.clauses()) {
      VarSet vs;
      collect_vars(c.head, vs);
      collect_vars(c.body, vs);
      index_[c.key()].push_back(Prepared{&c, {vs.begin(), vs.end()}});
    }
  }

  AnswerSeq run(const Goal& query) {
    std::vector<std::string> qvars;
    collect_vars_ordered(query, qvars);
    std::erase_if(qvars, [](const std::string& v) { return v.starts_with("_"); });
    AnswerSeq out;
    try {
      solve(query, 0, 0, [&]() -> Signal {
        Answer a;
        for (const auto& v : qvars) a.emplace_back(v, resolve(Term::var(v)));
        out.answers.push_back(std::move(a));
        if (static_cast<long>(out.answers.size()) >= budget_.max_answers) {
          exhausted_ = false;
          return {Signal::Halt};
        }
        return {Signal::Fail};
      });
    } catch (const PrologError& e) {
      out.error = true;
      out.error_message = e.message;
      exhausted_ = false;
    }
    out.exhausted = exhausted_;
    return out;
  }

 private:
  Budget budget_;
  std::map<PredKey, std::vector<Prepared>> index_;
  std::unordered_map<std::string, Term> bindings_;
  std::vector<std::string> trail_;
  long steps_ = 0;
  long renames_ = 0;
  long barriers_ = 0;
  bool exhausted_ = true;

  Term deref(Term t) const {
    while (t.is_var()) {
      auto it = bindings_.find(t.name);
      if (it == bindings_.end()) break;
      t = it->second;
    }
    return t;
  }

  Term resolve(const Term& t) const {
    Term d = deref(t);
    if (d.is_compound())
      for (auto& a : d.args) a = resolve(a);
    return d;
  }

  bool occurs_in(const std::string& v, const Term& t) const {
    Term d = deref(t);
    if (d.is_var()) return d.name == v;
    for (const auto& a : d.args)
      if (occurs_in(v, a)) return true;
    return false;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      bindings_.erase(trail_.back());
      trail_.pop_back();
    }
  }

  bool unify(const Term& x, const Term& y) {
    std::vector<std::pair<Term, Term>> work{{x, y}};
    while (!work.empty()) {
      auto [a, b] = std::move(work.back());
      work.pop_back();
      a = deref(a);
      b = deref(b);
      if (a.is_var() && b.is_var() && a.name == b.name) continue;
      if (a.is_var() || b.is_var()) {
        const Term& v = a.is_var() ? a : b;
        const Term& t = a.is_var() ? b : a;
        if (occurs_in(v.name, t)) return false;
        bindings_[v.name] = t;
        trail_.push_back(v.name);
        continue;
      }
      if (a.kind != b.kind || a.name != b.name || a.value != b.value || a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i) work.emplace_back(a.args[i], b.args[i]);
    }
    return true;
  }

  std::int64_t eval(const Term& t) const {
    Term d = deref(t);
    if (d.is_int()) return d.value;
    if (d.is_var()) throw PrologError{"instantiation error in arithmetic"};
    if (d.is_atom()) throw PrologError{"type error: evaluable " + d.name + "/0"};
    auto arg = [&](std::size_t i) { return eval(d.args[i]); };
    if (d.arity() == 1) {
      if (d.name == "-") return -arg(0);
      if (d.name == "+") return arg(0);
      if (d.name == "abs") return std::abs(arg(0));
    } else if (d.arity() == 2) {
      std::int64_t a = arg(0), b = arg(1);
      if (d.name == "+") return a + b;
      if (d.name == "-") return a - b;
      if (d.name == "*") return a * b;
      if (d.name == "min") return std::min(a, b);
      if (d.name == "max") return std::max(a, b);
      if (d.name == "//" || d.name == "/" || d.name == "mod" || d.name == "rem") {
        if (b == 0) throw PrologError{"evaluation error: zero_divisor"};
        if (d.name == "mod") return ((a % b) + b) % b;
        if (d.name == "rem") return a % b;
        return a / b;
      }
    }
    throw PrologError{"type error: evaluable " + d.name + "/" + std::to_string(d.arity())};
  }

  /// Deterministic builtins; bindings they make stay on the trail.
  bool builtin(const Goal& g) {
    const std::string& n = g.pred.name;
    const auto& a = g.args;
    if (n == "=") return unify(a[0], a[1]);
    if (n == "==") return resolve(a[0]) == resolve(a[1]);
    if (n == "\\==") return !(resolve(a[0]) == resolve(a[1]));
    if (n == "\\=") {
      std::size_t mark = trail_.size();
      bool u = unify(a[0], a[1]);
      undo(mark);
      return !u;
    }
    if (n == "is") return unify(a[0], Term::integer(eval(a[1])));
    if (n == "=<") return eval(a[0]) <= eval(a[1]);
    if (n == "<") return eval(a[0]) < eval(a[1]);
    if (n == ">=") return eval(a[0]) >= eval(a[1]);
    if (n == ">") return eval(a[0]) > eval(a[1]);
    if (n == "=:=") return eval(a[0]) == eval(a[1]);
    if (n == "=\\=") return eval(a[0]) != eval(a[1]);
    Term d = deref(a[0]);
    if (n == "var") return d.is_var();
    if (n == "nonvar") return !d.is_var();
    if (n == "atom") return d.is_atom();
    if (n == "atomic") return d.is_atomic();
    if (n == "integer" || n == "number") return d.is_int();
    if (n == "functor") {
      if (!d.is_var()) {
        Term name = d.is_compound() ? Term::atom(d.name) : d;
        return unify(a[1], name) && unify(a[2], Term::integer(static_cast<std::int64_t>(d.arity())));
      }
      Term name = deref(a[1]), arity = deref(a[2]);
      if (name.is_var() || arity.is_var()) throw PrologError{"instantiation error in functor/3"};
      if (!arity.is_int() || arity.value < 0) throw PrologError{"type error in functor/3"};
      if (arity.value == 0) return unify(d, name);
      if (!name.is_atom()) throw PrologError{"type error in functor/3"};
      std::vector<Term> args;
      for (std::int64_t i = 0; i < arity.value; ++i) args.push_back(Term::var("_F#" + std::to_string(++renames_)));
      return unify(d, Term::compound(name.name, args));
    }
    throw PrologError{"existence error: procedure " + g.pred.str()};
  }

  Signal solve_conj(const std::vector<Goal>& parts, std::size_t i, long barrier, int depth, const Cont& k) {
    if (i == parts.size()) return k();
    return solve(parts[i], barrier, depth, [&]() { return solve_conj(parts, i + 1, barrier, depth, k); });
  }

  Signal call(const Goal& g, int depth, const Cont& k) {
    if (++steps_ > budget_.max_steps || depth >= budget_.max_depth) {
      exhausted_ = false;
      return {Signal::Halt};
    }
    auto it = index_.find(g.pred);
    if (it == index_.end()) throw PrologError{"existence error: procedure " + g.pred.str()};
    long id = ++barriers_;
    for (const auto& prep : it->second) {
      std::size_t mark = trail_.size();
      std::map<std::string, std::string> m;
      std::string suffix = "#" + std::to_string(++renames_);
      for (const auto& v : prep.vars) m[v] = v + suffix;
      Term head = rename_vars(prep.clause->head, m);
      bool ok = true;
      for (std::size_t i = 0; ok && i < g.args.size(); ++i) ok = unify(head.args[i], g.args[i]);
      if (!ok) {
        undo(mark);
        continue;
      }
      Signal r = solve(rename_vars(prep.clause->body, m), id, depth + 1, k);
      undo(mark);
      if (r.kind == Signal::Halt) return r;
      if (r.kind == Signal::Cut) return r.barrier == id ? Signal{Signal::Fail} : r;
    }
    return {Signal::Fail};
  }

  Signal solve(const Goal& g, long barrier, int depth, const Cont& k) {
    switch (g.kind) {
      case Goal::Kind::True:
        return k();
      case Goal::Kind::Fail:
        return {Signal::Fail};
      case Goal::Kind::Cut: {
        Signal r = k();
        if (r.kind != Signal::Fail) return r;
        return {Signal::Cut, barrier};
      }
      case Goal::Kind::Post:
      case Goal::Kind::Builtin: {
        if (g.kind == Goal::Kind::Builtin && ++steps_ > budget_.max_steps) {
          exhausted_ = false;
          return {Signal::Halt};
        }
        std::size_t mark = trail_.size();
        bool ok = g.kind == Goal::Kind::Post ? unify(g.lhs, g.rhs) : builtin(g);
        Signal r = ok ? k() : Signal{Signal::Fail};
        undo(mark);
        return r;
      }
      case Goal::Kind::Call:
        return call(g, depth, k);
      case Goal::Kind::Conj:
        return solve_conj(g.parts, 0, barrier, depth, k);
      case Goal::Kind::Disj: {
        std::size_t mark = trail_.size();
        Signal r = solve(g.parts[0], barrier, depth, k);
        undo(mark);
        if (r.kind != Signal::Fail) return r;
        return solve(g.parts[1], barrier, depth, k);
      }
    }
    return {Signal::Fail};
  }
};

/// Runs fn on a thread with a large stack: the solver recurses once per goal
/// on the current proof path.
void with_big_stack(const std::function<void()>& fn) {
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, std::size_t{512} << 20);
  struct Box {
    const std::function<void()>* fn;
    std::exception_ptr err;
  } box{&fn, nullptr};
  pthread_t th;
  auto entry = [](void* p) -> void* {
    auto* b = static_cast<Box*>(p);
    try {
      (*b->fn)();
    } catch (...) {
      b->err = std::current_exception();
    }
    return nullptr;
  };
  if (pthread_create(&th, &attr, entry, &box) != 0) {
    pthread_attr_destroy(&attr);
    fn();
    return;
  }
  pthread_join(th, nullptr);
  pthread_attr_destroy(&attr);
  if (box.err) std::rethrow_exception(box.err);
}

}  // namespace

AnswerSeq solve(const Program& program, const Goal& query, const Budget& budget) {
  AnswerSeq out;
  with_big_stack([&] {
    Machine m(program, budget);
    out = m.run(query);
  });
  return out;
}

AnswerCount count_answers(const Program& program, const Goal& query, const Budget& budget) {
  AnswerSeq s = solve(program, query, budget);
  return {static_cast<long>(s.answers.size()), s.exhausted, s.error};
}

std::string to_string(const Answer& a) {
  if (a.empty()) return "true";
  std::map<std::string, std::string> names;
  std::function<void(const Term&)> number = [&](const Term& t) {
    if (t.is_var()) {
      if (!names.count(t.name)) names[t.name] = "_" + std::to_string(names.size() + 1);
      return;
    }
    for (const auto& x : t.args) number(x);
  };
  std::string out;
  for (const auto& [v, t] : a) {
    number(t);
    out += (out.empty() ? "" : ", ") + v + " = " + to_string(rename_vars(t, names));
  }
  return out;
}

namespace {

/// Constants and functors of the program, plus small integers.
struct Signature {
  std::vector<Term> constants;
  std::vector<std::pair<std::string, std::size_t>> functors;
  bool lists = false;

  explicit Signature(const Program& p) {
    std::set<Term> cs;
    std::set<std::pair<std::string, std::size_t>> fs;
    std::function<void(const Term&)> walk = [&](const Term& t) {
      if (t.is_atomic()) cs.insert(t);
      if (t.is_compound()) {
        fs.emplace(t.name, t.arity());
        for (const auto& a : t.args) walk(a);
      }
    };
    std::function<void(const Goal&)> walk_goal = [&](const Goal& g) {
      walk(g.lhs);
      walk(g.rhs);
      for (const auto& a : g.args) walk(a);
      for (const auto& part : g.parts) walk_goal(part);
    };
    for (const auto& c : p.clauses()) {
      for (const auto& a : c.head.args) walk(a);
      walk_goal(c.body);
    }
    for (int i = 0; i <= 3; ++i) cs.insert(Term::integer(i));
    // Empty Post sides default to the atom with an empty name.
    cs.erase(Term::atom(""));
    constants.assign(cs.begin(), cs.end());
    lists = fs.count({".", 2}) != 0;
    fs.erase({".", 2});
    functors.assign(fs.begin(), fs.end());
  }
};

class TermGen {
 public:
  TermGen(const Signature& sig, std::mt19937_64& rng, int max_depth) : sig_(sig), rng_(rng), max_depth_(max_depth) {}

  Term ground(int depth) {
    int roll = pick(6);
    if (sig_.lists && roll < 2 && depth > 1) return list(depth, false);
    if (depth <= 1 || sig_.functors.empty() || roll < 4) return constant();
    const auto& [f, n] = sig_.functors[static_cast<std::size_t>(pick(static_cast<int>(sig_.functors.size())))];
    std::vector<Term> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(ground(depth - 1));
    return Term::compound(f, args);
  }

  /// A term with at least one variable drawn from a small shared pool.
  Term open(int depth) {
    int roll = pick(4);
    if (depth <= 1 || roll < 2) return var();
    if (sig_.lists && (roll == 2 || sig_.functors.empty())) return list(depth, true);
    if (sig_.functors.empty()) return var();
    const auto& [f, n] = sig_.functors[static_cast<std::size_t>(pick(static_cast<int>(sig_.functors.size())))];
    std::vector<Term> args;
    std::size_t hole = static_cast<std::size_t>(pick(static_cast<int>(n)));
    for (std::size_t i = 0; i < n; ++i) args.push_back(i == hole ? open(depth - 1) : any(depth - 1));
    return Term::compound(f, args);
  }

 private:
  const Signature& sig_;
  std::mt19937_64& rng_;
  int max_depth_;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  // Half the constants are small integers so arithmetic guards get exercised.
  Term constant() {
    if (pick(2) == 0) return Term::integer(pick(6));
    return sig_.constants[static_cast<std::size_t>(pick(static_cast<int>(sig_.constants.size())))];
  }
  Term var() { return Term::var("_V" + std::to_string(pick(3))); }
  Term any(int depth) { return pick(2) == 0 ? ground(depth) : open(depth); }

  /// Proper list of up to four elements; an open list gets a variable tail or element.
  Term list(int depth, bool open_list) {
    int len = pick(5);
    std::vector<Term> elems;
    for (int i = 0; i < len; ++i) elems.push_back(depth > 2 && pick(4) == 0 ? ground(depth - 2) : constant());
    if (!open_list) return Term::list(elems);
    if (len > 0 && pick(2) == 0) {
      elems[static_cast<std::size_t>(pick(len))] = var();
      return Term::list(elems);
    }
    return Term::list(elems, var());
  }
};

}  // namespace

Verdict check_determinacy(const Program& program, const PredKey& pred, const PosFormula& condition,
                          const std::vector<VarId>& arg_ids, int trials, std::uint64_t seed, const Budget& budget,
                          int max_term_depth) {
  Verdict v;
  if (condition.is_bottom()) {
    v.vacuous = true;
    v.note = "no admissible instantiation";
    return v;
  }
  const std::size_t n = arg_ids.size();
  const SpacePtr& space = condition.space();
  auto admissible = [&](std::uint64_t mask) {
    std::vector<VarId> ground;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) ground.push_back(arg_ids[i]);
    return entails(PosFormula::conj_of(space, ground), condition);
  };
  std::vector<std::uint64_t> patterns;
  if (n <= 12) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
      if (admissible(m)) patterns.push_back(m);
  }
  Signature sig(program);
  Budget b = budget;
  b.max_answers = std::min<long>(b.max_answers, 2);
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(t + 1));
    std::uint64_t mask;
    if (!patterns.empty()) {
      mask = patterns[std::uniform_int_distribution<std::size_t>(0, patterns.size() - 1)(rng)];
    } else {
      mask = rng() & ((n >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
      if (!admissible(mask)) mask = (n >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    }
    TermGen gen(sig, rng, max_term_depth);
    std::vector<Term> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(((mask >> i) & 1u) ? gen.ground(max_term_depth) : gen.open(max_term_depth));
    Goal q = Goal::call(pred.name, args);
    AnswerSeq s = solve(program, q, b);
    ++v.trials;
    if (s.answers.size() >= 2) {
      ++v.failures;
      if (v.witness.empty()) v.witness = to_string(q);
    } else if (!s.exhausted || s.error) {
      ++v.inconclusive;
    } else {
      ++v.passes;
    }
  }
  return v;
}

}  // namespace redalert
