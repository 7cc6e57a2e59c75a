#include "redalert/normalizer.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <set>

#include "redalert/builtins.hpp"
#include "redalert/errors.hpp"

namespace redalert {

std::vector<std::string> NormalPredicate::params() const {
  std::vector<std::string> out;
  for (const auto& a : head.args) out.push_back(a.name);
  return out;
}

std::vector<std::string> NormalPredicate::all_vars() const {
  std::vector<std::string> out = params();
  for (const Goal* g : {&g1, &g2, &g3, &g4}) collect_vars_ordered(*g, out);
  return out;
}

const NormalPredicate& NormalProgram::at(const PredKey& k) const {
  auto it = preds.find(k);
  if (it == preds.end()) throw AnalysisError("normalize", "unknown predicate " + k.str());
  return it->second;
}

namespace {

bool has_cut(const Clause& c) { return contains_cut(c.body); }

// Fresh variable names that avoid everything in `used`.
class Fresh {
 public:
  explicit Fresh(std::set<std::string> used) : used_(std::move(used)) {}
  std::string take(std::string base) {
    while (used_.count(base)) base += "_";
    used_.insert(base);
    return base;
  }
  void reserve(const std::string& n) { used_.insert(n); }

 private:
  std::set<std::string> used_;
};

std::vector<std::string> choose_params(const std::vector<Clause>& clauses) {
  const Term& h = clauses.front().head;
  std::vector<std::string> out;
  std::set<std::string> taken;
  for (std::size_t i = 0; i < h.arity(); ++i) {
    std::string n = h.args[i].is_var() && !taken.count(h.args[i].name) && !h.args[i].name.starts_with("_")
                        ? h.args[i].name
                        : "A" + std::to_string(i + 1);
    while (taken.count(n)) n += "_";
    taken.insert(n);
    out.push_back(n);
  }
  return out;
}

// Renames a clause apart, maps head variables onto ȳ where possible and
// prefixes the body with ȳi = arg equations for the remaining positions.
Goal freshen(const Clause& c, std::size_t index, const std::vector<std::string>& ys, Fresh& fresh) {
  std::map<std::string, std::string> m;
  std::set<std::string> targets;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const Term& a = c.head.args[i];
    if (a.is_var() && !m.count(a.name)) {
      m[a.name] = ys[i];
      targets.insert(ys[i]);
    }
  }
  std::vector<std::string> vs;
  collect_vars_ordered(c.head, vs);
  collect_vars_ordered(c.body, vs);
  for (const auto& v : vs) {
    if (m.count(v)) continue;
    std::string base = v.starts_with("_") ? "_G" : v;
    m[v] = fresh.take(base + "_" + std::to_string(index + 1));
  }
  std::vector<Goal> parts;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const Term& a = c.head.args[i];
    if (a.is_var() && m.at(a.name) == ys[i]) continue;
    parts.push_back(Goal::post(Term::var(ys[i]), rename_vars(a, m)));
  }
  parts.push_back(rename_vars(c.body, m));
  return Goal::conj(std::move(parts));
}

struct Normalizer {
  AuxNamer& namer;
  std::vector<NormalPredicate>& aux_out;
  int minted = 0;

  // Slots keep auxiliaries in minting order although nested ones finish first.
  std::size_t reserve() {
    aux_out.emplace_back();
    return aux_out.size() - 1;
  }
  void adopt(NormalPredicate n, std::size_t slot) {
    n.aux = true;
    aux_out[slot] = std::move(n);
  }

  Goal wrap(const std::vector<Clause>& cs, const std::vector<std::string>& ys) {
    std::string name = namer.mint();
    ++minted;
    std::size_t slot = reserve();
    std::vector<Clause> renamed;
    for (auto c : cs) {
      c.head.name = name;
      if (c.head.arity() == 0) c.head = Term::atom(name);
      renamed.push_back(std::move(c));
    }
    adopt(run(renamed), slot);
    std::vector<Term> args;
    for (const auto& y : ys) args.push_back(Term::var(y));
    return Goal::call(name, args);
  }

  // G1/G4 rule: none -> false, a single (cut-free) clause -> its body, otherwise an auxiliary.
  Goal alternatives(const std::vector<Clause>& cs, const std::vector<Goal>& bodies,
                    const std::vector<std::string>& ys) {
    if (cs.empty()) return Goal::fail();
    if (cs.size() == 1 && !has_cut(cs.front())) return bodies.front();
    return wrap(cs, ys);
  }

  NormalPredicate run(const std::vector<Clause>& clauses) {
    NormalPredicate np;
    np.key = clauses.front().key();
    std::vector<std::string> ys = choose_params(clauses);
    std::vector<Term> yterms;
    for (const auto& y : ys) yterms.push_back(Term::var(y));
    np.head = Term::compound(np.key.name, yterms);

    std::set<std::string> used(ys.begin(), ys.end());
    for (const auto& c : clauses) {
      collect_vars(c.head, used);
      collect_vars(c.body, used);
    }
    Fresh fresh(used);
    std::vector<Goal> bodies;
    for (std::size_t i = 0; i < clauses.size(); ++i) bodies.push_back(freshen(clauses[i], i, ys, fresh));

    int before = minted;
    auto first_cut = std::find_if(clauses.begin(), clauses.end(), has_cut);
    if (first_cut == clauses.end()) {
      // No cut: first clause as G1, the rest as G4.
      np.g1 = bodies.front();
      np.g2 = Goal::fail();
      np.g3 = Goal::truth();
      np.g4 = alternatives(std::vector<Clause>(clauses.begin() + 1, clauses.end()),
                           std::vector<Goal>(bodies.begin() + 1, bodies.end()), ys);
      np.aux_count = minted - before;
      return np;
    }
    std::size_t m = static_cast<std::size_t>(first_cut - clauses.begin());
    np.g1 = alternatives(std::vector<Clause>(clauses.begin(), clauses.begin() + m),
                         std::vector<Goal>(bodies.begin(), bodies.begin() + m), ys);

    std::vector<Goal> parts = conjuncts(bodies[m]);
    auto cut = std::find_if(parts.begin(), parts.end(), [](const Goal& g) { return g.kind == Goal::Kind::Cut; });
    std::vector<Goal> pre(parts.begin(), cut), post(cut + 1, parts.end());
    np.g2 = Goal::conj(pre);
    Goal after = Goal::conj(post);
    if (contains_cut(after)) {
      VarSet ctx(ys.begin(), ys.end());
      collect_vars(np.g2, ctx);
      std::vector<std::string> order;
      collect_vars_ordered(after, order);
      std::vector<Term> closure;
      for (const auto& v : order)
        if (ctx.count(v)) closure.push_back(Term::var(v));
      std::string name = namer.mint();
      ++minted;
      Term head = Term::compound(name, closure);
      std::size_t slot = reserve();
      adopt(run({Clause{head, after, clauses[m].line}}), slot);
      np.g3 = Goal::call(name, closure);
    } else {
      np.g3 = after;
    }
    np.g4 = alternatives(std::vector<Clause>(clauses.begin() + m + 1, clauses.end()),
                         std::vector<Goal>(bodies.begin() + m + 1, bodies.end()), ys);
    np.aux_count = minted - before;
    return np;
  }
};

struct Edge {
  PredKey to;
  bool strict;
};

std::map<PredKey, std::vector<Edge>> call_graph(const NormalProgram& np) {
  std::map<PredKey, std::vector<Edge>> g;
  for (const auto& k : np.order) {
    const NormalPredicate& p = np.preds.at(k);
    auto& out = g[k];
    auto add = [&](const Goal& goal, bool strict) {
      std::vector<PredKey> calls;
      collect_calls(goal, calls);
      for (const auto& c : calls)
        if (np.preds.count(c)) out.push_back({c, strict});
    };
    add(p.g1, false);
    add(p.g2, true);
    add(p.g3, false);
    add(p.g4, false);
  }
  return g;
}

struct StrataResult {
  std::vector<std::vector<PredKey>> sccs;  // callees before callers
  std::optional<std::vector<PredKey>> cycle;
};

StrataResult tarjan(const NormalProgram& np, const std::map<PredKey, std::vector<Edge>>& g) {
  StrataResult r;
  std::map<PredKey, int> index, low;
  std::set<PredKey> on_stack;
  std::vector<PredKey> stack;
  int counter = 0;
  std::function<void(const PredKey&)> visit = [&](const PredKey& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& e : g.at(v)) {
      if (!index.count(e.to)) {
        visit(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on_stack.count(e.to)) {
        low[v] = std::min(low[v], index[e.to]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<PredKey> scc;
      PredKey w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        scc.push_back(w);
      } while (!(w == v));
      r.sccs.push_back(std::move(scc));
    }
  };
  for (const auto& k : np.order)
    if (!index.count(k)) visit(k);

  // A strict edge inside one component makes stratification impossible.
  for (const auto& scc : r.sccs) {
    std::set<PredKey> members(scc.begin(), scc.end());
    for (const auto& k : np.order) {
      if (!members.count(k)) continue;
      for (const auto& e : g.at(k)) {
        if (!e.strict || !members.count(e.to)) continue;
        // Shortest path back from e.to to k inside the component.
        std::map<PredKey, PredKey> parent;
        std::queue<PredKey> q;
        q.push(e.to);
        parent.emplace(e.to, e.to);
        while (!q.empty() && !parent.count(k)) {
          PredKey u = q.front();
          q.pop();
          for (const auto& f : g.at(u))
            if (members.count(f.to) && !parent.count(f.to)) {
              parent.emplace(f.to, u);
              q.push(f.to);
            }
        }
        std::vector<PredKey> back;
        for (PredKey cur = k;; cur = parent.at(cur)) {
          back.push_back(cur);
          if (cur == e.to) break;
        }
        std::vector<PredKey> cycle{k};
        cycle.insert(cycle.end(), back.rbegin(), back.rend());
        r.cycle = cycle;
        return r;
      }
    }
  }
  return r;
}

std::optional<std::vector<PredKey>> try_stratify(NormalProgram& np) {
  auto g = call_graph(np);
  StrataResult r = tarjan(np, g);
  if (r.cycle) return r.cycle;
  std::map<PredKey, int> level;
  for (const auto& scc : r.sccs) {
    std::set<PredKey> members(scc.begin(), scc.end());
    int lv = 1;
    for (const auto& v : scc)
      for (const auto& e : g.at(v))
        if (!members.count(e.to)) lv = std::max(lv, level.at(e.to) + (e.strict ? 1 : 0));
    for (const auto& v : scc) level[v] = lv;
  }
  int top = 0;
  for (const auto& [k, lv] : level) top = std::max(top, lv);
  np.strata.assign(static_cast<std::size_t>(top), {});
  for (const auto& k : np.order) np.strata[static_cast<std::size_t>(level.at(k) - 1)].push_back(k);
  np.stratum_of = level;
  return std::nullopt;
}

std::vector<std::string> names(const std::vector<PredKey>& ks) {
  std::vector<std::string> out;
  for (const auto& k : ks) out.push_back(k.str());
  return out;
}

}  // namespace

NormalPredicate normalize_predicate(const std::vector<Clause>& clauses, AuxNamer& namer,
                                    std::vector<NormalPredicate>& aux_out) {
  if (clauses.empty()) throw AnalysisError("normalize", "predicate without clauses");
  Normalizer n{namer, aux_out};
  return n.run(clauses);
}

void stratify(NormalProgram& np) {
  if (auto cycle = try_stratify(np)) throw NonStratifiedError(names(*cycle));
}

NormalProgram normalize_program(const Program& source, const NormalizeOptions& opts) {
  for (const auto& k : source.undefined_calls())
    throw AnalysisError("normalize", "call to undefined predicate " + k.str());
  AuxNamer namer;
  Program p = expand_disjunctions(source, namer);
  NormalProgram np;
  for (const auto& k : source.predicates())
    if (!is_aux_name(k.name)) ++np.original_count;

  std::vector<NormalPredicate> aux;
  for (const auto& k : p.predicates()) {
    NormalPredicate n = normalize_predicate(p.clauses_of(k), namer, aux);
    n.aux = is_aux_name(k.name);
    np.order.push_back(k);
    np.preds.emplace(k, std::move(n));
  }
  auto adopt = [&](std::vector<NormalPredicate>& extra) {
    for (auto& a : extra) {
      np.order.push_back(a.key);
      np.preds.emplace(a.key, std::move(a));
    }
    extra.clear();
  };
  adopt(aux);

  while (auto cycle = try_stratify(np)) {
    if (!opts.relax_cut) throw NonStratifiedError(names(*cycle));
    NormalPredicate& victim = np.preds.at(cycle->front());
    Goal guarded = Goal::conj({victim.g2, victim.g3});
    if (victim.g1.is_fail()) {
      victim.g1 = guarded;
    } else {
      std::string name = namer.mint();
      Term head = victim.head;
      head.name = name;
      if (head.arity() == 0) head = Term::atom(name);
      NormalPredicate merged =
          normalize_predicate({Clause{head, victim.g1, 0}, Clause{head, guarded, 0}}, namer, aux);
      merged.aux = true;
      aux.insert(aux.begin(), std::move(merged));
      victim.g1 = Goal::call(name, victim.head.args);
    }
    victim.g2 = Goal::fail();
    victim.g3 = Goal::truth();
    std::string cyc;
    for (std::size_t i = 0; i < cycle->size(); ++i) cyc += (i ? " -> " : "") + (*cycle)[i].str();
    np.warnings.push_back("relax-cut: discarded the cut in " + victim.key.str() + " (cycle " + cyc + ")");
    adopt(aux);
  }
  np.new_count = namer.minted();
  return np;
}

Program to_program(const NormalProgram& np) {
  Program out;
  for (const auto& k : np.order) {
    const NormalPredicate& p = np.preds.at(k);
    Goal guarded = Goal::conj({p.g2, Goal::cut(), p.g3});
    Goal body = Goal::disj(p.g1, Goal::disj(guarded, p.g4));
    Term head = p.head.arity() == 0 ? Term::atom(p.head.name) : p.head;
    out.add(Clause{head, body, 0});
  }
  return out;
}

std::string dump_normal_form(const NormalProgram& np) { return to_string(to_program(np)); }

}  // namespace redalert
