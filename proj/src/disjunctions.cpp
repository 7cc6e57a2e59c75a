#include <algorithm>

#include "redalert/errors.hpp"
#include "redalert/program.hpp"

namespace redalert {
namespace {

struct Expander {
  AuxNamer& namer;
  std::vector<Clause> aux;

  // `outside` holds the variables visible outside the goal being rewritten.
  Goal rewrite(const Goal& g, const VarSet& outside, const std::string& where, int line) {
    if (g.kind == Goal::Kind::Conj) {
      std::vector<Goal> parts;
      for (std::size_t i = 0; i < g.parts.size(); ++i) {
        VarSet ctx = outside;
        for (std::size_t j = 0; j < g.parts.size(); ++j)
          if (j != i) collect_vars(g.parts[j], ctx);
        parts.push_back(rewrite(g.parts[i], ctx, where, line));
      }
      return Goal::conj(std::move(parts));
    }
    if (g.kind != Goal::Kind::Disj) return g;
    if (contains_cut(g)) throw UnsupportedError("cut inside a disjunction", where);

    std::vector<std::string> ordered;
    collect_vars_ordered(g, ordered);
    std::vector<Term> closure;
    for (const auto& v : ordered)
      if (outside.count(v)) closure.push_back(Term::var(v));

    std::string name = namer.mint();
    Term head = Term::compound(name, closure);
    // Minting order: this predicate before any nested one.
    std::size_t slot = aux.size();
    aux.emplace_back();
    aux.emplace_back();
    VarSet head_vars;
    collect_vars(head, head_vars);
    for (int side = 0; side < 2; ++side) {
      const Goal& d = g.parts[side];
      aux[slot + side] = Clause{head, rewrite(d, head_vars, name + "/" + std::to_string(closure.size()), line), line};
    }
    return Goal::call(name, closure);
  }
};

}  // namespace

Program expand_disjunctions(const Program& p, AuxNamer& namer) {
  Program out;
  Expander ex{namer, {}};
  for (const auto& c : p.clauses()) {
    if (!contains_disj(c.body)) {
      out.add(c);
      continue;
    }
    VarSet head_vars;
    collect_vars(c.head, head_vars);
    out.add(Clause{c.head, ex.rewrite(c.body, head_vars, c.key().str(), c.line), c.line});
  }
  for (auto& c : ex.aux) out.add(std::move(c));
  return out;
}

Program expand_disjunctions(const Program& p) {
  AuxNamer namer;
  return expand_disjunctions(p, namer);
}

}  // namespace redalert
