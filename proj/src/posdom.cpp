#include "redalert/posdom.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "redalert/errors.hpp"

namespace redalert {

// ---------------------------------------------------------------- VarSpace

VarId VarSpace::get(const std::string& key) {
  std::lock_guard lock(mu_);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  VarId id = static_cast<VarId>(names_.size());
  names_.push_back(key);
  index_.emplace(key, id);
  return id;
}

VarId VarSpace::fresh(const std::string& base) {
  std::lock_guard lock(mu_);
  std::string key;
  do {
    key = base + "#" + std::to_string(++counters_[base]);
  } while (index_.count(key));
  VarId id = static_cast<VarId>(names_.size());
  names_.push_back(key);
  index_.emplace(key, id);
  return id;
}

const std::string& VarSpace::name(VarId v) const {
  std::lock_guard lock(mu_);
  return names_.at(v);
}

std::size_t VarSpace::size() const {
  std::lock_guard lock(mu_);
  return names_.size();
}

bool VarSpace::has(const std::string& key) const {
  std::lock_guard lock(mu_);
  return index_.count(key) != 0;
}

// ---------------------------------------------------------------- helpers

namespace {

void same_space(const PosFormula& a, const PosFormula& b) {
  if (a.space() != b.space()) throw Error("posdom: formulas over different variable spaces");
}

// Dense renumbering of the variables a computation touches, order-preserving
// so that "lowest VarId first" branching carries over.
struct Local {
  std::vector<VarId> vars;
  std::map<VarId, std::uint32_t> idx;

  void add(const PosFormula& f) {
    for (const auto& c : f.clauses())
      for (Lit l : c) vars.push_back(lit_var(l));
  }
  void add(const std::vector<Lit>& lits) {
    for (Lit l : lits) vars.push_back(lit_var(l));
  }
  void finish() {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (std::uint32_t i = 0; i < vars.size(); ++i) idx[vars[i]] = i;
  }
  std::uint32_t size() const { return static_cast<std::uint32_t>(vars.size()); }
  Lit to_local(Lit l) const { return 2 * idx.at(lit_var(l)) + (l & 1u); }
  Lit to_global(Lit l) const { return 2 * vars[lit_var(l)] + (l & 1u); }
};

void load(SatSolver& s, const PosFormula& f, const Local& L) {
  s.ensure_vars(L.size());
  if (f.is_bottom()) {
    s.add_clause({});
    return;
  }
  for (const auto& c : f.clauses()) {
    std::vector<Lit> lc;
    for (Lit l : c) lc.push_back(L.to_local(l));
    s.add_clause(std::move(lc));
  }
}

// Adds ~f using one selector per clause: s_c -> ~l for every l in c, and some s_c holds.
void load_negation(SatSolver& s, const PosFormula& f, const Local& L) {
  s.ensure_vars(L.size());
  if (f.is_bottom()) return;
  if (f.is_top()) {
    s.add_clause({});
    return;
  }
  std::vector<Lit> some;
  for (const auto& c : f.clauses()) {
    std::uint32_t sel = s.num_vars();
    s.ensure_vars(sel + 1);
    for (Lit l : c) s.add_clause({neg_lit(sel), lit_not(L.to_local(l))});
    some.push_back(pos_lit(sel));
  }
  s.add_clause(std::move(some));
}

bool cube_entails(const std::vector<Lit>& cube, const PosFormula& f) {
  if (f.is_bottom()) return false;
  for (const auto& c : f.clauses()) {
    bool hit = false;
    for (Lit l : c)
      if (std::binary_search(cube.begin(), cube.end(), l)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

// CNF of h from the prime implicants of ~h. `not_h` holds ~h over L (plus
// selectors); `h_false` decides whether a cube of local literals refutes h.
PosFormula cnf_from_negation(const SpacePtr& sp, const Local& L, SatSolver not_h,
                             const std::function<bool(const std::vector<Lit>&)>& h_false) {
  std::vector<PosClause> out;
  while (true) {
    SatResult r = not_h.solve();
    if (!r.satisfiable) break;
    std::vector<Lit> cube;
    for (std::uint32_t v = 0; v < L.size(); ++v) cube.push_back(r.model[v] ? pos_lit(v) : neg_lit(v));
    for (std::uint32_t v = 0; v < L.size(); ++v) {
      auto it = std::find_if(cube.begin(), cube.end(), [&](Lit l) { return lit_var(l) == v; });
      if (it == cube.end()) continue;
      std::vector<Lit> smaller(cube.begin(), it);
      smaller.insert(smaller.end(), it + 1, cube.end());
      if (h_false(smaller)) cube = std::move(smaller);
    }
    std::vector<Lit> block;
    PosClause clause;
    for (Lit l : cube) {
      block.push_back(lit_not(l));
      clause.push_back(L.to_global(lit_not(l)));
    }
    not_h.add_clause(block);
    out.push_back(std::move(clause));
    if (cube.empty()) break;
  }
  return PosFormula::from_clauses(sp, std::move(out));
}

PosFormula cofactor(const PosFormula& f, VarId x, bool value) {
  Lit keep_sat = value ? pos_lit(x) : neg_lit(x);
  std::vector<PosClause> out;
  for (const auto& c : f.clauses()) {
    if (std::find(c.begin(), c.end(), keep_sat) != c.end()) continue;
    PosClause d;
    for (Lit l : c)
      if (lit_var(l) != x) d.push_back(l);
    out.push_back(std::move(d));
  }
  return PosFormula::from_clauses(f.space(), std::move(out));
}

}  // namespace

// ---------------------------------------------------------------- PosFormula

PosFormula PosFormula::top(SpacePtr s) {
  PosFormula f;
  f.space_ = std::move(s);
  return f;
}

PosFormula PosFormula::bottom(SpacePtr s) {
  PosFormula f;
  f.space_ = std::move(s);
  f.bottom_ = true;
  return f;
}

PosFormula PosFormula::lit(SpacePtr s, Lit l) {
  PosFormula f = top(std::move(s));
  f.clauses_.push_back({l});
  return f;
}

PosFormula PosFormula::var(SpacePtr s, VarId v) { return lit(std::move(s), pos_lit(v)); }

PosFormula PosFormula::conj_of(SpacePtr s, const std::vector<VarId>& vs) {
  std::vector<PosClause> cs;
  for (VarId v : vs) cs.push_back({pos_lit(v)});
  return from_clauses(std::move(s), std::move(cs));
}

PosFormula PosFormula::from_clauses(SpacePtr s, std::vector<PosClause> clauses) {
  PosFormula f = top(std::move(s));
  std::vector<PosClause> cs;
  for (auto& c : clauses) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    bool taut = false;
    for (std::size_t i = 1; i < c.size(); ++i)
      if (lit_var(c[i]) == lit_var(c[i - 1])) taut = true;
    if (taut) continue;
    if (c.empty()) return bottom(f.space_);
    cs.push_back(std::move(c));
  }
  std::sort(cs.begin(), cs.end(), [](const PosClause& a, const PosClause& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  for (const auto& c : cs) {
    bool subsumed = std::any_of(f.clauses_.begin(), f.clauses_.end(), [&](const PosClause& d) {
      return std::includes(c.begin(), c.end(), d.begin(), d.end());
    });
    if (!subsumed) f.clauses_.push_back(c);
  }
  std::sort(f.clauses_.begin(), f.clauses_.end());
  if (!f.is_positive() && !sat(f).satisfiable) return bottom(f.space_);
  return f;
}

bool PosFormula::is_positive() const {
  if (bottom_) return false;
  return std::all_of(clauses_.begin(), clauses_.end(), [](const PosClause& c) {
    return std::any_of(c.begin(), c.end(), [](Lit l) { return !lit_neg(l); });
  });
}

std::vector<VarId> PosFormula::support() const {
  std::set<VarId> s;
  for (const auto& c : clauses_)
    for (Lit l : c) s.insert(lit_var(l));
  return {s.begin(), s.end()};
}

bool PosFormula::eval(const std::vector<bool>& a) const {
  if (bottom_) return false;
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const PosClause& c) {
    return std::any_of(c.begin(), c.end(), [&](Lit l) { return a.at(lit_var(l)) != lit_neg(l); });
  });
}

// ---------------------------------------------------------------- operations

SatResult sat(const PosFormula& f) {
  std::size_t n = f.space() ? f.space()->size() : 0;
  if (f.is_bottom()) return {};
  Local L;
  L.add(f);
  L.finish();
  SatSolver s;
  load(s, f, L);
  SatResult r = s.solve();
  if (!r.satisfiable) return {};
  SatResult out;
  out.satisfiable = true;
  out.model.assign(std::max<std::size_t>(n, L.vars.empty() ? 0 : L.vars.back() + 1), true);
  for (std::uint32_t i = 0; i < L.size(); ++i) out.model[L.vars[i]] = r.model[i];
  return out;
}

PosFormula conj(const PosFormula& a, const PosFormula& b) {
  same_space(a, b);
  if (a.is_bottom() || b.is_bottom()) return PosFormula::bottom(a.space());
  if (a.is_top()) return b;
  if (b.is_top()) return a;
  std::vector<PosClause> cs = a.clauses();
  cs.insert(cs.end(), b.clauses().begin(), b.clauses().end());
  return PosFormula::from_clauses(a.space(), std::move(cs));
}

PosFormula disj(const PosFormula& a, const PosFormula& b) {
  same_space(a, b);
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  if (a.is_top() || b.is_top()) return PosFormula::top(a.space());
  if (entails(a, b)) return b;
  if (entails(b, a)) return a;
  Local L;
  L.add(a);
  L.add(b);
  L.finish();
  SatSolver sa, sb, not_h;
  load(sa, a, L);
  load(sb, b, L);
  load_negation(not_h, a, L);
  load_negation(not_h, b, L);
  return cnf_from_negation(a.space(), L, std::move(not_h), [&](const std::vector<Lit>& cube) {
    return !sa.solve(cube).satisfiable && !sb.solve(cube).satisfiable;
  });
}

PosFormula implies_fn(const PosFormula& a, const PosFormula& b) {
  same_space(a, b);
  if (a.is_bottom() || b.is_top()) return PosFormula::top(a.space());
  if (a.is_top()) return b;
  Local L;
  L.add(a);
  L.add(b);
  L.finish();
  SatSolver sb, not_h;
  load(sb, b, L);
  load(not_h, a, L);
  load_negation(not_h, b, L);
  // Local cubes use local literals; compare against a's clauses in local form.
  std::vector<PosClause> a_local;
  for (const auto& c : a.clauses()) {
    PosClause d;
    for (Lit l : c) d.push_back(L.to_local(l));
    std::sort(d.begin(), d.end());
    a_local.push_back(std::move(d));
  }
  auto cube_entails_a = [&](const std::vector<Lit>& cube) {
    std::vector<Lit> sorted = cube;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& c : a_local) {
      bool hit = std::any_of(c.begin(), c.end(), [&](Lit l) { return std::binary_search(sorted.begin(), sorted.end(), l); });
      if (!hit) return false;
    }
    return true;
  };
  return cnf_from_negation(a.space(), L, std::move(not_h), [&](const std::vector<Lit>& cube) {
    return cube_entails_a(cube) && !sb.solve(cube).satisfiable;
  });
}

PosFormula negate(const PosFormula& f) { return implies_fn(f, PosFormula::bottom(f.space())); }

PosFormula exists_elim(const PosFormula& f, VarId x) {
  if (f.is_bottom()) return f;
  bool pos = false, neg = false;
  for (const auto& c : f.clauses())
    for (Lit l : c)
      if (lit_var(l) == x) (lit_neg(l) ? neg : pos) = true;
  if (!pos && !neg) return f;
  if (!pos || !neg) {
    // Pure literal: every clause mentioning x can be satisfied through x.
    std::vector<PosClause> keep;
    for (const auto& c : f.clauses())
      if (std::none_of(c.begin(), c.end(), [&](Lit l) { return lit_var(l) == x; })) keep.push_back(c);
    return PosFormula::from_clauses(f.space(), std::move(keep));
  }
  return disj(cofactor(f, x, true), cofactor(f, x, false));
}

PosFormula exists_elim(const PosFormula& f, const std::vector<VarId>& xs) {
  PosFormula r = f;
  for (VarId x : xs) r = exists_elim(r, x);
  return r;
}

PosFormula forall_elim(const PosFormula& f, VarId x) {
  if (f.is_bottom()) return f;
  std::vector<PosClause> out;
  for (const auto& c : f.clauses()) {
    PosClause d;
    for (Lit l : c)
      if (lit_var(l) != x) d.push_back(l);
    out.push_back(std::move(d));
  }
  return PosFormula::from_clauses(f.space(), std::move(out));
}

PosFormula forall_elim(const PosFormula& f, const std::vector<VarId>& xs) {
  std::vector<VarId> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (f.is_bottom()) return f;
  std::vector<PosClause> out;
  for (const auto& c : f.clauses()) {
    PosClause d;
    for (Lit l : c)
      if (!std::binary_search(sorted.begin(), sorted.end(), lit_var(l))) d.push_back(l);
    out.push_back(std::move(d));
  }
  return PosFormula::from_clauses(f.space(), std::move(out));
}

namespace {
std::vector<VarId> outside(const PosFormula& f, const std::vector<VarId>& keep) {
  std::set<VarId> k(keep.begin(), keep.end());
  std::vector<VarId> out;
  for (VarId v : f.support())
    if (!k.count(v)) out.push_back(v);
  return out;
}
}  // namespace

PosFormula exists_except(const PosFormula& f, const std::vector<VarId>& keep) {
  return exists_elim(f, outside(f, keep));
}

PosFormula forall_except(const PosFormula& f, const std::vector<VarId>& keep) {
  return forall_elim(f, outside(f, keep));
}

PosFormula rename(const PosFormula& f, const std::map<VarId, VarId>& mapping) {
  if (f.is_bottom() || f.is_top()) return f;
  std::set<VarId> images;
  for (VarId v : f.support()) {
    auto it = mapping.find(v);
    VarId img = it == mapping.end() ? v : it->second;
    if (!images.insert(img).second) throw Error("posdom: renaming is not injective on the formula's support");
  }
  std::vector<PosClause> out;
  for (const auto& c : f.clauses()) {
    PosClause d;
    for (Lit l : c) {
      auto it = mapping.find(lit_var(l));
      d.push_back(it == mapping.end() ? l : 2 * it->second + (l & 1u));
    }
    out.push_back(std::move(d));
  }
  return PosFormula::from_clauses(f.space(), std::move(out));
}

bool entails(const PosFormula& a, const PosFormula& b) {
  same_space(a, b);
  if (a.is_bottom() || b.is_top()) return true;
  if (b.is_bottom()) return !sat(a).satisfiable;
  // Clauses of b already present in a need no solver call.
  std::vector<const PosClause*> open;
  for (const auto& c : b.clauses())
    if (!std::binary_search(a.clauses().begin(), a.clauses().end(), c)) open.push_back(&c);
  if (open.empty()) return true;
  Local L;
  L.add(a);
  L.add(b);
  L.finish();
  SatSolver s;
  load(s, a, L);
  for (const PosClause* c : open) {
    std::vector<Lit> assume;
    for (Lit l : *c) assume.push_back(lit_not(L.to_local(l)));
    if (s.solve(assume).satisfiable) return false;
  }
  return true;
}

bool equiv(const PosFormula& a, const PosFormula& b) {
  if (a == b) return true;
  return entails(a, b) && entails(b, a);
}

PosFormula to_pos_bottom(const PosFormula& f) { return f.is_positive() ? f : PosFormula::bottom(f.space()); }

PosFormula iff_conj(const SpacePtr& s, VarId x, const std::vector<VarId>& vs) {
  std::vector<PosClause> cs;
  PosClause back{pos_lit(x)};
  for (VarId v : vs) {
    cs.push_back({neg_lit(x), pos_lit(v)});
    back.push_back(neg_lit(v));
  }
  cs.push_back(std::move(back));
  return PosFormula::from_clauses(s, std::move(cs));
}

PosFormula alpha_atomic(const SpacePtr& s, const std::vector<VarId>& scope, const std::vector<VarId>& fixed) {
  std::set<VarId> fx(fixed.begin(), fixed.end());
  std::vector<PosClause> first;
  for (VarId v : scope) first.push_back({fx.count(v) ? pos_lit(v) : neg_lit(v)});
  return disj(PosFormula::from_clauses(s, std::move(first)), PosFormula::conj_of(s, scope));
}

std::vector<std::vector<Lit>> prime_implicants(const PosFormula& f) {
  if (f.is_bottom()) return {};
  if (f.is_top()) return {{}};
  Local L;
  L.add(f);
  L.finish();
  SatSolver s;
  load(s, f, L);
  std::vector<std::vector<Lit>> out;
  while (true) {
    SatResult r = s.solve();
    if (!r.satisfiable) break;
    std::vector<Lit> cube;
    for (std::uint32_t v = 0; v < L.size(); ++v) cube.push_back(L.to_global(r.model[v] ? pos_lit(v) : neg_lit(v)));
    for (std::size_t i = 0; i < cube.size();) {
      std::vector<Lit> smaller = cube;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
      if (cube_entails(smaller, f)) cube = std::move(smaller);
      else ++i;
    }
    std::vector<Lit> block;
    for (Lit l : cube) block.push_back(lit_not(L.to_local(l)));
    s.add_clause(block);
    out.push_back(cube);
    if (cube.empty()) break;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

// ---------------------------------------------------------------- text

NameFn space_names(const SpacePtr& s) {
  return [s](VarId v) { return s->name(v); };
}

namespace {
std::string lit_text(Lit l, const NameFn& names) { return (lit_neg(l) ? "~" : "") + names(lit_var(l)); }

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}
}  // namespace

std::string to_cnf_string(const PosFormula& f, const NameFn& names) {
  if (f.is_bottom()) return "false";
  if (f.is_top()) return "true";
  std::vector<std::string> cs;
  for (const auto& c : f.clauses()) {
    std::vector<std::string> ls;
    for (Lit l : c) ls.push_back(lit_text(l, names));
    cs.push_back(c.size() > 1 && f.clauses().size() > 1 ? "(" + join(ls, " \\/ ") + ")" : join(ls, " \\/ "));
  }
  return join(cs, " /\\ ");
}

std::vector<std::vector<Lit>> prime_implicants(const PosFormula& f, const RankFn& rank) {
  auto key = [&](Lit l) { return std::pair{rank(lit_var(l)), lit_neg(l)}; };
  auto cubes = prime_implicants(f);
  for (auto& c : cubes) std::sort(c.begin(), c.end(), [&](Lit a, Lit b) { return key(a) < key(b); });
  std::stable_sort(cubes.begin(), cubes.end(), [&](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](Lit x, Lit y) { return key(x) < key(y); });
  });
  return cubes;
}

std::string to_dnf_string(const PosFormula& f, const NameFn& names) {
  return to_dnf_string(f, names, [](VarId v) { return static_cast<long>(v); });
}

std::string to_dnf_string(const PosFormula& f, const NameFn& names, const RankFn& rank) {
  auto cubes = prime_implicants(f, rank);
  if (cubes.empty()) return "false";
  if (cubes.size() == 1 && cubes[0].empty()) return "true";
  auto in = [](const std::vector<Lit>& c, Lit l) { return std::find(c.begin(), c.end(), l) != c.end(); };
  std::vector<Lit> common;
  for (Lit l : cubes[0])
    if (std::all_of(cubes.begin(), cubes.end(), [&](const auto& c) { return in(c, l); })) common.push_back(l);
  std::vector<std::string> head;
  for (Lit l : common) head.push_back(lit_text(l, names));
  std::vector<std::string> products;
  for (const auto& c : cubes) {
    std::vector<std::string> ls;
    for (Lit l : c)
      if (!in(common, l)) ls.push_back(lit_text(l, names));
    if (ls.empty()) continue;
    products.push_back(ls.size() > 1 && cubes.size() > 1 ? "(" + join(ls, " /\\ ") + ")" : join(ls, " /\\ "));
  }
  if (products.empty()) return join(head, " /\\ ");
  std::string rest = join(products, " \\/ ");
  if (head.empty()) return rest;
  return join(head, " /\\ ") + " /\\ " + (products.size() > 1 ? "(" + rest + ")" : rest);
}

namespace {
class FormulaParser {
 public:
  FormulaParser(const SpacePtr& s, const std::string& text, const std::function<VarId(const std::string&)>& lookup)
      : s_(s), text_(text), lookup_(lookup) {}

  PosFormula parse() {
    PosFormula f = disjunction();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (text_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("formula: " + msg + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
  }

  PosFormula disjunction() {
    PosFormula f = conjunction();
    while (eat("\\/")) f = disj(f, conjunction());
    return f;
  }
  PosFormula conjunction() {
    PosFormula f = unary();
    while (eat("/\\")) f = conj(f, unary());
    return f;
  }
  PosFormula unary() {
    if (eat("~")) return negate(unary());
    if (eat("(")) {
      PosFormula f = disjunction();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a variable");
    std::string id = text_.substr(start, pos_ - start);
    if (id == "true") return PosFormula::top(s_);
    if (id == "false") return PosFormula::bottom(s_);
    return PosFormula::var(s_, lookup_(id));
  }

  SpacePtr s_;
  std::string text_;
  std::function<VarId(const std::string&)> lookup_;
  std::size_t pos_ = 0;
};
}  // namespace

PosFormula parse_formula(const SpacePtr& s, const std::string& text,
                         const std::function<VarId(const std::string&)>& lookup) {
  return FormulaParser(s, text, lookup).parse();
}

}  // namespace redalert
