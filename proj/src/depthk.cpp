#include "redalert/depthk.hpp"

#include <algorithm>
#include <functional>

namespace redalert {

Term truncate(const Term& t, int k, FreshNames& fresh) {
  if (!t.is_compound()) return t;
  if (k <= 1) return Term::var(fresh.next());
  Term out = t;
  for (auto& a : out.args) a = truncate(a, k - 1, fresh);
  return out;
}

namespace {

bool bind_var(ConstraintConj& c, const std::string& v, const Term& t) {
  if (occurs(v, t)) return false;
  Subst one{{v, t}};
  for (auto& [lhs, rhs] : c.eqs) rhs = redalert::apply(one, rhs);
  c.eqs[v] = t;
  return true;
}

}  // namespace

bool ConstraintConj::operator<(const ConstraintConj& o) const {
  if (is_false != o.is_false) return is_false < o.is_false;
  return std::lexicographical_compare(eqs.begin(), eqs.end(), o.eqs.begin(), o.eqs.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return compare(x.second, y.second) < 0;
  });
}

ConstraintConj add_equation(ConstraintConj c, const Term& s, const Term& t) {
  if (c.is_false) return c;
  std::vector<std::pair<Term, Term>> work{{s, t}};
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    a = redalert::apply(c.eqs, a);
    b = redalert::apply(c.eqs, b);
    if (a == b) continue;
    if (a.is_var()) {
      if (!bind_var(c, a.name, b)) return ConstraintConj::falsity();
    } else if (b.is_var()) {
      if (!bind_var(c, b.name, a)) return ConstraintConj::falsity();
    } else if (a.is_compound() && b.is_compound() && a.name == b.name && a.arity() == b.arity()) {
      for (std::size_t i = 0; i < a.arity(); ++i) work.emplace_back(a.args[i], b.args[i]);
    } else {
      return ConstraintConj::falsity();
    }
  }
  return c;
}

ConstraintConj truncate_all(const ConstraintConj& c, int k, FreshNames& fresh) {
  if (c.is_false) return c;
  ConstraintConj out = c;
  for (auto& [v, t] : out.eqs) t = truncate(t, k, fresh);
  return out;
}

ConstraintConj conj_cc(const ConstraintConj& a, const ConstraintConj& b, int k, FreshNames& fresh) {
  if (a.is_false || b.is_false) return ConstraintConj::falsity();
  ConstraintConj r = a;
  for (const auto& [v, t] : b.eqs) {
    r = add_equation(std::move(r), Term::var(v), t);
    if (r.is_false) return r;
  }
  return truncate_all(r, k, fresh);
}

Term resolve(const ConstraintConj& c, const std::string& v) {
  auto it = c.eqs.find(v);
  return it == c.eqs.end() ? Term::var(v) : it->second;
}

VarSet fix_of(const ConstraintConj& c, const VarSet& among) {
  VarSet out;
  for (const auto& v : among)
    if (is_ground(resolve(c, v))) out.insert(v);
  return out;
}

VarSet fix_of(const ConstraintConj& c) {
  VarSet out;
  for (const auto& [v, t] : c.eqs)
    if (is_ground(t)) out.insert(v);
  return out;
}

ConstraintConj project_exists(const ConstraintConj& c, const VarSet& Y) {
  if (c.is_false) return c;
  // Variables that are the whole value of some Y variable collapse onto the
  // first such Y variable, so aliasing has one representation.
  std::map<std::string, std::string> rho;
  for (const auto& v : Y) {
    Term t = resolve(c, v);
    if (t.is_var() && !rho.count(t.name)) rho[t.name] = v;
  }
  std::map<std::string, Term> values;
  for (const auto& v : Y) values[v] = rename_vars(resolve(c, v), rho);
  std::map<std::string, std::string> canon;
  std::function<void(const Term&)> number = [&](const Term& t) {
    if (t.is_var()) {
      if (!Y.count(t.name) && !canon.count(t.name)) canon[t.name] = "_" + std::to_string(canon.size() + 1);
      return;
    }
    for (const auto& a : t.args) number(a);
  };
  ConstraintConj out;
  for (const auto& v : Y) {
    const Term& t = values[v];
    if (t.is_var() && t.name == v) continue;
    number(t);
    out.eqs[v] = rename_vars(t, canon);
  }
  return out;
}

ConstraintConj rename_apart(const ConstraintConj& c, const VarSet& Y, const std::string& suffix) {
  if (c.is_false) return c;
  VarSet vs;
  for (const auto& [v, t] : c.eqs) {
    vs.insert(v);
    collect_vars(t, vs);
  }
  std::map<std::string, std::string> m;
  for (const auto& v : vs)
    if (!Y.count(v)) m[v] = v + suffix;
  ConstraintConj out;
  for (const auto& [v, t] : c.eqs) out.eqs[m.count(v) ? m[v] : v] = rename_vars(t, m);
  return out;
}

std::string to_string(const ConstraintConj& c) {
  if (c.is_false) return "false";
  if (c.eqs.empty()) return "true";
  std::string out;
  for (const auto& [v, t] : c.eqs) out += (out.empty() ? "" : ", ") + v + " = " + to_string(t);
  return out;
}

DepthKSet DepthKSet::empty(VarSet scope, int k, std::size_t cap) {
  DepthKSet s;
  s.scope = std::move(scope);
  s.k = k;
  s.cap = cap;
  return s;
}

DepthKSet DepthKSet::truth(VarSet scope, int k, std::size_t cap) {
  DepthKSet s = empty(std::move(scope), k, cap);
  s.elems.insert(ConstraintConj{});
  return s;
}

DepthKSet DepthKSet::top(VarSet scope, int k, std::size_t cap) {
  DepthKSet s = empty(std::move(scope), k, cap);
  s.is_top = true;
  return s;
}

void DepthKSet::insert(const ConstraintConj& c) {
  if (is_top || c.is_false) return;
  elems.insert(project_exists(c, scope));
  if (elems.size() > cap) {
    is_top = true;
    elems.clear();
  }
}

DepthKSet union_dk(const DepthKSet& a, const DepthKSet& b) {
  if (a.is_top || b.is_top) return DepthKSet::top(a.scope, a.k, a.cap);
  DepthKSet out = a;
  for (const auto& e : b.elems) out.insert(e);
  return out;
}

DepthKSet conj_dk(const DepthKSet& a, const DepthKSet& b, FreshNames& fresh) {
  if (a.is_top || b.is_top) return DepthKSet::top(a.scope, a.k, a.cap);
  DepthKSet out = DepthKSet::empty(a.scope, a.k, a.cap);
  for (const auto& x : a.elems)
    for (const auto& y : b.elems) {
      // Existential variables of the two elements are unrelated.
      std::map<std::string, std::string> m;
      for (const auto& [v, t] : y.eqs) {
        VarSet vs;
        collect_vars(t, vs);
        for (const auto& n : vs)
          if (!b.scope.count(n) && !m.count(n)) m[n] = fresh.next();
      }
      ConstraintConj yb;
      for (const auto& [v, t] : y.eqs) yb.eqs[v] = rename_vars(t, m);
      out.insert(conj_cc(x, yb, a.k, fresh));
      if (out.is_top) return out;
    }
  return out;
}

DepthKSet reproject(const DepthKSet& s, const VarSet& scope) {
  if (s.is_top) return DepthKSet::top(scope, s.k, s.cap);
  DepthKSet out = DepthKSet::empty(scope, s.k, s.cap);
  for (const auto& e : s.elems) out.insert(e);
  return out;
}

std::string to_string(const DepthKSet& s) {
  if (s.is_top) return "top";
  std::string out = "{";
  bool first = true;
  for (const auto& e : s.elems) {
    out += (first ? "" : "; ") + std::string("[") + to_string(e) + "]";
    first = false;
  }
  return out + "}";
}

PosFormula abstract_mux(const DepthKSet& s1, const DepthKSet& s2, const std::vector<std::string>& scope,
                        const std::vector<VarId>& ids, const SpacePtr& space, std::size_t max_subset) {
  if ((!s1.is_top && s1.elems.empty()) || (!s2.is_top && s2.elems.empty())) return PosFormula::top(space);
  if (s1.is_top || s2.is_top) return PosFormula::bottom(space);

  auto separates = [&](const VarSet& Y) {
    for (const auto& a : s1.elems) {
      ConstraintConj pa = project_exists(a, Y);
      for (const auto& b : s2.elems) {
        ConstraintConj pb = rename_apart(project_exists(b, Y), Y, "'");
        ConstraintConj both = pa;
        for (const auto& [v, t] : pb.eqs) {
          both = add_equation(std::move(both), Term::var(v), t);
          if (both.is_false) break;
        }
        if (!both.is_false) return false;
      }
    }
    return true;
  };

  PosFormula result = PosFormula::bottom(space);
  std::vector<std::vector<std::size_t>> found;
  std::size_t n = scope.size();
  std::size_t limit = std::min(max_subset, n);
  for (std::size_t size = 1; size <= limit; ++size) {
    // Lexicographic enumeration of index subsets of this size.
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      bool redundant = std::any_of(found.begin(), found.end(), [&](const std::vector<std::size_t>& f) {
        return std::includes(idx.begin(), idx.end(), f.begin(), f.end());
      });
      if (!redundant) {
        VarSet Y;
        for (auto i : idx) Y.insert(scope[i]);
        if (separates(Y)) {
          found.push_back(idx);
          std::vector<VarId> vs;
          for (auto i : idx) vs.push_back(ids[i]);
          result = disj(result, PosFormula::conj_of(space, vs));
        }
      }
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return result;
}

}  // namespace redalert
