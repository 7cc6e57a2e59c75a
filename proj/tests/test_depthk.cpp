#include <gtest/gtest.h>

#include <optional>
#include <random>

#include "redalert/depthk.hpp"
#include "redalert/program.hpp"

using namespace redalert;

namespace {

Term t(const std::string& s) { return parse_term(s); }

ConstraintConj cc(const std::vector<std::pair<std::string, std::string>>& eqs) {
  ConstraintConj c;
  for (const auto& [l, r] : eqs) c = add_equation(std::move(c), t(l), t(r));
  return c;
}

// Term variant check: a bijection between variable names.
bool variant(const Term& a, const Term& b, std::map<std::string, std::string>& f,
             std::map<std::string, std::string>& g) {
  if (a.is_var() || b.is_var()) {
    if (!a.is_var() || !b.is_var()) return false;
    auto [i, ins1] = f.emplace(a.name, b.name);
    auto [j, ins2] = g.emplace(b.name, a.name);
    return i->second == b.name && j->second == a.name;
  }
  if (a.kind != b.kind || a.name != b.name || a.value != b.value || a.arity() != b.arity()) return false;
  for (std::size_t k = 0; k < a.arity(); ++k)
    if (!variant(a.args[k], b.args[k], f, g)) return false;
  return true;
}

bool variant(const Term& a, const Term& b) {
  std::map<std::string, std::string> f, g;
  return variant(a, b, f, g);
}

// Textbook recursive unification with eager composition.
std::optional<Subst> robinson(const Term& a, const Term& b, Subst s) {
  Term x = redalert::apply(s, a), y = redalert::apply(s, b);
  if (x == y) return s;
  auto bind = [&](const std::string& v, const Term& u) -> std::optional<Subst> {
    if (occurs(v, u)) return std::nullopt;
    Subst one{{v, u}};
    for (auto& [k, val] : s) val = redalert::apply(one, val);
    s[v] = u;
    return s;
  };
  if (x.is_var()) return bind(x.name, y);
  if (y.is_var()) return bind(y.name, x);
  if (!x.is_compound() || !y.is_compound() || x.name != y.name || x.arity() != y.arity()) return std::nullopt;
  for (std::size_t i = 0; i < x.arity(); ++i) {
    auto r = robinson(x.args[i], y.args[i], s);
    if (!r) return std::nullopt;
    s = *r;
  }
  return s;
}

Term random_term(std::mt19937_64& rng, int depth) {
  static const char* vars[] = {"A", "B", "C", "D"};
  static const char* atoms[] = {"a", "b"};
  int roll = std::uniform_int_distribution<int>(0, 9)(rng);
  if (depth <= 1 || roll < 4) {
    if (roll % 2 == 0) return Term::var(vars[std::uniform_int_distribution<int>(0, 3)(rng)]);
    return Term::atom(atoms[roll % 4 == 1 ? 0 : 1]);
  }
  int ar = std::uniform_int_distribution<int>(1, 2)(rng);
  std::vector<Term> args;
  for (int i = 0; i < ar; ++i) args.push_back(random_term(rng, depth - 1));
  return Term::compound(ar == 1 ? "f" : "g", args);
}

struct MemberG4 {
  // Success set of member's recursive branch at depth 3 over <X,L>.
  DepthKSet s1 = DepthKSet::empty({"L", "X"}, 3, 64);
  DepthKSet s2 = DepthKSet::empty({"L", "X"}, 3, 64);
  SpacePtr space = make_space();
  VarId x = space->get("X"), l = space->get("L");
  MemberG4() {
    s1.insert(cc({{"L", "[]"}}));
    s2.insert(cc({{"L1", "[X|_]"}, {"L", "[_|L1]"}}));
    s2.insert(cc({{"L1", "[_,X|_]"}, {"L", "[_|L1]"}}));
  }
};

}  // namespace

TEST(Truncate, WithinBoundUnchanged) {
  FreshNames fresh;
  EXPECT_EQ(truncate(t("f(a)"), 3, fresh), t("f(a)"));
  EXPECT_EQ(truncate(t("X"), 1, fresh), t("X"));
}

TEST(Truncate, ListAtDepthThree) {
  FreshNames fresh;
  Term r = truncate(t("[1,2,3,4]"), 3, fresh);
  EXPECT_EQ(to_string(r), "[1,2|_K1]");
}

TEST(Truncate, DepthOneReplacesCompound) {
  FreshNames fresh;
  EXPECT_TRUE(truncate(t("f(X)"), 1, fresh).is_var());
  EXPECT_EQ(truncate(t("a"), 1, fresh), t("a"));
}

TEST(Truncate, OriginalIsInstance) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    FreshNames fresh;
    Term orig = random_term(rng, 5);
    for (int k = 1; k <= 4; ++k) {
      Term tr = truncate(orig, k, fresh);
      Subst b;
      EXPECT_TRUE(matches(tr, orig, b)) << to_string(orig) << " k=" << k;
      EXPECT_LE(depth(tr), std::max(depth(orig) == 0 ? 0 : 1, k));
    }
  }
}

TEST(ConjCC, Identity) {
  FreshNames fresh;
  ConstraintConj c = cc({{"A", "f(B)"}, {"C", "a"}});
  EXPECT_EQ(conj_cc(ConstraintConj{}, c, 3, fresh), c);
}

TEST(ConjCC, ConstantClash) {
  FreshNames fresh;
  EXPECT_TRUE(conj_cc(cc({{"A", "c"}}), cc({{"A", "e"}}), 3, fresh).is_false);
}

TEST(ConjCC, OccursCheck) {
  FreshNames fresh;
  EXPECT_TRUE(conj_cc(cc({{"A", "f(B)"}}), cc({{"B", "A"}}), 3, fresh).is_false);
  EXPECT_TRUE(cc({{"X", "f(X)"}}).is_false);
}

TEST(ConjCC, SolvedFormIsIdempotent) {
  ConstraintConj c = cc({{"A", "f(B)"}, {"B", "g(C)"}, {"C", "a"}});
  ASSERT_FALSE(c.is_false);
  for (const auto& [v, rhs] : c.eqs) EXPECT_EQ(redalert::apply(c.eqs, rhs), rhs);
  EXPECT_EQ(to_string(resolve(c, "A")), "f(g(a))");
}

TEST(ConjCC, MatchesTextbookUnification) {
  std::mt19937_64 rng(2024);
  int unifiable = 0;
  for (int i = 0; i < 2000; ++i) {
    Term a = random_term(rng, 4), b = random_term(rng, 4);
    ConstraintConj ours = add_equation(ConstraintConj{}, a, b);
    auto ref = robinson(a, b, {});
    ASSERT_EQ(ours.is_false, !ref.has_value()) << to_string(a) << " = " << to_string(b);
    if (!ref) continue;
    ++unifiable;
    Term pair = Term::compound("p", {a, b});
    EXPECT_TRUE(variant(redalert::apply(ours.eqs, pair), redalert::apply(*ref, pair)))
        << to_string(a) << " = " << to_string(b);
  }
  EXPECT_GT(unifiable, 100);
}

TEST(FixOf, GroundBindingsOnly) {
  EXPECT_EQ(fix_of(cc({{"A", "c"}, {"B", "D"}})), VarSet{"A"});
  EXPECT_TRUE(fix_of(ConstraintConj{}).empty());
  EXPECT_TRUE(fix_of(cc({{"L", "[X|T]"}})).empty());
  EXPECT_EQ(fix_of(cc({{"A", "c"}}), VarSet{"A", "B"}), VarSet{"A"});
}

TEST(Project, Examples) {
  EXPECT_EQ(project_exists(cc({{"A", "c"}, {"B", "d"}}), {"A"}), cc({{"A", "c"}}));
  ConstraintConj c = cc({{"A", "c"}, {"B", "d"}});
  EXPECT_EQ(project_exists(c, {"A", "B"}), c);
  EXPECT_EQ(project_exists(cc({{"A", "c"}}), {}), ConstraintConj{});
}

TEST(Project, CanonicalAliasingAndExistentials) {
  EXPECT_EQ(project_exists(cc({{"X", "Z"}}), {"X", "Z"}), project_exists(cc({{"Z", "X"}}), {"X", "Z"}));
  EXPECT_EQ(project_exists(cc({{"L", "[Q|R]"}}), {"L"}), project_exists(cc({{"L", "[U|V]"}}), {"L"}));
  EXPECT_EQ(to_string(project_exists(cc({{"L", "[Q|R]"}}), {"L"})), "L = [_1|_2]");
  // Two Y variables bound to the same existential become aliased.
  EXPECT_EQ(to_string(project_exists(cc({{"A", "W"}, {"B", "W"}}), {"A", "B"})), "B = A");
}

TEST(DepthK, MemberSuccessUnion) {
  DepthKSet a = DepthKSet::empty({"A", "S"}, 3, 64);
  a.insert(cc({{"S", "[A|T]"}}));
  DepthKSet b = DepthKSet::empty({"A", "S"}, 3, 64);
  b.insert(cc({{"S", "[H,A|T]"}}));
  DepthKSet u = union_dk(a, b);
  EXPECT_EQ(u.elems.size(), 2u);
  EXPECT_EQ(to_string(u), "{[S = [A|_1]]; [S = [_1,A|_2]]}");
  EXPECT_EQ(union_dk(u, DepthKSet::empty(u.scope, 3, 64)), u);
}

TEST(DepthK, ConjClashIsEmpty) {
  FreshNames fresh;
  DepthKSet a = DepthKSet::empty({"A"}, 3, 64), b = DepthKSet::empty({"A"}, 3, 64);
  a.insert(cc({{"A", "c"}}));
  b.insert(cc({{"A", "e"}}));
  DepthKSet r = conj_dk(a, b, fresh);
  EXPECT_FALSE(r.is_top);
  EXPECT_TRUE(r.elems.empty());
}

TEST(DepthK, ConjRenamesExistentialsApart) {
  FreshNames fresh;
  DepthKSet a = DepthKSet::empty({"A", "B"}, 3, 64), b = DepthKSet::empty({"A", "B"}, 3, 64);
  a.insert(cc({{"A", "f(Q)"}}));
  b.insert(cc({{"B", "g(Q)"}}));
  DepthKSet r = conj_dk(a, b, fresh);
  ASSERT_EQ(r.elems.size(), 1u);
  EXPECT_EQ(to_string(r), "{[A = f(_1), B = g(_2)]}");
}

TEST(DepthK, CapWidensToTop) {
  DepthKSet s = DepthKSet::empty({"A"}, 3, 2);
  s.insert(cc({{"A", "a"}}));
  s.insert(cc({{"A", "b"}}));
  EXPECT_FALSE(s.is_top);
  s.insert(cc({{"A", "c"}}));
  EXPECT_TRUE(s.is_top);
  EXPECT_TRUE(s.elems.empty());
  FreshNames fresh;
  DepthKSet other = DepthKSet::truth({"A"}, 3, 2);
  EXPECT_TRUE(union_dk(other, s).is_top);
  EXPECT_TRUE(conj_dk(other, s, fresh).is_top);
  EXPECT_TRUE(conj_dk(s, other, fresh).is_top);
}

TEST(Mux, MemberRecursiveBranch) {
  MemberG4 m;
  EXPECT_EQ(m.s2.elems.size(), 2u);
  PosFormula r = abstract_mux(m.s1, m.s2, {"X", "L"}, {m.x, m.l}, m.space, 4);
  EXPECT_TRUE(equiv(r, PosFormula::var(m.space, m.l))) << to_dnf_string(r, space_names(m.space));
  EXPECT_EQ(to_dnf_string(r, space_names(m.space)), "L");
}

TEST(Mux, EmptyOperandGivesTrue) {
  MemberG4 m;
  DepthKSet none = DepthKSet::empty({"L", "X"}, 3, 64);
  EXPECT_TRUE(abstract_mux(none, m.s2, {"X", "L"}, {m.x, m.l}, m.space, 4).is_top());
  EXPECT_TRUE(abstract_mux(m.s1, none, {"X", "L"}, {m.x, m.l}, m.space, 4).is_top());
}

TEST(Mux, TopOperandGivesFalse) {
  MemberG4 m;
  DepthKSet top = DepthKSet::top({"L", "X"}, 3, 64);
  EXPECT_TRUE(abstract_mux(top, m.s2, {"X", "L"}, {m.x, m.l}, m.space, 4).is_bottom());
}

TEST(Mux, SelfOverlapGivesFalse) {
  SpacePtr sp = make_space();
  VarId a = sp->get("A"), b = sp->get("B");
  DepthKSet s = DepthKSet::empty({"A", "B"}, 3, 64);
  s.insert(cc({{"A", "c"}, {"B", "d"}}));
  s.insert(cc({{"A", "e"}}));
  EXPECT_TRUE(abstract_mux(s, s, {"A", "B"}, {a, b}, sp, 4).is_bottom());
}

TEST(Mux, DisagreementOnOneArgument) {
  SpacePtr sp = make_space();
  VarId a = sp->get("A"), b = sp->get("B");
  DepthKSet s1 = DepthKSet::empty({"A", "B"}, 3, 64), s2 = s1;
  s1.insert(cc({{"A", "c"}, {"B", "d"}}));
  s2.insert(cc({{"A", "e"}, {"B", "d"}}));
  EXPECT_TRUE(equiv(abstract_mux(s1, s2, {"A", "B"}, {a, b}, sp, 4), PosFormula::var(sp, a)));
}

TEST(Mux, SubsetBoundStrengthens) {
  SpacePtr sp = make_space();
  VarId a = sp->get("A"), b = sp->get("B");
  DepthKSet s1 = DepthKSet::empty({"A", "B"}, 3, 64), s2 = s1;
  s1.insert(cc({{"A", "f(a,C)"}, {"B", "g(C)"}}));
  s2.insert(cc({{"A", "f(D,b)"}, {"B", "g(D)"}}));
  s2.insert(cc({{"A", "f(b,b)"}}));
  PosFormula full = abstract_mux(s1, s2, {"A", "B"}, {a, b}, sp, 4);
  PosFormula one = abstract_mux(s1, s2, {"A", "B"}, {a, b}, sp, 1);
  EXPECT_TRUE(entails(one, full));
}

TEST(Mux, SymmetryAndWitness) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> scope{"A", "B", "C"};
  SpacePtr sp = make_space();
  std::vector<VarId> ids;
  for (const auto& v : scope) ids.push_back(sp->get(v));
  VarSet scope_set(scope.begin(), scope.end());
  auto random_set = [&] {
    DepthKSet s = DepthKSet::empty(scope_set, 3, 64);
    int n = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < n; ++i) {
      ConstraintConj c;
      for (const auto& v : scope)
        if (std::uniform_int_distribution<int>(0, 2)(rng) > 0) c = add_equation(std::move(c), Term::var(v), random_term(rng, 3));
      s.insert(c);
    }
    return s;
  };
  int nontrivial = 0;
  for (int i = 0; i < 200; ++i) {
    DepthKSet s1 = random_set(), s2 = random_set();
    PosFormula f = abstract_mux(s1, s2, scope, ids, sp, 4);
    PosFormula g = abstract_mux(s2, s1, scope, ids, sp, 4);
    EXPECT_TRUE(equiv(f, g));
    if (s1.elems.empty() || s2.elems.empty()) continue;
    for (const auto& imp : prime_implicants(f)) {
      ++nontrivial;
      VarSet Y;
      for (Lit l : imp) {
        ASSERT_FALSE(lit_neg(l));
        Y.insert(sp->name(lit_var(l)));
      }
      for (const auto& x : s1.elems)
        for (const auto& y : s2.elems) {
          ConstraintConj px = project_exists(x, Y), py = rename_apart(project_exists(y, Y), Y, "#");
          ConstraintConj both = px;
          for (const auto& [v, rhs] : py.eqs) both = add_equation(std::move(both), Term::var(v), rhs);
          EXPECT_TRUE(both.is_false);
        }
    }
  }
  EXPECT_GT(nontrivial, 10);
}
