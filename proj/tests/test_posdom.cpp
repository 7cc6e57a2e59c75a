#include <gtest/gtest.h>

#include "pos_oracle.hpp"
#include "redalert/errors.hpp"
#include "redalert/posdom.hpp"
#include "redalert/sat.hpp"

using namespace redalert;
using oracle_pos::table;

namespace {

struct Vars {
  SpacePtr s = make_space();
  VarId a = s->get("A"), b = s->get("B"), c = s->get("C"), x = s->get("X"), y = s->get("Y");
  PosFormula v(VarId i) const { return PosFormula::var(s, i); }
  PosFormula nv(VarId i) const { return PosFormula::lit(s, neg_lit(i)); }
  PosFormula top() const { return PosFormula::top(s); }
  PosFormula bot() const { return PosFormula::bottom(s); }
  PosFormula parse(const std::string& t) const {
    return parse_formula(s, t, [this](const std::string& n) { return s->get(n); });
  }
};

}  // namespace

TEST(Sat, Basics) {
  SatSolver s;
  s.add_clause({pos_lit(0)});
  s.add_clause({neg_lit(0)});
  EXPECT_FALSE(s.solve().satisfiable);

  SatSolver empty;
  SatResult r = empty.solve();
  EXPECT_TRUE(r.satisfiable);
  EXPECT_TRUE(r.model.empty());

  SatSolver t;
  t.add_clause({pos_lit(0), pos_lit(1)});
  t.add_clause({neg_lit(0), pos_lit(1)});
  SatResult m = t.solve();
  ASSERT_TRUE(m.satisfiable);
  EXPECT_TRUE(m.model[1]);
  // True branch first on the lowest variable.
  EXPECT_TRUE(m.model[0]);
  EXPECT_FALSE(t.solve({neg_lit(1)}).satisfiable);
}

TEST(Sat, PigeonholeUnsat) {
  // Three pigeons, two holes.
  SatSolver s;
  auto p = [](int i, int j) { return static_cast<std::uint32_t>(i * 2 + j); };
  for (int i = 0; i < 3; ++i) s.add_clause({pos_lit(p(i, 0)), pos_lit(p(i, 1))});
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 3; ++i)
      for (int k = i + 1; k < 3; ++k) s.add_clause({neg_lit(p(i, j)), neg_lit(p(k, j))});
  EXPECT_FALSE(s.solve().satisfiable);
}

TEST(Pos, FormulaWrapperSat) {
  Vars V;
  EXPECT_FALSE(sat(PosFormula::from_clauses(V.s, {{pos_lit(V.a)}, {neg_lit(V.a)}})).satisfiable);
  EXPECT_TRUE(sat(V.top()).satisfiable);
  auto r = sat(V.parse("(A \\/ B) /\\ (~A \\/ B)"));
  ASSERT_TRUE(r.satisfiable);
  EXPECT_TRUE(r.model[V.b]);
}

TEST(Pos, ConjExamples) {
  Vars V;
  PosFormula f = V.parse("A \\/ B");
  EXPECT_TRUE(equiv(conj(V.top(), f), f));
  EXPECT_TRUE(equiv(conj(V.v(V.a), V.v(V.b)), V.parse("A /\\ B")));
  EXPECT_TRUE(conj(V.bot(), f).is_bottom());
}

TEST(Pos, DisjExamples) {
  Vars V;
  EXPECT_TRUE(equiv(disj(V.v(V.a), V.v(V.a)), V.v(V.a)));
  PosFormula lhs = V.parse("A /\\ ~B /\\ ~C"), rhs = V.parse("A /\\ B /\\ C");
  PosFormula d = disj(lhs, rhs);
  EXPECT_TRUE(entails(lhs, d));
  EXPECT_TRUE(entails(rhs, d));
  EXPECT_FALSE(entails(V.parse("A /\\ B /\\ ~C"), d));
  EXPECT_TRUE(d.is_positive());
  EXPECT_TRUE(equiv(disj(V.bot(), d), d));
}

TEST(Pos, ImpliesExamples) {
  Vars V;
  PosFormula f = V.parse("A /\\ (B \\/ C)");
  EXPECT_TRUE(equiv(implies_fn(V.top(), f), f));
  EXPECT_TRUE(implies_fn(f, V.top()).is_top());
  EXPECT_TRUE(implies_fn(V.bot(), f).is_top());
  PosFormula n = implies_fn(V.v(V.a), V.bot());
  EXPECT_FALSE(n.is_positive());
  EXPECT_TRUE(equiv(n, V.nv(V.a)));
}

TEST(Pos, ExistsExamples) {
  Vars V;
  EXPECT_TRUE(equiv(exists_elim(V.parse("A /\\ B"), V.a), V.v(V.b)));
  EXPECT_TRUE(exists_elim(V.v(V.a), V.a).is_top());
  EXPECT_TRUE(exists_elim(V.parse("A \\/ B"), V.a).is_top());
}

TEST(Pos, ForallExamples) {
  Vars V;
  EXPECT_TRUE(equiv(forall_elim(V.v(V.b), V.a), V.v(V.b)));
  EXPECT_TRUE(forall_elim(V.parse("A /\\ B"), V.a).is_bottom());
  EXPECT_TRUE(equiv(forall_elim(V.parse("A \\/ B"), V.a), V.v(V.b)));
}

TEST(Pos, RenameExamples) {
  Vars V;
  PosFormula f = V.parse("A /\\ B");
  PosFormula g = rename(f, {{V.a, V.x}, {V.b, V.y}});
  EXPECT_TRUE(equiv(g, V.parse("X /\\ Y")));
  EXPECT_TRUE(rename(V.top(), {{V.a, V.x}}).is_top());
  EXPECT_TRUE(equiv(rename(g, {{V.x, V.a}, {V.y, V.b}}), f));
  EXPECT_THROW(rename(f, {{V.a, V.c}, {V.b, V.c}}), Error);
}

TEST(Pos, EntailsExamples) {
  Vars V;
  EXPECT_TRUE(entails(V.parse("A /\\ B"), V.v(V.a)));
  EXPECT_FALSE(entails(V.v(V.a), V.parse("A /\\ B")));
  EXPECT_TRUE(entails(V.bot(), V.v(V.a)));
  EXPECT_TRUE(entails(V.bot(), V.bot()));
  EXPECT_FALSE(entails(V.top(), V.bot()));
}

TEST(Pos, SpaceMismatchRejected) {
  Vars V, W;
  EXPECT_THROW(conj(V.v(V.a), W.v(W.a)), Error);
}

TEST(Pos, AlphaAtomicValues) {
  Vars V;
  EXPECT_TRUE(equiv(alpha_atomic(V.s, {V.a}, {V.a}), V.v(V.a)));
  PosFormula three = alpha_atomic(V.s, {V.a, V.b, V.c}, {V.a});
  EXPECT_TRUE(equiv(three, V.parse("(A /\\ ~B /\\ ~C) \\/ (A /\\ B /\\ C)")));
  EXPECT_TRUE(equiv(alpha_atomic(V.s, {V.a, V.b}, {V.a, V.b}), V.parse("A /\\ B")));
}

TEST(Pos, IffConj) {
  Vars V;
  EXPECT_TRUE(equiv(iff_conj(V.s, V.x, {}), V.v(V.x)));
  EXPECT_TRUE(equiv(iff_conj(V.s, V.x, {V.a, V.b}), V.parse("(~X \\/ A) /\\ (~X \\/ B) /\\ (X \\/ ~A \\/ ~B)")));
}

TEST(Pos, UnsatCanonicalizedToBottom) {
  Vars V;
  PosFormula f = PosFormula::from_clauses(V.s, {{neg_lit(V.a)}, {pos_lit(V.a), pos_lit(V.b)}, {neg_lit(V.b)}});
  EXPECT_TRUE(f.is_bottom());
}

TEST(Pos, DnfRendering) {
  Vars V;
  auto n = space_names(V.s);
  EXPECT_EQ(to_dnf_string(V.parse("W /\\ (Y \\/ Z)"), n), "W /\\ (Y \\/ Z)");
  EXPECT_EQ(to_dnf_string(V.parse("W \\/ (Y /\\ Z)"), n), "W \\/ (Y /\\ Z)");
  EXPECT_EQ(to_dnf_string(V.top(), n), "true");
  EXPECT_EQ(to_dnf_string(V.bot(), n), "false");
  EXPECT_EQ(to_cnf_string(V.parse("(B \\/ ~A) /\\ C"), n), "(~A \\/ B) /\\ C");
}

TEST(Pos, FormulaTextRoundTrip) {
  Vars V;
  auto n = space_names(V.s);
  for (const char* t : {"A /\\ (B \\/ C)", "(A /\\ ~B) \\/ (~A /\\ B)", "true", "false", "~A \\/ (B /\\ C)"}) {
    PosFormula f = V.parse(t);
    EXPECT_TRUE(equiv(V.parse(to_dnf_string(f, n)), f)) << t;
    EXPECT_TRUE(equiv(V.parse(to_cnf_string(f, n)), f)) << t;
  }
}

// Exhaustive truth-table comparison on random formula pairs.
TEST(PosProperty, TruthTableOracle) {
  auto rep = oracle_pos::check_pairs(300, 7);
  EXPECT_EQ(rep.mismatches, 0) << rep.first;
}

TEST(PosProperty, ProjectionAxiomsAndPrimeImplicants) {
  oracle_pos::Space sp;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    PosFormula f = oracle_pos::random_formula(sp.s, rng, oracle_pos::kVars);
    auto x = static_cast<VarId>(i % oracle_pos::kVars);
    EXPECT_TRUE(entails(f, exists_elim(f, x)));
    EXPECT_TRUE(entails(forall_elim(f, x), f));
    // The enumerated implicants cover f exactly, and each is prime.
    auto cubes = prime_implicants(f);
    PosFormula cover = PosFormula::bottom(sp.s);
    for (const auto& cube : cubes) {
      std::vector<PosClause> units;
      for (Lit l : cube) units.push_back({l});
      PosFormula c = PosFormula::from_clauses(sp.s, units);
      EXPECT_TRUE(entails(c, f));
      for (std::size_t k = 0; k < cube.size(); ++k) {
        std::vector<PosClause> fewer;
        for (std::size_t j = 0; j < cube.size(); ++j)
          if (j != k) fewer.push_back({cube[j]});
        EXPECT_FALSE(entails(PosFormula::from_clauses(sp.s, fewer), f));
      }
      cover = disj(cover, c);
    }
    EXPECT_EQ(table(cover), table(f));
  }
}

TEST(PosProperty, LatticeLaws) {
  oracle_pos::Space sp;
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    PosFormula a = oracle_pos::random_formula(sp.s, rng, 4), b = oracle_pos::random_formula(sp.s, rng, 4),
               c = oracle_pos::random_formula(sp.s, rng, 4);
    EXPECT_TRUE(equiv(disj(a, b), disj(b, a)));
    EXPECT_TRUE(equiv(conj(a, b), conj(b, a)));
    EXPECT_TRUE(equiv(disj(a, disj(b, c)), disj(disj(a, b), c)));
    EXPECT_TRUE(equiv(conj(a, conj(b, c)), conj(conj(a, b), c)));
    EXPECT_TRUE(equiv(disj(a, a), a));
    EXPECT_TRUE(equiv(conj(a, a), a));
    EXPECT_TRUE(equiv(disj(a, PosFormula::bottom(sp.s)), a));
    EXPECT_TRUE(conj(a, PosFormula::top(sp.s)) == a || equiv(conj(a, PosFormula::top(sp.s)), a));
  }
}

TEST(PosProperty, PositivityPreserved) {
  oracle_pos::Space sp;
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 150; ++i) {
    PosFormula a = oracle_pos::random_formula(sp.s, rng, 5), b = oracle_pos::random_formula(sp.s, rng, 5);
    if (!a.is_positive() || !b.is_positive()) continue;
    ++checked;
    EXPECT_TRUE(conj(a, b).is_positive());
    EXPECT_TRUE(disj(a, b).is_positive());
    EXPECT_TRUE(exists_elim(a, 0).is_positive());
    EXPECT_TRUE(rename(a, {{0, 5}, {5, 0}}).is_positive());
  }
  EXPECT_GT(checked, 50);
}

TEST(PosProperty, RenameRoundTrip) {
  oracle_pos::Space sp;
  std::mt19937_64 rng(3);
  std::map<VarId, VarId> perm{{0, 3}, {1, 4}, {2, 5}, {3, 0}, {4, 1}, {5, 2}};
  for (int i = 0; i < 100; ++i) {
    PosFormula f = oracle_pos::random_formula(sp.s, rng, 6);
    EXPECT_TRUE(equiv(rename(rename(f, perm), perm), f));
  }
}
