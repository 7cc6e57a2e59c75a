#include <gtest/gtest.h>

#include "redalert/detinfer.hpp"
#include "redalert/errors.hpp"
#include "test_util.hpp"

using namespace redalert;

namespace {

struct Inferred {
  NormalProgram np;
  SpacePtr space = make_space();
  SuccessEnv senv;
  DetEnv denv;
  explicit Inferred(const Program& p, SuccessOptions so = {}, DetOptions dopts = {})
      : np(normalize_program(p)), senv(lfp_success(np, space, so)), denv(gfp_det(senv, dopts)) {}
  explicit Inferred(const std::string& src) : Inferred(parse_program(src)) {}

  PosFormula formula(const PredKey& owner, const std::string& text) const {
    return parse_formula(space, text, [&](const std::string& n) { return space->get(var_key(owner, n)); });
  }
  bool cond_is(const PredKey& p, const std::string& text) const { return equiv(denv.cond.at(p), formula(p, text)); }
  std::string cond(const PredKey& p) const { return to_dnf_string(denv.cond.at(p), local_names(space)); }
};

const PredKey kMember{"member", 2}, kMemberchk{"memberchk", 2}, kPt{"pt", 4};

}  // namespace

TEST(Det, PostIsDeterminate) {
  Inferred a("p(X) :- X = f(Y).\n");
  EXPECT_TRUE(dg({"p", 1}, Goal::post(Term::var("X"), Term::atom("a")), a.denv).is_top());
  EXPECT_TRUE(a.denv.cond.at({"p", 1}).is_top());
}

TEST(Det, MemberIsNeverDeterminate) {
  Inferred a(corpus::load_corpus("member.pl"));
  EXPECT_TRUE(a.denv.cond.at(kMember).is_bottom()) << a.cond(kMember);
  EXPECT_TRUE(a.denv.f1.at(kMember).is_bottom());
}

TEST(Det, MemberchkIsAlwaysDeterminate) {
  Inferred a(corpus::load_corpus("member.pl"));
  EXPECT_TRUE(a.denv.cond.at(kMemberchk).is_top()) << a.cond(kMemberchk);
  EXPECT_TRUE(a.denv.f1.at(kMemberchk).is_top());
  EXPECT_TRUE(a.denv.f2.at(kMemberchk).is_top());
}

TEST(Det, MemberchkDoesNotReadMember) {
  Inferred a(corpus::load_corpus("member.pl"));
  EXPECT_EQ(a.denv.reads.at(kMemberchk).count(kMember), 0u);
  // member itself stops at its false mux component.
  EXPECT_TRUE(a.denv.reads.at(kMember).empty());
  Inferred q(corpus::load_corpus("qsort.pl"));
  EXPECT_EQ(q.denv.reads.at({"qsort", 2}), (std::set<PredKey>{{"qsort", 2}, {"partition", 4}, {"append", 3}}));
}

TEST(Det, QueryGoals) {
  Inferred a(corpus::load_corpus("member.pl"));
  EXPECT_TRUE(goal_condition(parse_goal("member(A, S)"), a.denv).is_bottom());
  EXPECT_TRUE(goal_condition(parse_goal("memberchk(A, S)"), a.denv).is_top());
  EXPECT_TRUE(goal_condition(Goal::truth(), a.denv).is_top());
  EXPECT_THROW(goal_condition(parse_goal("nope(A)"), a.denv), AnalysisError);
}

TEST(Det, PartitionMuxComponents) {
  Inferred a(corpus::load_corpus("pt.pl"));
  // Clause 1 against clause 3 differs on the first and fourth argument,
  // clause 1 against clause 2 on the first and third.
  EXPECT_TRUE(equiv(a.denv.f1.at(kPt), a.formula(kPt, "A1 \\/ A4")));
  EXPECT_TRUE(equiv(a.denv.f2.at(kPt), a.formula(kPt, "A1 \\/ A3")));
}

TEST(Det, PartitionCondition) {
  Inferred a(corpus::load_corpus("pt.pl"));
  // Hand-derived: (w \/ z) /\ (w \/ y), the recursive call adding nothing.
  EXPECT_TRUE(a.cond_is(kPt, "A1 \\/ (A3 /\\ A4)")) << a.cond(kPt);
  // The published w /\ (y \/ z) is strictly stronger than this.
  PosFormula published = a.formula(kPt, "A1 /\\ (A3 \\/ A4)");
  EXPECT_TRUE(entails(published, a.denv.cond.at(kPt)));
  EXPECT_FALSE(entails(a.denv.cond.at(kPt), published));
  PosFormula q = goal_condition(parse_goal("pt(W, X, Y, Z)"), a.denv);
  EXPECT_TRUE(equiv(q, a.formula(kQueryOwner, "W \\/ (Y /\\ Z)")));
}

TEST(Det, RotationEitherArgumentSuffices) {
  Inferred a(corpus::load_corpus("rot.pl"));
  const PredKey rot{"rot", 2};
  EXPECT_TRUE(entails(a.formula(rot, "Xs"), a.denv.cond.at(rot))) << a.cond(rot);
  EXPECT_TRUE(entails(a.formula(rot, "Ys"), a.denv.cond.at(rot))) << a.cond(rot);
  EXPECT_TRUE(a.cond_is(rot, "Xs \\/ Ys"));
}

TEST(Det, FactsUseMuxOnly) {
  Inferred a("colour(red).\ncolour(green).\nsize(big, 1).\nsize(small, 2).\n");
  EXPECT_TRUE(a.cond_is({"colour", 1}, "A1")) << a.cond({"colour", 1});
  EXPECT_TRUE(a.cond_is({"size", 2}, "A1 \\/ A2")) << a.cond({"size", 2});
  EXPECT_EQ(a.denv.iterations, 2);
}

TEST(Det, ConjunctionWeakensByOtherSuccesses) {
  // q is determinate only with a ground argument; p grounds it first.
  Inferred a("q(a).\nq(b).\np(X) :- X = a, q(X).\nr(X) :- q(X).\n");
  EXPECT_TRUE(a.denv.cond.at({"p", 1}).is_top()) << a.cond({"p", 1});
  EXPECT_TRUE(a.cond_is({"r", 1}, "X")) << a.cond({"r", 1});
}

TEST(Det, CutBranchWeakensByGuardSuccess) {
  Inferred a("q(a).\nq(b).\np(X, Y) :- Y = a, !, q(X).\np(X, Y) :- Y = b.\n");
  // After the guard Y is ground, so X must be ground whenever Y is. A free Y
  // with an independent X does not entail this: the guard would bind Y.
  EXPECT_TRUE(a.cond_is({"p", 2}, "~Y \\/ X")) << a.cond({"p", 2});
  EXPECT_FALSE(entails(PosFormula::top(a.space), a.denv.cond.at({"p", 2})));
}

TEST(Det, CorpusDescentAndSchedules) {
  for (const char* name : corpus::kCorpus) {
    Program p = corpus::load_corpus(name);
    Inferred chaotic(p);
    EXPECT_TRUE(chaotic.denv.descent_violations.empty()) << name;
    DetOptions j;
    j.jacobi = true;
    NormalProgram np = normalize_program(p);
    SuccessEnv senv = lfp_success(np, chaotic.space);
    DetEnv jac = gfp_det(senv, j);
    for (const auto& k : chaotic.np.order) {
      const PosFormula& c = chaotic.denv.cond.at(k);
      EXPECT_TRUE(c.is_bottom() || c.is_positive()) << name << " " << k.str();
      // Both schedules share the space, so formulas compare directly.
      EXPECT_TRUE(equiv(c, jac.cond.at(k))) << name << " " << k.str();
      // The fixpoint is stable under one more application.
      EXPECT_TRUE(equiv(dh(chaotic.np.at(k), chaotic.denv), c)) << name << " " << k.str();
    }
  }
}

TEST(Det, WeakerSuccessInformationNeverWeakensConditions) {
  for (const char* name : corpus::kCorpus) {
    Program p = corpus::load_corpus(name);
    Inferred precise(p);
    SuccessOptions coarse;
    coarse.dk_cap = 1;
    NormalProgram np = normalize_program(p);
    SuccessEnv senv = lfp_success(np, precise.space, coarse);
    DetEnv d = gfp_det(senv);
    for (const auto& k : np.order)
      EXPECT_TRUE(entails(d.cond.at(k), precise.denv.cond.at(k))) << name << " " << k.str();
  }
}

TEST(Det, SmallerMuxSubsetsOnlyStrengthen) {
  Program p = corpus::load_corpus("tree.pl");
  Inferred full(p);
  NormalProgram np = normalize_program(p);
  SuccessEnv senv = lfp_success(np, full.space);
  DetOptions o;
  o.max_subset = 1;
  DetEnv d = gfp_det(senv, o);
  for (const auto& k : np.order) EXPECT_TRUE(entails(d.cond.at(k), full.denv.cond.at(k))) << k.str();
}

TEST(Det, IterationLimit) {
  NormalProgram np = normalize_program(corpus::load_corpus("member.pl"));
  SuccessEnv senv = lfp_success(np, make_space());
  DetOptions o;
  o.iteration_limit = 0;
  EXPECT_THROW(gfp_det(senv, o), AnalysisError);
}
