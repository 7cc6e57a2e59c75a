#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "redalert/success.hpp"

namespace redalert {

struct DetOptions {
  bool jacobi = false;  // defer in-pass updates to the end of each pass
  int iteration_limit = 1000;
  std::size_t max_subset = 4;
};

/// Determinacy conditions (the greatest fixpoint) plus the mux components and
/// the predicates each condition read.
struct DetEnv {
  const SuccessEnv* senv = nullptr;
  DetOptions opts;
  std::map<PredKey, PosFormula> cond;
  std::map<PredKey, PosFormula> f1, f2;
  std::map<PredKey, std::set<PredKey>> reads;
  /// Predicates whose entry failed to entail its previous value.
  std::vector<std::string> descent_violations;
  int iterations = 0;
  double mux_ms = 0;
  double gfp_ms = 0;

  const SpacePtr& space() const { return senv->space; }
  const NormalProgram& program() const { return *senv->program; }
};

/// Abstract determinacy of a cut-free goal of `owner`. Calls record the
/// callee in `reads` when given.
PosFormula dg(const PredKey& owner, const Goal& g, const DetEnv& env, std::set<PredKey>* reads = nullptr);
/// One application of the predicate transformer; needs f1/f2 already computed.
PosFormula dh(const NormalPredicate& p, const DetEnv& env, std::set<PredKey>* reads = nullptr);

/// Mutual-exclusion components for every predicate.
void compute_mux(DetEnv& env);
DetEnv gfp_det(const SuccessEnv& senv, const DetOptions& opts = {});

/// Variable keys of query goals use this owner.
inline const PredKey kQueryOwner{"?-", 0};
/// Condition for a query goal at the fixpoint, over the goal's variables.
PosFormula goal_condition(const Goal& goal, const DetEnv& env);

}  // namespace redalert
