#pragma once

#include <map>
#include <string>
#include <vector>

#include "redalert/depthk.hpp"
#include "redalert/normalizer.hpp"
#include "redalert/posdom.hpp"

namespace redalert {

struct SuccessOptions {
  int depth_k = 3;
  std::size_t dk_cap = 64;
  int iteration_limit = 1000;
  bool compute_dk = true;
};

/// Iteration limit from REDALERT_ITER_LIMIT when set to a positive integer.
int iteration_limit_from_env(int fallback);

/// Boolean variable key for a variable of a given predicate: "name/arity.Var".
std::string var_key(const PredKey& p, const std::string& var);
/// Renders a space variable by its source variable name (the part after the last '.').
NameFn local_names(const SpacePtr& s);

/// Least abstract success semantics. Pos entries range over each predicate's
/// parameter variables; depth-k entries are scoped to the parameter names.
struct SuccessEnv {
  SpacePtr space;
  const NormalProgram* program = nullptr;
  SuccessOptions opts;
  std::map<PredKey, PosFormula> pos;
  std::map<PredKey, DepthKSet> dk;
  int pos_iterations = 0;
  int dk_iterations = 0;
  double pos_ms = 0;
  double dk_ms = 0;

  std::vector<VarId> param_ids(const PredKey& p) const;
  VarId id(const PredKey& p, const std::string& var) const;
  /// Predicates whose depth-k entry widened to top.
  std::vector<PredKey> widened() const;
};

/// Abstract success of a cut-free goal inside predicate `owner`, over the
/// owner's variables.
PosFormula sg_pos(const PredKey& owner, const Goal& g, const SuccessEnv& env);
PosFormula sh_pos(const NormalPredicate& p, const SuccessEnv& env);

/// Depth-k success of a goal, scoped to `scope` (usually all owner variables).
DepthKSet sg_dk(const Goal& g, const VarSet& scope, const SuccessEnv& env, FreshNames& fresh);
DepthKSet sh_dk(const NormalPredicate& p, const SuccessEnv& env, FreshNames& fresh);

/// Pos fixpoint only.
void lfp_pos(SuccessEnv& env);
/// Depth-k fixpoint only.
void lfp_dk(SuccessEnv& env);
/// Both fixpoints from the bottom environment.
SuccessEnv lfp_success(const NormalProgram& np, const SpacePtr& space, const SuccessOptions& opts = {});

std::string dump_success(const SuccessEnv& env);

}  // namespace redalert
