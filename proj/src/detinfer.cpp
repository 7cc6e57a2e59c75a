#include "redalert/detinfer.hpp"

#include <algorithm>
#include <chrono>

#include "redalert/errors.hpp"

namespace redalert {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<VarId> ids_of(const PredKey& owner, const Term& t, const SuccessEnv& senv) {
  std::vector<std::string> vs;
  collect_vars_ordered(t, vs);
  std::vector<VarId> out;
  for (const auto& v : vs) out.push_back(senv.id(owner, v));
  return out;
}

PosFormula dg_call(const PredKey& owner, const Goal& g, const DetEnv& env, std::set<PredKey>* reads) {
  auto it = env.cond.find(g.pred);
  if (it == env.cond.end()) throw AnalysisError("determinacy", "unknown predicate " + g.pred.str());
  if (reads != nullptr) reads->insert(g.pred);
  const PosFormula& callee = it->second;
  if (callee.is_top() || callee.is_bottom()) return callee;
  const SpacePtr& s = env.space();
  std::vector<VarId> params = env.senv->param_ids(g.pred), zs;
  std::map<VarId, VarId> to_z;
  for (std::size_t i = 0; i < params.size(); ++i) {
    zs.push_back(s->get("$d#" + std::to_string(i)));
    to_z[params[i]] = zs.back();
  }
  PosFormula link = PosFormula::top(s);
  for (std::size_t i = 0; i < zs.size(); ++i) link = conj(link, iff_conj(s, zs[i], ids_of(owner, g.args[i], *env.senv)));
  return forall_elim(implies_fn(link, rename(callee, to_z)), zs);
}

}  // namespace

PosFormula dg(const PredKey& owner, const Goal& g, const DetEnv& env, std::set<PredKey>* reads) {
  const SpacePtr& s = env.space();
  switch (g.kind) {
    case Goal::Kind::True:
    case Goal::Kind::Fail:
    case Goal::Kind::Post:
    case Goal::Kind::Builtin:
      return PosFormula::top(s);
    case Goal::Kind::Call:
      return dg_call(owner, g, env, reads);
    case Goal::Kind::Conj: {
      // Each conjunct must be determinate whenever all the others succeed.
      std::vector<PosFormula> succ, det;
      for (const auto& part : g.parts) {
        succ.push_back(sg_pos(owner, part, *env.senv));
        det.push_back(dg(owner, part, env, reads));
      }
      PosFormula out = PosFormula::top(s);
      for (std::size_t i = 0; i < g.parts.size(); ++i) {
        if (det[i].is_top()) continue;
        PosFormula others = PosFormula::top(s);
        for (std::size_t j = 0; j < g.parts.size(); ++j)
          if (j != i) others = conj(others, succ[j]);
        out = conj(out, implies_fn(others, det[i]));
      }
      return out;
    }
    case Goal::Kind::Cut:
    case Goal::Kind::Disj:
      throw UnsupportedError(g.kind == Goal::Kind::Cut ? "!" : ";", "determinacy goal");
  }
  return PosFormula::top(s);
}

PosFormula dh(const NormalPredicate& p, const DetEnv& env, std::set<PredKey>* reads) {
  PosFormula f = conj(env.f1.at(p.key), env.f2.at(p.key));
  if (f.is_bottom()) return f;
  f = conj(f, dg(p.key, p.g1, env, reads));
  PosFormula d3 = dg(p.key, p.g3, env, reads);
  if (!d3.is_top()) f = conj(f, implies_fn(sg_pos(p.key, p.g2, *env.senv), d3));
  f = conj(f, dg(p.key, p.g4, env, reads));
  return to_pos_bottom(forall_except(f, env.senv->param_ids(p.key)));
}

void compute_mux(DetEnv& env) {
  auto t0 = Clock::now();
  const SuccessEnv& senv = *env.senv;
  FreshNames fresh;
  for (const auto& k : env.program().order) {
    const NormalPredicate& p = env.program().at(k);
    auto params = p.params();
    VarSet pset(params.begin(), params.end());
    auto on_params = [&](const Goal& g) { return sg_dk(g, pset, senv, fresh); };
    DepthKSet s1 = on_params(p.g1);
    std::vector<VarId> ids = senv.param_ids(k);
    env.f1.insert_or_assign(k, abstract_mux(s1, on_params(p.g4), params, ids, env.space(), env.opts.max_subset));
    env.f2.insert_or_assign(
        k, abstract_mux(s1, on_params(Goal::conj({p.g2, p.g3})), params, ids, env.space(), env.opts.max_subset));
  }
  env.mux_ms = ms_since(t0);
}

DetEnv gfp_det(const SuccessEnv& senv, const DetOptions& opts) {
  DetEnv env;
  env.senv = &senv;
  env.opts = opts;
  compute_mux(env);
  auto t0 = Clock::now();
  const NormalProgram& np = env.program();
  for (const auto& k : np.order) env.cond.emplace(k, PosFormula::top(env.space()));
  for (const auto& stratum : np.strata) {
    std::vector<PredKey> members;
    for (const auto& k : np.order)
      if (std::find(stratum.begin(), stratum.end(), k) != stratum.end()) members.push_back(k);
    while (true) {
      ++env.iterations;
      std::vector<PredKey> changed;
      std::map<PredKey, PosFormula> pending;
      for (const auto& k : members) {
        std::set<PredKey> reads;
        PosFormula next = dh(np.at(k), env, &reads);
        env.reads[k].insert(reads.begin(), reads.end());
        const PosFormula& old = env.cond.at(k);
        if (next == old || equiv(next, old)) continue;
        if (!entails(next, old)) env.descent_violations.push_back(k.str());
        changed.push_back(k);
        if (opts.jacobi)
          pending.insert_or_assign(k, next);
        else
          env.cond.insert_or_assign(k, next);
      }
      for (auto& [k, f] : pending) env.cond.insert_or_assign(k, f);
      if (changed.empty()) break;
      if (env.iterations > opts.iteration_limit) {
        std::string names;
        for (const auto& k : changed) names += (names.empty() ? "" : ", ") + k.str();
        throw AnalysisError("determinacy", "fixpoint exceeded " + std::to_string(opts.iteration_limit) +
                                               " iterations; still changing: " + names);
      }
    }
  }
  env.gfp_ms = ms_since(t0);
  return env;
}

PosFormula goal_condition(const Goal& goal, const DetEnv& env) {
  std::vector<PredKey> calls;
  collect_calls(goal, calls);
  for (const auto& c : calls)
    if (!env.cond.count(c)) throw AnalysisError("determinacy", "unknown predicate " + c.str());
  return to_pos_bottom(dg(kQueryOwner, goal, env));
}

}  // namespace redalert
