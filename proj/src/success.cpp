#include "redalert/success.hpp"

#include <chrono>
#include <cstdlib>

#include "redalert/builtins.hpp"
#include "redalert/errors.hpp"

namespace redalert {

int iteration_limit_from_env(int fallback) {
  const char* v = std::getenv("REDALERT_ITER_LIMIT");
  if (v == nullptr) return fallback;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  return (end != v && *end == '\0' && n > 0) ? static_cast<int>(n) : fallback;
}

std::string var_key(const PredKey& p, const std::string& var) {
  return p.str() + "." + var;
}

NameFn local_names(const SpacePtr& s) {
  return [s](VarId v) {
    const std::string& k = s->name(v);
    auto dot = k.rfind('.');
    return dot == std::string::npos ? k : k.substr(dot + 1);
  };
}

std::vector<VarId> SuccessEnv::param_ids(const PredKey& p) const {
  std::vector<VarId> out;
  for (const auto& v : program->at(p).params()) out.push_back(id(p, v));
  return out;
}

VarId SuccessEnv::id(const PredKey& p, const std::string& var) const { return space->get(var_key(p, var)); }

std::vector<PredKey> SuccessEnv::widened() const {
  std::vector<PredKey> out;
  for (const auto& [k, s] : dk)
    if (s.is_top) out.push_back(k);
  return out;
}

namespace {

std::vector<VarId> ids_of(const PredKey& owner, const Term& t, const SuccessEnv& env) {
  std::vector<std::string> vs;
  collect_vars_ordered(t, vs);
  std::vector<VarId> out;
  for (const auto& v : vs) out.push_back(env.id(owner, v));
  return out;
}

PosFormula alpha_post(const PredKey& owner, const Term& l, const Term& r, const SuccessEnv& env) {
  ConstraintConj mgu = add_equation(ConstraintConj{}, l, r);
  if (mgu.is_false) return PosFormula::bottom(env.space);
  PosFormula f = PosFormula::top(env.space);
  for (const auto& [x, t] : mgu.eqs) f = conj(f, iff_conj(env.space, env.id(owner, x), ids_of(owner, t, env)));
  return f;
}

PosFormula alpha_builtin(const PredKey& owner, const Goal& g, const SuccessEnv& env) {
  const BuiltinInfo* info = find_builtin(g.pred);
  if (info == nullptr) throw AnalysisError("success", "unknown builtin " + g.pred.str());
  if (info->unification) return alpha_post(owner, g.args[0], g.args[1], env);
  std::vector<VarId> ground;
  for (auto i : info->grounded)
    for (VarId v : ids_of(owner, g.args[i], env)) ground.push_back(v);
  PosFormula f = PosFormula::conj_of(env.space, ground);
  if (info->args_iff) {
    auto a = ids_of(owner, g.args[0], env), b = ids_of(owner, g.args[1], env);
    std::vector<PosClause> cs;
    auto side = [&cs](const std::vector<VarId>& from, const std::vector<VarId>& to) {
      for (VarId t : to) {
        PosClause c{pos_lit(t)};
        for (VarId s : from) c.push_back(neg_lit(s));
        cs.push_back(c);
      }
    };
    side(a, b);
    side(b, a);
    f = conj(f, PosFormula::from_clauses(env.space, cs));
  }
  return f;
}

PosFormula alpha_call(const PredKey& owner, const Goal& g, const SuccessEnv& env) {
  const PosFormula& callee = env.pos.at(g.pred);
  if (callee.is_bottom()) return callee;
  std::vector<VarId> params = env.param_ids(g.pred), zs;
  std::map<VarId, VarId> to_z;
  for (std::size_t i = 0; i < params.size(); ++i) {
    zs.push_back(env.space->get("$z#" + std::to_string(i)));
    to_z[params[i]] = zs.back();
  }
  PosFormula f = rename(callee, to_z);
  for (std::size_t i = 0; i < zs.size(); ++i) f = conj(f, iff_conj(env.space, zs[i], ids_of(owner, g.args[i], env)));
  return exists_elim(f, zs);
}

}  // namespace

PosFormula sg_pos(const PredKey& owner, const Goal& g, const SuccessEnv& env) {
  switch (g.kind) {
    case Goal::Kind::True:
    case Goal::Kind::Cut:
      return PosFormula::top(env.space);
    case Goal::Kind::Fail:
      return PosFormula::bottom(env.space);
    case Goal::Kind::Post:
      return alpha_post(owner, g.lhs, g.rhs, env);
    case Goal::Kind::Builtin:
      return alpha_builtin(owner, g, env);
    case Goal::Kind::Call:
      return alpha_call(owner, g, env);
    case Goal::Kind::Conj: {
      PosFormula f = PosFormula::top(env.space);
      for (const auto& part : g.parts) {
        f = conj(f, sg_pos(owner, part, env));
        if (f.is_bottom()) break;
      }
      return f;
    }
    case Goal::Kind::Disj:
      return disj(sg_pos(owner, g.parts[0], env), sg_pos(owner, g.parts[1], env));
  }
  return PosFormula::top(env.space);
}

PosFormula sh_pos(const NormalPredicate& p, const SuccessEnv& env) {
  PosFormula f = disj(disj(sg_pos(p.key, p.g1, env), conj(sg_pos(p.key, p.g2, env), sg_pos(p.key, p.g3, env))),
                      sg_pos(p.key, p.g4, env));
  return exists_except(f, env.param_ids(p.key));
}

namespace {

/// Extends every element of `s` by the success of `g`; the result is scoped to
/// `out`. The scope of `s` must cover vars(g) and `out`.
DepthKSet step_dk(const DepthKSet& s, const Goal& g, const VarSet& out, const SuccessEnv& env, FreshNames& fresh) {
  if (s.is_top) return DepthKSet::top(out, s.k, s.cap);
  auto each = [&](auto&& extend) {
    DepthKSet r = DepthKSet::empty(out, s.k, s.cap);
    for (const auto& e : s.elems) {
      extend(e, r);
      if (r.is_top) break;
    }
    return r;
  };
  switch (g.kind) {
    case Goal::Kind::True:
    case Goal::Kind::Cut:
      return reproject(s, out);
    case Goal::Kind::Fail:
      return DepthKSet::empty(out, s.k, s.cap);
    case Goal::Kind::Post:
      return each([&](const ConstraintConj& e, DepthKSet& r) {
        r.insert(truncate_all(add_equation(e, g.lhs, g.rhs), s.k, fresh));
      });
    case Goal::Kind::Builtin: {
      const BuiltinInfo* info = find_builtin(g.pred);
      if (info == nullptr || !(info->args_iff || info->unification)) return reproject(s, out);
      // Success of == or = implies the arguments unify.
      return each([&](const ConstraintConj& e, DepthKSet& r) {
        r.insert(truncate_all(add_equation(e, g.args[0], g.args[1]), s.k, fresh));
      });
    }
    case Goal::Kind::Call: {
      const DepthKSet& callee = env.dk.at(g.pred);
      // A widened callee carries no information: the call adds no equations.
      if (callee.is_top) return reproject(s, out);
      std::vector<std::string> params = env.program->at(g.pred).params();
      return each([&](const ConstraintConj& e, DepthKSet& r) {
        for (const auto& c : callee.elems) {
          // Callee variables, parameters included, are unrelated to the caller's.
          std::map<std::string, std::string> apart;
          VarSet vs(callee.scope);
          for (const auto& [v, t] : c.eqs) collect_vars(t, vs);
          for (const auto& n : vs) apart[n] = fresh.next();
          ConstraintConj x = e;
          for (std::size_t i = 0; i < params.size() && !x.is_false; ++i)
            x = add_equation(std::move(x), g.args[i], rename_vars(resolve(c, params[i]), apart));
          r.insert(truncate_all(x, s.k, fresh));
          if (r.is_top) return;
        }
      });
    }
    case Goal::Kind::Conj: {
      // Variables no later conjunct mentions are projected away as soon as possible.
      std::vector<VarSet> later(g.parts.size() + 1, out);
      for (std::size_t i = g.parts.size(); i-- > 0;) {
        later[i] = later[i + 1];
        collect_vars(g.parts[i], later[i]);
      }
      DepthKSet cur = s;
      for (std::size_t i = 0; i < g.parts.size(); ++i) {
        cur = step_dk(cur, g.parts[i], later[i + 1], env, fresh);
        if (cur.is_top || cur.elems.empty()) return reproject(cur, out);
      }
      return reproject(cur, out);
    }
    case Goal::Kind::Disj:
      return union_dk(step_dk(s, g.parts[0], out, env, fresh), step_dk(s, g.parts[1], out, env, fresh));
  }
  return reproject(s, out);
}

}  // namespace

DepthKSet sg_dk(const Goal& g, const VarSet& scope, const SuccessEnv& env, FreshNames& fresh) {
  VarSet in = scope;
  collect_vars(g, in);
  return step_dk(DepthKSet::truth(in, env.opts.depth_k, env.opts.dk_cap), g, scope, env, fresh);
}

DepthKSet sh_dk(const NormalPredicate& p, const SuccessEnv& env, FreshNames& fresh) {
  auto ps = p.params();
  VarSet params(ps.begin(), ps.end());
  return union_dk(union_dk(sg_dk(p.g1, params, env, fresh), sg_dk(Goal::conj({p.g2, p.g3}), params, env, fresh)),
                  sg_dk(p.g4, params, env, fresh));
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Source order grouped by ascending stratum.
std::vector<PredKey> evaluation_order(const NormalProgram& np) {
  std::vector<PredKey> out;
  for (std::size_t s = 1; s <= np.strata.size(); ++s)
    for (const auto& k : np.order)
      if (np.stratum_of.at(k) == static_cast<int>(s)) out.push_back(k);
  return out;
}

[[noreturn]] void limit_exceeded(const char* what, int limit, const std::vector<PredKey>& changing) {
  std::string names;
  for (const auto& k : changing) names += (names.empty() ? "" : ", ") + k.str();
  throw AnalysisError("success", std::string(what) + " fixpoint exceeded " + std::to_string(limit) +
                                     " iterations; still changing: " + names);
}

}  // namespace

void lfp_pos(SuccessEnv& env) {
  auto t0 = Clock::now();
  const NormalProgram& np = *env.program;
  env.pos.clear();
  for (const auto& k : np.order) env.pos.emplace(k, PosFormula::bottom(env.space));
  auto order = evaluation_order(np);
  env.pos_iterations = 0;
  while (true) {
    std::vector<PredKey> changed;
    for (const auto& k : order) {
      PosFormula& old = env.pos.at(k);
      PosFormula next = disj(old, sh_pos(np.at(k), env));
      if (!equiv(next, old)) {
        changed.push_back(k);
        old = next;
      }
    }
    if (changed.empty()) break;
    if (++env.pos_iterations > env.opts.iteration_limit) limit_exceeded("groundness", env.opts.iteration_limit, changed);
  }
  env.pos_ms = ms_since(t0);
}

void lfp_dk(SuccessEnv& env) {
  auto t0 = Clock::now();
  const NormalProgram& np = *env.program;
  env.dk.clear();
  for (const auto& k : np.order) {
    auto ps = np.at(k).params();
    env.dk.emplace(k, DepthKSet::empty(VarSet(ps.begin(), ps.end()), env.opts.depth_k, env.opts.dk_cap));
  }
  auto order = evaluation_order(np);
  FreshNames fresh;
  env.dk_iterations = 0;
  while (true) {
    std::vector<PredKey> changed;
    for (const auto& k : order) {
      DepthKSet& old = env.dk.at(k);
      DepthKSet next = union_dk(old, sh_dk(np.at(k), env, fresh));
      if (!(next == old)) {
        changed.push_back(k);
        old = std::move(next);
      }
    }
    if (changed.empty()) break;
    if (++env.dk_iterations > env.opts.iteration_limit) limit_exceeded("depth-k", env.opts.iteration_limit, changed);
  }
  env.dk_ms = ms_since(t0);
}

SuccessEnv lfp_success(const NormalProgram& np, const SpacePtr& space, const SuccessOptions& opts) {
  SuccessEnv env;
  env.space = space;
  env.program = &np;
  env.opts = opts;
  lfp_pos(env);
  if (opts.compute_dk) lfp_dk(env);
  return env;
}

std::string dump_success(const SuccessEnv& env) {
  std::string out;
  auto names = local_names(env.space);
  for (const auto& k : env.program->order) {
    out += k.str() + ": pos = " + to_dnf_string(env.pos.at(k), names);
    auto it = env.dk.find(k);
    if (it != env.dk.end()) out += "; dk = " + to_string(it->second);
    out += "\n";
  }
  return out;
}

}  // namespace redalert
