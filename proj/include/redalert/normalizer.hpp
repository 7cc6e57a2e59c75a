#pragma once

#include <map>
#include <string>
#include <vector>

#include "redalert/program.hpp"

namespace redalert {

/// p(ȳ) :- G1 ; (G2, !, G3) ; G4 with cut-free, disjunction-free G1..G4.
struct NormalPredicate {
  PredKey key;
  Term head;  // distinct variables ȳ
  Goal g1 = Goal::fail();
  Goal g2 = Goal::fail();
  Goal g3 = Goal::truth();
  Goal g4 = Goal::fail();
  int aux_count = 0;  // auxiliaries minted while normalizing this predicate
  bool aux = false;

  std::vector<std::string> params() const;
  /// Variables of the whole definition, head first.
  std::vector<std::string> all_vars() const;
  bool has_cut() const { return !g2.is_fail(); }
};

struct NormalProgram {
  std::vector<PredKey> order;  // source order, auxiliaries after their minting order
  std::map<PredKey, NormalPredicate> preds;
  std::vector<std::vector<PredKey>> strata;  // lowest first
  std::map<PredKey, int> stratum_of;         // 1-based
  int original_count = 0;
  int new_count = 0;
  std::vector<std::string> warnings;

  const NormalPredicate& at(const PredKey& k) const;
};

struct NormalizeOptions {
  bool relax_cut = false;
};

/// Applies the cut-normal-form table to one predicate. Auxiliaries it needs are
/// normalized recursively and appended to `aux_out`.
NormalPredicate normalize_predicate(const std::vector<Clause>& clauses, AuxNamer& namer,
                                    std::vector<NormalPredicate>& aux_out);

/// Stratum assignment for the strict (G2) and weak (G1, G3, G4) call graph.
/// Throws NonStratifiedError with a cycle through a strict edge when none exists.
void stratify(NormalProgram& np);

NormalProgram normalize_program(const Program& p, const NormalizeOptions& opts = {});

/// The single-clause rendering p(ȳ) :- G1 ; (G2, !, G3) ; G4 of every predicate.
Program to_program(const NormalProgram& np);
std::string dump_normal_form(const NormalProgram& np);

}  // namespace redalert
