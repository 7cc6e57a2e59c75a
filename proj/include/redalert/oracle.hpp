#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redalert/posdom.hpp"
#include "redalert/program.hpp"

namespace redalert {

struct Budget {
  long max_answers = 16;
  int max_depth = 500;
  long max_steps = 10000;
};

/// One computed answer: each query variable (first-occurrence order) with its value.
using Answer = std::vector<std::pair<std::string, Term>>;

struct AnswerSeq {
  std::vector<Answer> answers;
  bool exhausted = true;  // false when a budget stopped the search
  bool error = false;     // an instantiation or type error ended the run
  std::string error_message;
};

/// Depth-first SLD resolution with cut, occurs check and a small builtin set.
AnswerSeq solve(const Program& program, const Goal& query, const Budget& budget = {});

struct AnswerCount {
  long count = 0;
  bool exhausted = true;
  bool error = false;
};
AnswerCount count_answers(const Program& program, const Goal& query, const Budget& budget = {});

/// "X = t, Y = u" with unbound variables shown as _1, _2, ... per answer; "true" if empty.
std::string to_string(const Answer& a);

struct Verdict {
  int trials = 0;
  int passes = 0;
  int failures = 0;
  int inconclusive = 0;  // budget hit or error before a second answer
  bool vacuous = false;  // bottom condition: nothing to test
  std::string note;
  std::string witness;  // first failing query
  bool pass() const { return failures == 0; }
};

/// Runs `trials` random calls of `pred` whose groundness pattern entails
/// `condition` (over `arg_ids`, one per argument) and checks for at most one answer.
Verdict check_determinacy(const Program& program, const PredKey& pred, const PosFormula& condition,
                          const std::vector<VarId>& arg_ids, int trials, std::uint64_t seed,
                          const Budget& budget = {}, int max_term_depth = 4);

}  // namespace redalert
