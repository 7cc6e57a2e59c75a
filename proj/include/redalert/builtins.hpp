#pragma once

#include <map>
#include <vector>

#include "redalert/term.hpp"

namespace redalert {

/// How a builtin's success constrains groundness of its arguments.
///   grounded    argument positions that are ground whenever the builtin succeeds
///   args_iff    success implies ground(arg1) <-> ground(arg2)
///   unification the builtin is =/2, which the front end turns into a Post
struct BuiltinInfo {
  std::vector<std::size_t> grounded;
  bool args_iff = false;
  bool unification = false;
  bool deterministic = true;
};

const std::map<PredKey, BuiltinInfo>& builtin_table();
const BuiltinInfo* find_builtin(const PredKey& k);
inline bool is_builtin(const PredKey& k) { return find_builtin(k) != nullptr; }

}  // namespace redalert
