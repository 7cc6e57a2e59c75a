#include "redalert/builtins.hpp"

namespace redalert {

const std::map<PredKey, BuiltinInfo>& builtin_table() {
  static const std::map<PredKey, BuiltinInfo> table = [] {
    std::map<PredKey, BuiltinInfo> t;
    t[{"=", 2}] = BuiltinInfo{{}, false, true, true};
    t[{"==", 2}] = BuiltinInfo{{}, true, false, true};
    t[{"\\==", 2}] = BuiltinInfo{};
    t[{"\\=", 2}] = BuiltinInfo{};
    // Arithmetic succeeds only on ground numeric expressions.
    for (const char* op : {"=<", "<", ">=", ">", "=:=", "=\\=", "is"}) t[{op, 2}] = BuiltinInfo{{0, 1}};
    for (const char* ty : {"atom", "atomic", "integer", "number"}) t[{ty, 1}] = BuiltinInfo{{0}};
    t[{"var", 1}] = BuiltinInfo{};
    t[{"nonvar", 1}] = BuiltinInfo{};
    t[{"functor", 3}] = BuiltinInfo{{1, 2}};
    return t;
  }();
  return table;
}

const BuiltinInfo* find_builtin(const PredKey& k) {
  const auto& t = builtin_table();
  auto it = t.find(k);
  return it == t.end() ? nullptr : &it->second;
}

}  // namespace redalert
