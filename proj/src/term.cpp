#include "redalert/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace redalert {

Term Term::compound(std::string f, std::vector<Term> a) {
  if (a.empty()) return atom(std::move(f));
  return Term{Kind::Compound, std::move(f), 0, std::move(a)};
}

Term Term::cons(Term head, Term tail) {
  return compound(".", {std::move(head), std::move(tail)});
}

Term Term::list(const std::vector<Term>& elems, Term tail) {
  Term out = std::move(tail);
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) out = cons(*it, std::move(out));
  return out;
}

int compare(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
  if (a.value != b.value) return a.value < b.value ? -1 : 1;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = compare(a.args[i], b.args[i])) return c;
  return 0;
}

bool Term::operator<(const Term& o) const { return compare(*this, o) < 0; }

int depth(const Term& t) {
  if (!t.is_compound()) return 1;
  int d = 0;
  for (const auto& a : t.args) d = std::max(d, depth(a));
  return d + 1;
}

bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  return std::all_of(t.args.begin(), t.args.end(), [](const Term& a) { return is_ground(a); });
}

void collect_vars(const Term& t, VarSet& out) {
  if (t.is_var()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

void collect_vars_ordered(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars_ordered(a, out);
}

bool occurs(const std::string& v, const Term& t) {
  if (t.is_var()) return t.name == v;
  return std::any_of(t.args.begin(), t.args.end(), [&](const Term& a) { return occurs(v, a); });
}

Term apply(const Subst& s, const Term& t) {
  if (t.is_var()) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  if (!t.is_compound()) return t;
  Term out = t;
  for (auto& a : out.args) a = redalert::apply(s, a);
  return out;
}

Term rename_vars(const Term& t, const std::map<std::string, std::string>& m) {
  if (t.is_var()) {
    auto it = m.find(t.name);
    return it == m.end() ? t : Term::var(it->second);
  }
  if (!t.is_compound()) return t;
  Term out = t;
  for (auto& a : out.args) a = rename_vars(a, m);
  return out;
}

bool matches(const Term& general, const Term& specific, Subst& bindings) {
  if (general.is_var()) {
    auto it = bindings.find(general.name);
    if (it != bindings.end()) return it->second == specific;
    bindings.emplace(general.name, specific);
    return true;
  }
  if (general.kind != specific.kind) return false;
  switch (general.kind) {
    case Term::Kind::Atom: return general.name == specific.name;
    case Term::Kind::Int: return general.value == specific.value;
    case Term::Kind::Compound:
      if (general.name != specific.name || general.arity() != specific.arity()) return false;
      for (std::size_t i = 0; i < general.arity(); ++i)
        if (!matches(general.args[i], specific.args[i], bindings)) return false;
      return true;
    case Term::Kind::Var: break;
  }
  return false;
}

namespace {

bool is_symbol_char(char c) { return std::string_view("+-*/\\^<>=~:.?@#&$").find(c) != std::string_view::npos; }

// Infix operators rendered infix. Kept in sync with the parser's table.
int infix_priority(const std::string& f) {
  static const std::map<std::string, int> ops = {
      {":-", 1200}, {";", 1100}, {"->", 1050}, {",", 1000}, {"=", 700},  {"\\=", 700},
      {"==", 700},  {"\\==", 700}, {"=<", 700}, {"<", 700},   {">=", 700}, {">", 700},
      {"=:=", 700}, {"=\\=", 700}, {"is", 700}, {"+", 500},   {"-", 500},  {"*", 400},
      {"/", 400},   {"//", 400},   {"mod", 400}};
  auto it = ops.find(f);
  return it == ops.end() ? 0 : it->second;
}

void render(const Term& t, std::ostream& os, int max_prio);

void render_list(const Term& t, std::ostream& os) {
  os << '[';
  render(t.args[0], os, 999);
  const Term* rest = &t.args[1];
  while (rest->is_compound() && rest->name == "." && rest->arity() == 2) {
    os << ',';
    render(rest->args[0], os, 999);
    rest = &rest->args[1];
  }
  if (!(rest->is_atom() && rest->name == "[]")) {
    os << '|';
    render(*rest, os, 999);
  }
  os << ']';
}

void render(const Term& t, std::ostream& os, int max_prio) {
  switch (t.kind) {
    case Term::Kind::Var: os << t.name; return;
    case Term::Kind::Int:
      if (t.value < 0 && max_prio < 999) os << '(' << t.value << ')';
      else os << t.value;
      return;
    case Term::Kind::Atom: os << quote_atom(t.name); return;
    case Term::Kind::Compound: break;
  }
  if (t.name == "." && t.arity() == 2) {
    render_list(t, os);
    return;
  }
  if (t.name == "{}" && t.arity() == 1) {
    os << '{';
    render(t.args[0], os, 1200);
    os << '}';
    return;
  }
  int p = t.arity() == 2 ? infix_priority(t.name) : 0;
  if (p > 0) {
    bool paren = p > max_prio;
    if (paren) os << '(';
    // xfx/yfx operands take priority p-1 on the left; xfy on the right.
    bool right_assoc = t.name == "," || t.name == ";" || t.name == "->";
    bool left_assoc = p == 500 || p == 400;
    render(t.args[0], os, left_assoc ? p : p - 1);
    if (t.name == ",") os << ", ";
    else os << ' ' << t.name << ' ';
    render(t.args[1], os, right_assoc ? p : p - 1);
    if (paren) os << ')';
    return;
  }
  if (t.name == "-" && t.arity() == 1 && !t.args[0].is_int()) {
    bool paren = max_prio < 200;
    if (paren) os << '(';
    os << '-';
    render(t.args[0], os, 200);
    if (paren) os << ')';
    return;
  }
  os << quote_atom(t.name) << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    render(t.args[i], os, 999);
  }
  os << ')';
}

}  // namespace

std::string quote_atom(const std::string& a) {
  if (a == "[]" || a == "!" || a == ";" || a == "{}" || a == ",") return a == "," ? "','" : a;
  if (!a.empty() && std::islower(static_cast<unsigned char>(a[0])) &&
      std::all_of(a.begin(), a.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
    return a;
  if (!a.empty() && std::all_of(a.begin(), a.end(), is_symbol_char)) return a;
  std::string out = "'";
  for (char c : a) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  render(t, os, 999);
  return os.str();
}

}  // namespace redalert
