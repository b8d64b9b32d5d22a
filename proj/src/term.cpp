#include "sluice/term.hpp"

#include <cctype>
#include <sstream>

namespace sluice {

TermPtr Term::var(int64_t id) {
  auto t = std::make_shared<Term>();
  t->kind_ = Kind::Var;
  t->ival_ = id;
  return t;
}

TermPtr Term::atom(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind_ = Kind::Atom;
  t->name_ = std::move(name);
  return t;
}

TermPtr Term::integer(int64_t value) {
  auto t = std::make_shared<Term>();
  t->kind_ = Kind::Int;
  t->ival_ = value;
  return t;
}

TermPtr Term::compound(std::string functor, std::vector<TermPtr> args) {
  if (args.empty()) return atom(std::move(functor));
  auto t = std::make_shared<Term>();
  t->kind_ = Kind::Compound;
  t->name_ = std::move(functor);
  t->args_ = std::move(args);
  return t;
}

TermPtr deref(TermPtr t, const Subst& s) {
  while (t->is_var()) {
    auto it = s.find(t->var_id());
    if (it == s.end()) break;
    t = it->second;
  }
  return t;
}

namespace {

bool occurs(int64_t var, const TermPtr& t, const Subst& s) {
  TermPtr d = deref(t, s);
  if (d->is_var()) return d->var_id() == var;
  for (const auto& a : d->args())
    if (occurs(var, a, s)) return true;
  return false;
}

bool unify_into(const TermPtr& a, const TermPtr& b, Subst& s,
                bool occurs_check) {
  TermPtr x = deref(a, s);
  TermPtr y = deref(b, s);
  if (x->is_var() && y->is_var() && x->var_id() == y->var_id()) return true;
  if (x->is_var()) {
    if (occurs_check && occurs(x->var_id(), y, s)) return false;
    s[x->var_id()] = y;
    return true;
  }
  if (y->is_var()) {
    if (occurs_check && occurs(y->var_id(), x, s)) return false;
    s[y->var_id()] = x;
    return true;
  }
  if (x->kind() != y->kind()) return false;
  switch (x->kind()) {
    case Term::Kind::Atom:
      return x->name() == y->name();
    case Term::Kind::Int:
      return x->value() == y->value();
    case Term::Kind::Compound: {
      if (x->name() != y->name() || x->arity() != y->arity()) return false;
      for (size_t i = 0; i < x->arity(); ++i)
        if (!unify_into(x->args()[i], y->args()[i], s, occurs_check))
          return false;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

std::optional<Subst> unify(const TermPtr& a, const TermPtr& b, Subst s,
                           bool occurs_check) {
  if (unify_into(a, b, s, occurs_check)) return s;
  return std::nullopt;
}

TermPtr resolve(const TermPtr& t, const Subst& s) {
  TermPtr d = deref(t, s);
  if (d->kind() != Term::Kind::Compound) return d;
  std::vector<TermPtr> args;
  args.reserve(d->arity());
  bool changed = false;
  for (const auto& a : d->args()) {
    TermPtr r = resolve(a, s);
    changed = changed || r.get() != a.get();
    args.push_back(std::move(r));
  }
  if (!changed) return d;
  return Term::compound(d->name(), std::move(args));
}

TermPtr rename_apart(const TermPtr& t, int64_t& counter,
                     std::unordered_map<int64_t, int64_t>& mapping) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      auto it = mapping.find(t->var_id());
      if (it == mapping.end())
        it = mapping.emplace(t->var_id(), counter++).first;
      return Term::var(it->second);
    }
    case Term::Kind::Compound: {
      std::vector<TermPtr> args;
      args.reserve(t->arity());
      for (const auto& a : t->args())
        args.push_back(rename_apart(a, counter, mapping));
      return Term::compound(t->name(), std::move(args));
    }
    default:
      return t;
  }
}

bool structurally_equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Term::Kind::Var:
      return a->var_id() == b->var_id();
    case Term::Kind::Atom:
      return a->name() == b->name();
    case Term::Kind::Int:
      return a->value() == b->value();
    case Term::Kind::Compound: {
      if (a->name() != b->name() || a->arity() != b->arity()) return false;
      for (size_t i = 0; i < a->arity(); ++i)
        if (!structurally_equal(a->args()[i], b->args()[i])) return false;
      return true;
    }
  }
  return false;
}

bool is_ground(const TermPtr& t) {
  if (t->is_var()) return false;
  for (const auto& a : t->args())
    if (!is_ground(a)) return false;
  return true;
}

namespace {

// Splits a proper/improper list chain. Returns true for a proper list.
bool list_elements(const TermPtr& t, std::vector<TermPtr>& elems,
                   TermPtr& tail) {
  TermPtr cur = t;
  while (cur->kind() == Term::Kind::Compound && cur->name() == "|" &&
         cur->arity() == 2) {
    elems.push_back(cur->args()[0]);
    cur = cur->args()[1];
  }
  tail = cur;
  return cur->kind() == Term::Kind::Atom && cur->name() == "[]";
}

void print_term(const TermPtr& t, std::ostream& os,
                std::unordered_map<int64_t, int64_t>* renumber) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      int64_t id = t->var_id();
      if (renumber) {
        auto it = renumber->find(id);
        if (it == renumber->end())
          it = renumber->emplace(id, (int64_t)renumber->size()).first;
        id = it->second;
      }
      os << '_' << id;
      return;
    }
    case Term::Kind::Atom:
      os << t->name();
      return;
    case Term::Kind::Int:
      os << t->value();
      return;
    case Term::Kind::Compound: {
      if (t->name() == "|" && t->arity() == 2) {
        std::vector<TermPtr> elems;
        TermPtr tail;
        bool proper = list_elements(t, elems, tail);
        os << '[';
        for (size_t i = 0; i < elems.size(); ++i) {
          if (i) os << ',';
          print_term(elems[i], os, renumber);
        }
        if (!proper) {
          os << '|';
          print_term(tail, os, renumber);
        }
        os << ']';
        return;
      }
      os << t->name() << '(';
      for (size_t i = 0; i < t->arity(); ++i) {
        if (i) os << ',';
        print_term(t->args()[i], os, renumber);
      }
      os << ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const TermPtr& t) {
  std::ostringstream os;
  print_term(t, os, nullptr);
  return os.str();
}

std::string canonical(const TermPtr& t) {
  std::ostringstream os;
  std::unordered_map<int64_t, int64_t> renumber;
  print_term(t, os, &renumber);
  return os.str();
}

namespace {

void skip_ws(const std::string& s, size_t& pos) {
  while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
}

bool ident_char(char c) {
  return std::isalnum((unsigned char)c) || c == '_';
}

[[noreturn]] void fail_at(const std::string& text, size_t pos,
                          const std::string& what) {
  std::ostringstream os;
  os << what << " at offset " << pos << " in \"" << text << "\"";
  throw TermParseError(os.str());
}

}  // namespace

TermPtr TermReader::parse_list(const std::string& text, size_t& pos) {
  // '[' already consumed
  skip_ws(text, pos);
  if (pos < text.size() && text[pos] == ']') {
    ++pos;
    return Term::atom("[]");
  }
  std::vector<TermPtr> elems;
  TermPtr tail = Term::atom("[]");
  for (;;) {
    elems.push_back(parse(text, pos));
    skip_ws(text, pos);
    if (pos >= text.size()) fail_at(text, pos, "unterminated list");
    char c = text[pos];
    if (c == ',') {
      ++pos;
      continue;
    }
    if (c == '|') {
      ++pos;
      tail = parse(text, pos);
      skip_ws(text, pos);
      if (pos >= text.size() || text[pos] != ']')
        fail_at(text, pos, "expected ] after list tail");
      ++pos;
      break;
    }
    if (c == ']') {
      ++pos;
      break;
    }
    fail_at(text, pos, "expected , | or ] in list");
  }
  TermPtr out = tail;
  for (auto it = elems.rbegin(); it != elems.rend(); ++it)
    out = Term::compound("|", {*it, out});
  return out;
}

TermPtr TermReader::parse(const std::string& text, size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size()) fail_at(text, pos, "unexpected end of term");
  char c = text[pos];
  if (c == '[') {
    ++pos;
    return parse_list(text, pos);
  }
  if (c == '-' || std::isdigit((unsigned char)c)) {
    size_t start = pos;
    if (c == '-') ++pos;
    if (pos >= text.size() || !std::isdigit((unsigned char)text[pos]))
      fail_at(text, start, "expected digits");
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
    return Term::integer(std::stoll(text.substr(start, pos - start)));
  }
  if (!std::isalpha((unsigned char)c) && c != '_')
    fail_at(text, pos, "expected term");
  size_t start = pos;
  while (pos < text.size() && ident_char(text[pos])) ++pos;
  std::string name = text.substr(start, pos - start);
  bool is_variable = std::isupper((unsigned char)name[0]) || name[0] == '_';
  if (is_variable) {
    if (name == "_") return Term::var((*counter_)++);
    auto it = names_.find(name);
    if (it == names_.end())
      it = names_.emplace(name, (*counter_)++).first;
    return Term::var(it->second);
  }
  skip_ws(text, pos);
  if (pos < text.size() && text[pos] == '(') {
    ++pos;
    std::vector<TermPtr> args;
    for (;;) {
      args.push_back(parse(text, pos));
      skip_ws(text, pos);
      if (pos >= text.size()) fail_at(text, pos, "unterminated arguments");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      fail_at(text, pos, "expected , or ) in arguments");
    }
    return Term::compound(std::move(name), std::move(args));
  }
  return Term::atom(std::move(name));
}

TermPtr TermReader::parse_all(const std::string& text) {
  size_t pos = 0;
  TermPtr t = parse(text, pos);
  skip_ws(text, pos);
  if (pos != text.size()) fail_at(text, pos, "trailing input after term");
  return t;
}

TermPtr parse_term(const std::string& text) {
  int64_t counter = 0;
  TermReader reader(&counter);
  return reader.parse_all(text);
}

}  // namespace sluice
