#include "sluice/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sluice {

UpdatePtr UpdateExpr::segment(std::string name, UpdatePtr rest) {
  auto u = std::make_shared<UpdateExpr>();
  u->kind_ = Kind::Segment;
  u->name_ = std::move(name);
  u->children_.push_back(std::move(rest));
  return u;
}

UpdatePtr UpdateExpr::leaf(std::string value) {
  auto u = std::make_shared<UpdateExpr>();
  u->kind_ = Kind::Leaf;
  u->name_ = std::move(value);
  return u;
}

UpdatePtr UpdateExpr::op(char op, UpdatePtr inner) {
  if (op != '=' && op != '#' && op != '!')
    throw UpdateParseError(std::string("unknown update operator: ") + op);
  auto u = std::make_shared<UpdateExpr>();
  u->kind_ = Kind::Op;
  u->op_ = op;
  u->children_.push_back(std::move(inner));
  return u;
}

UpdatePtr UpdateExpr::seq(std::vector<UpdatePtr> items) {
  if (items.size() == 1) return items[0];
  auto u = std::make_shared<UpdateExpr>();
  u->kind_ = Kind::Seq;
  u->children_ = std::move(items);
  return u;
}

bool update_equal(const UpdatePtr& a, const UpdatePtr& b) {
  if (a->kind() != b->kind()) return false;
  if (a->name() != b->name() || a->op_char() != b->op_char()) return false;
  if (a->children().size() != b->children().size()) return false;
  for (size_t i = 0; i < a->children().size(); ++i)
    if (!update_equal(a->children()[i], b->children()[i])) return false;
  return true;
}

namespace {

struct UpdateParser {
  const std::string& text;
  size_t pos = 0;

  explicit UpdateParser(const std::string& t) : text(t) {}

  void ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) {
    std::ostringstream os;
    os << what << " at offset " << pos << " in update \"" << text << "\"";
    throw UpdateParseError(os.str());
  }

  bool name_char(char c) {
    return std::isalnum((unsigned char)c) || c == '_';
  }

  UpdatePtr parse_seq() {
    std::vector<UpdatePtr> items;
    items.push_back(parse_chain());
    ws();
    while (pos < text.size() && text[pos] == ';') {
      ++pos;
      items.push_back(parse_chain());
      ws();
    }
    return UpdateExpr::seq(std::move(items));
  }

  // name elements joined by '.'; the last element may be a value leaf, a
  // bracketed operator or a parenthesized sequence
  UpdatePtr parse_chain() {
    std::vector<std::string> segments;
    UpdatePtr tail;
    for (;;) {
      ws();
      if (pos >= text.size()) fail("unexpected end of update");
      char c = text[pos];
      if (c == '[') {
        ++pos;
        ws();
        if (pos >= text.size()) fail("unterminated operator bracket");
        char op = text[pos];
        ++pos;
        UpdatePtr inner = parse_seq();
        ws();
        if (pos >= text.size() || text[pos] != ']')
          fail("expected ] after operator expression");
        ++pos;
        tail = UpdateExpr::op(op, std::move(inner));
        break;
      }
      if (c == '(') {
        ++pos;
        UpdatePtr inner = parse_seq();
        ws();
        if (pos >= text.size() || text[pos] != ')')
          fail("expected ) after sequence");
        ++pos;
        tail = std::move(inner);
        break;
      }
      if (!name_char(c)) fail("expected slot name or value");
      size_t start = pos;
      while (pos < text.size() && name_char(text[pos])) ++pos;
      std::string word = text.substr(start, pos - start);
      ws();
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        segments.push_back(std::move(word));
        continue;
      }
      tail = UpdateExpr::leaf(std::move(word));
      break;
    }
    for (auto it = segments.rbegin(); it != segments.rend(); ++it)
      tail = UpdateExpr::segment(*it, std::move(tail));
    return tail;
  }
};

void print_node(const UpdatePtr& u, std::ostringstream& os, bool toplevel) {
  switch (u->kind()) {
    case UpdateExpr::Kind::Leaf:
      os << u->name();
      return;
    case UpdateExpr::Kind::Segment: {
      os << u->name() << '.';
      print_node(u->children()[0], os, false);
      return;
    }
    case UpdateExpr::Kind::Op: {
      os << '[' << u->op_char();
      print_node(u->children()[0], os, true);
      os << ']';
      return;
    }
    case UpdateExpr::Kind::Seq: {
      if (!toplevel) os << '(';
      for (size_t i = 0; i < u->children().size(); ++i) {
        if (i) os << ';';
        print_node(u->children()[i], os, false);
      }
      if (!toplevel) os << ')';
      return;
    }
  }
}

}  // namespace

UpdatePtr parse_update(const std::string& text) {
  std::string stripped;
  {
    size_t b = text.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return UpdateExpr::seq({});
    size_t e = text.find_last_not_of(" \t\r\n");
    stripped = text.substr(b, e - b + 1);
  }
  UpdateParser p(stripped);
  UpdatePtr u = p.parse_seq();
  p.ws();
  if (p.pos != stripped.size()) p.fail("trailing input after update");
  return u;
}

std::string print_update(const UpdatePtr& u) {
  std::ostringstream os;
  print_node(u, os, true);
  return os.str();
}

std::string to_string(const SemanticUnit& u) {
  return "UNIT " + u.function + " " + u.slot + " " + u.value;
}

const DomainConfig& DomainConfig::defaults() {
  static const DomainConfig dc = [] {
    DomainConfig d;
    d.drop_segments = {"travel", "user", "wants", "place", "at", "time"};
    d.towns = {"assen",  "amsterdam", "groningen", "leiden",
               "abcoude", "zwolle",   "den_haag",  "utrecht"};
    return d;
  }();
  return dc;
}

DomainConfig DomainConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open domain config: " + path);
  DomainConfig dc;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string kw, arg;
    if (!(ls >> kw) || kw[0] == '#') continue;
    if (!(ls >> arg)) {
      std::ostringstream os;
      os << "domain config line " << line_no << ": missing argument";
      throw std::runtime_error(os.str());
    }
    if (kw == "drop")
      dc.drop_segments.insert(arg);
    else if (kw == "town")
      dc.towns.insert(arg);
    else {
      std::ostringstream os;
      os << "domain config line " << line_no << ": unknown keyword " << kw;
      throw std::runtime_error(os.str());
    }
  }
  return dc;
}

namespace {

const char* function_of(char op) {
  switch (op) {
    case '#':
      return "denial";
    case '!':
      return "correction";
    default:
      return "assert";
  }
}

void collect_units(const UpdatePtr& u, const DomainConfig& dc,
                   std::vector<std::string>& path, const char* function,
                   std::vector<SemanticUnit>& out) {
  switch (u->kind()) {
    case UpdateExpr::Kind::Leaf: {
      // the reserved answer slot carries the yes/no function itself
      if (path.size() == 1 && path[0] == "answer" &&
          (u->name() == "yes" || u->name() == "no")) {
        out.push_back({u->name(), "answer", u->name()});
        return;
      }
      std::string slot;
      for (const auto& seg : path) {
        if (dc.drop_segments.count(seg)) continue;
        if (!slot.empty()) slot += '_';
        slot += seg;
      }
      if (slot.empty()) slot = "value";
      out.push_back({function, std::move(slot), u->name()});
      return;
    }
    case UpdateExpr::Kind::Segment:
      path.push_back(u->name());
      collect_units(u->children()[0], dc, path, function, out);
      path.pop_back();
      return;
    case UpdateExpr::Kind::Op:
      collect_units(u->children()[0], dc, path, function_of(u->op_char()),
                    out);
      return;
    case UpdateExpr::Kind::Seq:
      for (const auto& c : u->children())
        collect_units(c, dc, path, function, out);
      return;
  }
}

}  // namespace

std::vector<SemanticUnit> update_to_units(const UpdatePtr& u,
                                          const DomainConfig& dc) {
  std::vector<SemanticUnit> out;
  std::vector<std::string> path;
  collect_units(u, dc, path, "assert", out);
  return out;
}

namespace {

// the intermediate shape of one translated sem term
struct Fragment {
  enum class Kind { Update, BareLocative, Negation, Confirmation };
  Kind kind;
  UpdatePtr update;      // Update
  std::string town;      // BareLocative
  char op = 0;           // Negation: '!' for nee, '#' for niet
};

UpdatePtr town_path(const std::string& slot, const std::string& town) {
  return UpdateExpr::segment(
      slot, UpdateExpr::segment(
                "place", UpdateExpr::segment(
                             "town", UpdateExpr::leaf(town))));
}

UpdatePtr moment_path(const std::string& value) {
  return UpdateExpr::segment(
      "moment",
      UpdateExpr::segment(
          "at", UpdateExpr::segment(
                    "time", UpdateExpr::segment(
                                "clock_hour", UpdateExpr::leaf(value)))));
}

std::string leaf_text(const TermPtr& t) {
  if (t->kind() == Term::Kind::Atom) return t->name();
  if (t->kind() == Term::Kind::Int) {
    std::ostringstream os;
    os << t->value();
    return os.str();
  }
  return "";
}

// Linearizes one sem term into fragments in utterance order; unknown terms
// are reported in `skipped`.
void linearize(const TermPtr& sem, const DomainConfig& dc,
               std::vector<Fragment>& out, std::vector<std::string>& skipped) {
  switch (sem->kind()) {
    case Term::Kind::Atom: {
      const std::string& a = sem->name();
      if (dc.towns.count(a)) {
        out.push_back({Fragment::Kind::BareLocative, nullptr, a, 0});
        return;
      }
      if (a == "nee") {
        out.push_back({Fragment::Kind::Negation, nullptr, "", '!'});
        return;
      }
      if (a == "niet") {
        out.push_back({Fragment::Kind::Negation, nullptr, "", '#'});
        return;
      }
      if (a == "graag" || a == "ja") {
        out.push_back({Fragment::Kind::Confirmation, nullptr, "", 0});
        return;
      }
      if (a == "wens") return;  // verb semantics carry no slot content
      skipped.push_back("untranslatable term: " + a);
      return;
    }
    case Term::Kind::Compound: {
      const std::string& f = sem->name();
      if ((f == "naar" || f == "van" || f == "vanuit") && sem->arity() == 1) {
        std::string town = leaf_text(sem->args()[0]);
        if (town.empty()) {
          skipped.push_back("untranslatable term: " + to_string(sem));
          return;
        }
        const char* slot = f == "naar" ? "destination" : "origin";
        out.push_back(
            {Fragment::Kind::Update, town_path(slot, town), "", 0});
        return;
      }
      if (f == "om" && sem->arity() == 1) {
        linearize(sem->args()[0], dc, out, skipped);
        return;
      }
      if (f == "clock_hour" && sem->arity() == 1) {
        std::string v = leaf_text(sem->args()[0]);
        if (v.empty()) {
          skipped.push_back("untranslatable term: " + to_string(sem));
          return;
        }
        out.push_back({Fragment::Kind::Update, moment_path(v), "", 0});
        return;
      }
      if (f == "decl" && sem->arity() == 2) {
        // subject contributes nothing to the update
        linearize(sem->args()[1], dc, out, skipped);
        return;
      }
      if (f == "mod" && sem->arity() == 2) {
        // mod(Later, Earlier): the modifier follows in utterance order
        linearize(sem->args()[1], dc, out, skipped);
        linearize(sem->args()[0], dc, out, skipped);
        return;
      }
      skipped.push_back("untranslatable term: " + to_string(sem));
      return;
    }
    default:
      skipped.push_back("untranslatable term: " + to_string(sem));
      return;
  }
}

// Inserts an operator node below the first slot segment:
// destination.place.town.assen -> destination.[!place.town.assen]
UpdatePtr wrap_below_top(const UpdatePtr& u, char op) {
  if (u->kind() == UpdateExpr::Kind::Segment)
    return UpdateExpr::segment(u->name(),
                               UpdateExpr::op(op, u->children()[0]));
  return UpdateExpr::op(op, u);
}

}  // namespace

TranslationResult sems_to_update(const std::vector<TermPtr>& sems,
                                 const DomainConfig& dc) {
  TranslationResult result;
  std::vector<Fragment> fragments;
  for (const auto& sem : sems) linearize(sem, dc, fragments, result.skipped);

  // Bare locatives resolve positionally: with two or more, the first is the
  // origin and the second the destination; a single one is a destination.
  size_t bare_total = 0;
  for (const auto& f : fragments)
    if (f.kind == Fragment::Kind::BareLocative) ++bare_total;
  size_t bare_seen = 0;
  for (auto& f : fragments) {
    if (f.kind != Fragment::Kind::BareLocative) continue;
    ++bare_seen;
    if (bare_seen == 1 && bare_total >= 2)
      f.update = town_path("origin", f.town);
    else if (bare_seen <= 2)
      f.update = town_path("destination", f.town);
    else
      result.skipped.push_back("extra bare locative dropped: " + f.town);
    if (f.update) f.kind = Fragment::Kind::Update;
  }

  bool only_confirmations =
      !fragments.empty() &&
      std::all_of(fragments.begin(), fragments.end(), [](const Fragment& f) {
        return f.kind == Fragment::Kind::Confirmation;
      });

  std::vector<UpdatePtr> updates;
  if (only_confirmations) {
    updates.push_back(
        UpdateExpr::segment("answer", UpdateExpr::leaf("yes")));
  } else {
    for (size_t i = 0; i < fragments.size(); ++i) {
      const Fragment& f = fragments[i];
      switch (f.kind) {
        case Fragment::Kind::Update:
          updates.push_back(f.update);
          break;
        case Fragment::Kind::Negation: {
          // a negation wraps the next update; with nothing to wrap it is an
          // isolated denial of what the system proposed
          if (i + 1 < fragments.size() &&
              fragments[i + 1].kind == Fragment::Kind::Update) {
            updates.push_back(wrap_below_top(fragments[i + 1].update, f.op));
            ++i;
          } else {
            updates.push_back(
                UpdateExpr::segment("answer", UpdateExpr::leaf("no")));
          }
          break;
        }
        case Fragment::Kind::Confirmation:
          // ignored inside a longer utterance
          break;
        case Fragment::Kind::BareLocative:
          break;  // already resolved or dropped
      }
    }
  }

  result.update = UpdateExpr::seq(std::move(updates));
  return result;
}

void InfoState::apply(const UpdatePtr& u) { apply_at(u, '='); }

void InfoState::apply_at(const UpdatePtr& u, char mode) {
  switch (u->kind()) {
    case UpdateExpr::Kind::Leaf: {
      if (mode == '#') {
        if (value && *value == u->name()) value.reset();
      } else {
        value = u->name();
        children.clear();
      }
      return;
    }
    case UpdateExpr::Kind::Segment:
      children[u->name()].apply_at(u->children()[0], mode);
      return;
    case UpdateExpr::Kind::Op:
      apply_at(u->children()[0], u->op_char());
      return;
    case UpdateExpr::Kind::Seq:
      for (const auto& c : u->children()) apply_at(c, mode);
      return;
  }
}

namespace {

void dump_state(const InfoState& s, std::string prefix,
                std::vector<std::string>& lines) {
  if (s.value) lines.push_back(prefix + "=" + *s.value);
  for (const auto& [name, child] : s.children)
    dump_state(child, prefix.empty() ? name : prefix + "." + name, lines);
}

}  // namespace

std::string InfoState::to_text() const {
  std::vector<std::string> lines;
  dump_state(*this, "", lines);
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += ';';
    out += l;
  }
  return out;
}

}  // namespace sluice
