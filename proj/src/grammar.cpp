#include "sluice/grammar.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace sluice {

std::string functor_of(const TermPtr& category) {
  switch (category->kind()) {
    case Term::Kind::Atom:
    case Term::Kind::Compound:
      return category->name();
    case Term::Kind::Int: {
      std::ostringstream os;
      os << category->value();
      return os.str();
    }
    default:
      throw GrammarError("variable has no functor symbol");
  }
}

Skeleton skeleton(const Rule& r) {
  Skeleton s;
  s.mother = functor_of(r.mother);
  for (const auto& d : r.daughters) s.daughters.push_back(functor_of(d));
  return s;
}

std::vector<std::pair<const LexEntry*, size_t>> Grammar::lex_lookup(
    const std::vector<std::string>& tokens, size_t at) const {
  std::vector<std::pair<const LexEntry*, size_t>> out;
  if (at >= tokens.size()) return out;
  for (const LexEntry* e : lex_by_first_word(tokens[at])) {
    if (at + e->words.size() > tokens.size()) continue;
    bool ok = true;
    for (size_t i = 1; i < e->words.size(); ++i)
      if (tokens[at + i] != e->words[i]) {
        ok = false;
        break;
      }
    if (ok) out.emplace_back(e, e->words.size());
  }
  return out;
}

const std::vector<const LexEntry*>& Grammar::lex_by_first_word(
    const std::string& word) const {
  auto it = by_first_word_.find(word);
  return it == by_first_word_.end() ? no_entries_ : it->second;
}

const std::vector<const Rule*>& Grammar::rules_by_first_daughter(
    const std::string& functor) const {
  auto it = by_first_daughter_.find(functor);
  return it == by_first_daughter_.end() ? no_rules_ : it->second;
}

void Grammar::index() {
  by_first_word_.clear();
  by_first_daughter_.clear();
  for (const auto& e : lexicon_) by_first_word_[e.words[0]].push_back(&e);
  for (const auto& r : rules_)
    by_first_daughter_[functor_of(r.daughters[0])].push_back(&r);
}

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
  std::ostringstream os;
  os << "grammar line " << line_no << ": " << what;
  throw GrammarError(os.str());
}

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

void require_nonvar(const TermPtr& t, int line_no, const std::string& role) {
  if (t->is_var()) fail(line_no, role + " must not be a variable");
}

}  // namespace

Grammar load_grammar(std::istream& in) {
  Grammar g;
  std::set<std::string> rule_ids;
  int64_t var_counter = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.back() != '.') fail(line_no, "statement must end with '.'");
    s.pop_back();

    std::istringstream head(s);
    std::string kw;
    head >> kw;

    if (kw == "top") {
      size_t colon = s.find(':');
      if (colon == std::string::npos) fail(line_no, "missing ':' in top");
      if (g.top_template_) fail(line_no, "duplicate top declaration");
      TermReader reader(&var_counter);
      try {
        g.top_template_ = reader.parse_all(strip(s.substr(colon + 1)));
      } catch (const TermParseError& e) {
        fail(line_no, e.what());
      }
      require_nonvar(g.top_template_, line_no, "top template");
    } else if (kw == "rule") {
      size_t colon = s.find(':');
      if (colon == std::string::npos) fail(line_no, "missing ':' in rule");
      std::istringstream pre(s.substr(0, colon));
      std::string kw2, id, headspec;
      pre >> kw2 >> id >> headspec;
      if (id.empty()) fail(line_no, "missing rule identifier");
      if (headspec.rfind("head=", 0) != 0)
        fail(line_no, "expected head=<k> after rule identifier");
      int head_index = 0;
      try {
        head_index = std::stoi(headspec.substr(5));
      } catch (...) {
        fail(line_no, "malformed head index");
      }
      if (!rule_ids.insert(id).second)
        fail(line_no, "duplicate rule id '" + id + "'");

      std::string body = s.substr(colon + 1);
      size_t arrow = body.find("->");
      if (arrow == std::string::npos) fail(line_no, "missing '->' in rule");

      Rule r;
      r.id = id;
      r.head_index = head_index;
      TermReader reader(&var_counter);
      try {
        r.mother = reader.parse_all(strip(body.substr(0, arrow)));
        std::string rhs = body.substr(arrow + 2);
        size_t pos = 0;
        for (;;) {
          r.daughters.push_back(reader.parse(rhs, pos));
          while (pos < rhs.size() && std::isspace((unsigned char)rhs[pos]))
            ++pos;
          if (pos == rhs.size()) break;
          if (rhs[pos] != ',') fail(line_no, "expected ',' between daughters");
          ++pos;
        }
      } catch (const TermParseError& e) {
        fail(line_no, e.what());
      }
      require_nonvar(r.mother, line_no, "rule mother");
      for (const auto& d : r.daughters)
        require_nonvar(d, line_no, "rule daughter");
      if (r.daughters.empty()) fail(line_no, "rule needs daughters");
      if (head_index < 1 || (size_t)head_index > r.daughters.size())
        fail(line_no, "head index out of range");
      g.rules_.push_back(std::move(r));
    } else if (kw == "lex") {
      size_t colon = s.find(':');
      if (colon == std::string::npos) fail(line_no, "missing ':' in lex");
      std::istringstream pre(s.substr(0, colon));
      std::string kw2, w;
      pre >> kw2;
      LexEntry e;
      while (pre >> w) e.words.push_back(w);
      if (e.words.empty()) fail(line_no, "lex entry needs at least one word");
      TermReader reader(&var_counter);
      try {
        e.category = reader.parse_all(strip(s.substr(colon + 1)));
      } catch (const TermParseError& ex) {
        fail(line_no, ex.what());
      }
      require_nonvar(e.category, line_no, "lex category");
      g.lexicon_.push_back(std::move(e));
    } else {
      fail(line_no, "unknown statement '" + kw + "'");
    }
  }
  if (!g.top_template_) throw GrammarError("grammar has no top declaration");
  g.index();
  return g;
}

Grammar load_grammar_text(const std::string& text) {
  std::istringstream in(text);
  return load_grammar(in);
}

Grammar load_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot open grammar file: " + path);
  return load_grammar(in);
}

std::string Grammar::serialize() const {
  std::ostringstream os;
  os << "top : " << to_string(top_template_) << ".\n";
  for (const auto& r : rules_) {
    os << "rule " << r.id << " head=" << r.head_index << " : "
       << to_string(r.mother) << " -> ";
    for (size_t i = 0; i < r.daughters.size(); ++i) {
      if (i) os << ", ";
      os << to_string(r.daughters[i]);
    }
    os << ".\n";
  }
  for (const auto& e : lexicon_) {
    os << "lex";
    for (const auto& w : e.words) os << ' ' << w;
    os << " : " << to_string(e.category) << ".\n";
  }
  return os.str();
}

}  // namespace sluice
