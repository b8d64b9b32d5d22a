#ifndef SLUICE_GRAMMAR_HPP
#define SLUICE_GRAMMAR_HPP

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sluice/term.hpp"

namespace sluice {

struct GrammarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A rule with identifier, non-variable mother and daughters, and a declared
/// head daughter (1-based).
struct Rule {
  std::string id;
  TermPtr mother;
  std::vector<TermPtr> daughters;
  int head_index = 1;
};

/// Lexical entry: one or more surface tokens mapping to a category.
struct LexEntry {
  std::vector<std::string> words;
  TermPtr category;
};

/// Context-free skeleton of a rule: functor symbols only.
struct Skeleton {
  std::string mother;
  std::vector<std::string> daughters;
};

class Grammar {
 public:
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<LexEntry>& lexicon() const { return lexicon_; }
  const TermPtr& top_template() const { return top_template_; }

  // All entries whose word list matches `tokens` starting at `at`, paired
  // with the span length (the word-list length).
  std::vector<std::pair<const LexEntry*, size_t>> lex_lookup(
      const std::vector<std::string>& tokens, size_t at) const;

  // Entries whose first word equals `word`.
  const std::vector<const LexEntry*>& lex_by_first_word(
      const std::string& word) const;

  // Rules whose first daughter has the given functor symbol.
  const std::vector<const Rule*>& rules_by_first_daughter(
      const std::string& functor) const;

  std::string serialize() const;

  friend Grammar load_grammar(std::istream& in);

 private:
  void index();

  std::vector<Rule> rules_;
  std::vector<LexEntry> lexicon_;
  TermPtr top_template_;
  std::map<std::string, std::vector<const LexEntry*>> by_first_word_;
  std::map<std::string, std::vector<const Rule*>> by_first_daughter_;
  std::vector<const LexEntry*> no_entries_;
  std::vector<const Rule*> no_rules_;
};

// Reads the grammar file format:
//   rule <id> head=<k> : <mother> -> <d1>, ..., <dn>.
//   lex <w1> [<w2> ...] : <category>.
//   top : <template>.
// One statement per line; '#' starts a comment.
Grammar load_grammar(std::istream& in);
Grammar load_grammar_text(const std::string& text);
Grammar load_grammar_file(const std::string& path);

Skeleton skeleton(const Rule& r);

// Functor symbol of a non-variable category term.
std::string functor_of(const TermPtr& category);

}  // namespace sluice

#endif
