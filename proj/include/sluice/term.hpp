#ifndef SLUICE_TERM_HPP
#define SLUICE_TERM_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace sluice {

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// First-order terms: variables, atoms, integers and fixed-arity compounds.
/// Lists are sugar for the atom "[]" and the binary functor "|".
class Term {
 public:
  enum class Kind { Var, Atom, Int, Compound };

  static TermPtr var(int64_t id);
  static TermPtr atom(std::string name);
  static TermPtr integer(int64_t value);
  static TermPtr compound(std::string functor, std::vector<TermPtr> args);

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }

  int64_t var_id() const { return ival_; }
  int64_t value() const { return ival_; }
  // atom name or compound functor
  const std::string& name() const { return name_; }
  const std::vector<TermPtr>& args() const { return args_; }
  size_t arity() const { return args_.size(); }

 private:
  Kind kind_;
  int64_t ival_ = 0;
  std::string name_;
  std::vector<TermPtr> args_;
};

// Bindings from variable id to term. Kept idempotent: bound terms may
// themselves contain bound variables, resolved by chasing.
using Subst = std::unordered_map<int64_t, TermPtr>;

// Chase variable bindings at the root only.
TermPtr deref(TermPtr t, const Subst& s);

// Most general unifier extending `s`, or nullopt on failure. Inputs are
// never modified. The occurs check is off by default, matching logic-grammar
// practice.
std::optional<Subst> unify(const TermPtr& a, const TermPtr& b, Subst s,
                           bool occurs_check = false);

// Deep application of a substitution; unbound variables remain.
TermPtr resolve(const TermPtr& t, const Subst& s);

// Copy with all variables replaced by fresh ones drawn from `counter`.
TermPtr rename_apart(const TermPtr& t, int64_t& counter,
                     std::unordered_map<int64_t, int64_t>& mapping);

bool structurally_equal(const TermPtr& a, const TermPtr& b);
bool is_ground(const TermPtr& t);

// Printed form; variables as _<id>. Proper lists print as [a,b,c].
std::string to_string(const TermPtr& t);

// Printed form with variables renumbered in traversal order, so terms that
// are equal up to renaming print identically. Used as a dictionary key.
std::string canonical(const TermPtr& t);

struct TermParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses terms in functor(arg,...) syntax. Identifiers starting with an
/// uppercase letter or `_` are variables; named variables are shared within
/// one reader scope, `_` is always fresh.
class TermReader {
 public:
  explicit TermReader(int64_t* var_counter) : counter_(var_counter) {}

  // Parses a single term from `text` starting at `pos`; advances `pos`.
  TermPtr parse(const std::string& text, size_t& pos);
  // Parses a full string as one term; trailing junk is an error.
  TermPtr parse_all(const std::string& text);

  // Variable names seen so far in this scope (name -> id).
  const std::unordered_map<std::string, int64_t>& scope() const {
    return names_;
  }

 private:
  TermPtr parse_list(const std::string& text, size_t& pos);
  int64_t* counter_;
  std::unordered_map<std::string, int64_t> names_;
};

// One-shot parse with a private variable scope.
TermPtr parse_term(const std::string& text);

}  // namespace sluice

#endif
