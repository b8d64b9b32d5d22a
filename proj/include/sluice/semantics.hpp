#ifndef SLUICE_SEMANTICS_HPP
#define SLUICE_SEMANTICS_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sluice/term.hpp"

namespace sluice {

struct UpdateParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class UpdateExpr;
using UpdatePtr = std::shared_ptr<const UpdateExpr>;

/// A slot-path update formula. Surface syntax:
///   travel.destination.([#place.town.leiden];[!place.town.abcoude])
/// Segments name slots, the last path element is the value, bracketed
/// operators mark the update mode: '=' assert, '#' denial, '!' correction.
class UpdateExpr {
 public:
  enum class Kind { Segment, Leaf, Op, Seq };

  static UpdatePtr segment(std::string name, UpdatePtr rest);
  static UpdatePtr leaf(std::string value);
  static UpdatePtr op(char op, UpdatePtr inner);
  // A sequence of one element collapses to that element.
  static UpdatePtr seq(std::vector<UpdatePtr> items);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }  // Segment slot / Leaf value
  char op_char() const { return op_; }
  const std::vector<UpdatePtr>& children() const { return children_; }

 private:
  Kind kind_ = Kind::Leaf;
  std::string name_;
  char op_ = 0;
  std::vector<UpdatePtr> children_;
};

bool update_equal(const UpdatePtr& a, const UpdatePtr& b);

UpdatePtr parse_update(const std::string& text);
std::string print_update(const UpdatePtr& u);

/// One concept-accuracy unit: communicative function, flattened slot, value.
struct SemanticUnit {
  std::string function;  // assert | denial | correction | yes | no
  std::string slot;
  std::string value;

  bool operator==(const SemanticUnit&) const = default;
  bool operator<(const SemanticUnit& o) const {
    return std::tie(function, slot, value) <
           std::tie(o.function, o.slot, o.value);
  }
};

std::string to_string(const SemanticUnit& u);  // "UNIT <function> <slot> <value>"

/// Domain tables: structural slot segments collapsed away when flattening
/// updates to units, and the town atoms recognized as bare locatives.
struct DomainConfig {
  std::set<std::string> drop_segments;
  std::set<std::string> towns;

  static const DomainConfig& defaults();
  static DomainConfig load_file(const std::string& path);
};

// Flattens an update to its semantic units: one unit per value leaf, slot =
// path segments joined by '_' after dropping structural segments. Leaves
// under the reserved `answer` slot carry the yes/no function themselves.
std::vector<SemanticUnit> update_to_units(
    const UpdatePtr& u, const DomainConfig& dc = DomainConfig::defaults());

struct TranslationResult {
  UpdatePtr update;                   // possibly an empty sequence
  std::vector<std::string> skipped;   // diagnostics for dropped terms
};

// Rule-table translation of best-path semantic terms to an update:
// prepositional terms fix origin/destination, two bare locatives resolve to
// origin then destination, a leading `nee`/`niet` wraps the following update
// in a correction/denial, isolated `nee` denies and isolated `graag`/`ja`
// confirm, temporal terms build the moment.at.time path.
TranslationResult sems_to_update(
    const std::vector<TermPtr>& sems,
    const DomainConfig& dc = DomainConfig::defaults());

/// A nested slot/value store, just enough to apply updates: assert sets,
/// denial retracts a matching value, correction overwrites.
class InfoState {
 public:
  void apply(const UpdatePtr& u);
  // sorted dotted paths, ';'-joined
  std::string to_text() const;
  bool operator==(const InfoState&) const = default;

  std::map<std::string, InfoState> children;
  std::optional<std::string> value;

 private:
  void apply_at(const UpdatePtr& u, char mode);
};

}  // namespace sluice

#endif
