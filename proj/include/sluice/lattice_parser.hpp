#ifndef SLUICE_LATTICE_PARSER_HPP
#define SLUICE_LATTICE_PARSER_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sluice/grammar.hpp"
#include "sluice/term.hpp"
#include "sluice/wordgraph.hpp"

namespace sluice {

/// A top-category analysis between two word-graph states: its token path,
/// the cheapest acoustic cost of any transition path spelling those tokens,
/// and the semantic term of the analysis.
struct ParsedItem {
  int from = 0;
  int to = 0;
  std::vector<std::string> tokens;
  double acoustic = 0.0;
  TermPtr sem;
};

struct ParserResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseOptions {
  size_t derivation_cap = 100000;
  // When set, only items within [span_from, span_to] are derived. Used to
  // measure how much work the shared chart saves over per-span parsing.
  std::optional<int> span_from;
  std::optional<int> span_to;
};

struct ParseStats {
  size_t chart_items = 0;
  size_t active_edges = 0;
};

// All top-category analyses anywhere in the graph, deduplicated by
// (from, to, tokens, sem) keeping the minimal acoustic cost. Results are
// sorted by (from, to, tokens, sem). Throws ParserResourceError when the
// chart exceeds the derivation cap.
std::vector<ParsedItem> parse_all(const Grammar& g, const WordGraph& wg,
                                  const ParseOptions& opts = {},
                                  ParseStats* stats = nullptr);

// All top-category semantic terms for exactly the full token sequence.
// Independent of the lattice chart: a dense span table computed to fixpoint.
std::vector<TermPtr> parse_string(const Grammar& g,
                                  const std::vector<std::string>& tokens,
                                  size_t derivation_cap = 100000);

// Diagnostic dump: one "ITEM <from> <to> <acoustic> <tokens...> :: <sem>"
// line per item.
std::string dump_items(const std::vector<ParsedItem>& items);

}  // namespace sluice

#endif
