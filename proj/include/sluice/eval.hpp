#ifndef SLUICE_EVAL_HPP
#define SLUICE_EVAL_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "sluice/semantics.hpp"
#include "sluice/wordgraph.hpp"

namespace sluice {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unit-cost edit-distance breakdown between a hypothesis and a reference.
/// Insertions add reference tokens missing from the hypothesis, deletions
/// drop spurious hypothesis tokens. Ties prefer substitution, then
/// insertion, then deletion.
struct EditCounts {
  int distance = 0;
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
};

EditCounts levenshtein(const std::vector<std::string>& hyp,
                       const std::vector<std::string>& ref);

// 1 - d/n with n the reference length; may go negative, never clamped.
double word_accuracy(const std::vector<std::string>& hyp,
                     const std::vector<std::string>& ref);

// Fraction of pairs with edit distance zero.
double sentence_accuracy(
    const std::vector<std::pair<std::vector<std::string>,
                                std::vector<std::string>>>& pairs);

/// Concept-accuracy scores over semantic-unit multisets. Units sharing
/// (function, slot) but differing in value pair up as substitutions; the
/// remaining spurious hypothesis units count as insertions and missing
/// reference units as deletions. CA = 100 * (1 - (S+I+D)/SU), SU = |ref|.
struct ConceptScores {
  bool match = false;
  double precision = 0.0;
  double recall = 0.0;
  double ca = 0.0;
  int correct = 0;
  int substitutions = 0;
  int insertions = 0;
  int deletions = 0;
  int hyp_units = 0;
  int ref_units = 0;
};

ConceptScores concept_scores(const std::vector<SemanticUnit>& hyp,
                             const std::vector<SemanticUnit>& ref);

/// Best-possible path: the complete path whose token sequence minimizes the
/// Levenshtein distance to the reference, found by dynamic programming over
/// word-graph states crossed with reference positions.
struct OraclePath {
  std::vector<std::string> tokens;
  int distance = 0;
};

OraclePath oracle_best_path(const WordGraph& wg,
                            const std::vector<std::string>& ref);

/// One evaluated utterance, ready for aggregation.
struct EvalRow {
  std::string method;
  double wa = 0.0;
  bool sentence_correct = false;
  ConceptScores concepts;
};

/// Micro-averaged totals per method: WA and SA and match averaged per
/// utterance, precision/recall/CA from pooled unit counts.
struct MethodSummary {
  std::string method;
  size_t rows = 0;
  double wa = 0.0;
  double sa = 0.0;
  double match = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double ca = 0.0;
};

std::vector<MethodSummary> summarize(const std::vector<EvalRow>& rows);

// Aligned text table, columns WA SA match precision recall CA.
std::string aggregate_report(const std::vector<EvalRow>& rows);
// Machine-readable: one tab-separated line per method, same columns.
std::string aggregate_report_tsv(const std::vector<EvalRow>& rows);

}  // namespace sluice

#endif
