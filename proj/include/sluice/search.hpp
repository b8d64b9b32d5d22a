#ifndef SLUICE_SEARCH_HPP
#define SLUICE_SEARCH_HPP

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sluice/lattice_parser.hpp"
#include "sluice/ngram.hpp"
#include "sluice/term.hpp"
#include "sluice/wordgraph.hpp"

namespace sluice {

struct SearchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EdgeKind { Skip = 0, Category = 1, Stopping = 2 };

/// An edge of the annotated word-graph: a raw word transition (skip), a
/// parser analysis (category), or a final-state exit (stopping).
struct Edge {
  int from = 0;
  int to = 0;  // stopping edges target the fresh final vertex
  EdgeKind kind = EdgeKind::Skip;
  std::vector<std::string> tokens;  // one token for skips, none for stoppings
  double acoustic = 0.0;
  TermPtr sem;  // present iff category edge
};

/// The search graph: word-graph states plus one fresh final vertex, with one
/// skip edge per transition, one category edge per parsed item, and one
/// stopping edge per final state. Edges are sorted by (from, to, kind,
/// tokens) so searches are deterministic.
struct AnnotatedGraph {
  std::vector<int> states;  // word-graph states, ascending
  int start = 0;
  int final_vertex = 0;  // max state + 1
  std::vector<Edge> edges;
};

AnnotatedGraph build_annotated(const WordGraph& wg,
                               const std::vector<ParsedItem>& items);

// Accumulated path weight: a small tuple of cost components. The absorbing
// top element (paths a method refuses) is represented out of band: the
// update function returns nullopt for it, and such paths are pruned.
using Weight = std::vector<double>;

struct EdgeStep {
  EdgeKind kind = EdgeKind::Skip;
  double acoustic = 0.0;
  const std::vector<std::string>* tokens = nullptr;
  // previous N-1 tokens at the source vertex; nullptr for context-free
  // methods
  const std::vector<std::string>* context = nullptr;
};

/// A disambiguation policy: initial weight, weight update per edge, and a
/// strict order on weights. The update may depend only on the accumulated
/// weight and the edge (plus the vertex token context), never on how the
/// vertex was reached — that is what makes the DAG sweep valid.
struct WeightMethod {
  std::string name;
  int context_size = 0;  // N-1 for ngram methods, else 0
  Weight ini;
  std::function<std::optional<Weight>(const Weight&, const EdgeStep&)> update;
  std::function<bool(const Weight&, const Weight&)> less;
  // defined for methods ordered by a scalar total; empty otherwise
  std::function<double(const Weight&)> total;
};

// Acoustic scores only; category edges are ignored (absorbing weight).
WeightMethod method_speech();

// <skips, categories, acoustic> compared lexicographically: prefer fewer
// skips, then fewer categories, then cheaper acoustics.
WeightMethod method_nlp_speech();

// nlp_speech extended with an accumulated ngram component c4; ordered by
// total = c4 + k_nlp*(c1+c2) + k_wg*c3.
WeightMethod method_nlp_speech_ngram(std::shared_ptr<const NgramModel> model,
                                     double k_nlp, double k_wg);

// Acoustic plus ngram scores only; category edges are ignored. `bias` is
// subtracted from each per-token ngram score, which may make increments
// negative; the DAG search does not care.
WeightMethod method_speech_ngram(std::shared_ptr<const NgramModel> model,
                                 double k_wg, double bias = 0.0);

struct SearchResult {
  std::vector<TermPtr> sems;  // sems of category edges along the path
  std::vector<std::string> tokens;
  Weight weight;
  std::vector<Edge> edges;
};

// Best path from the start vertex to the final vertex, or nullopt when no
// complete path has finite weight. Runs the uniform-weight dag-shortest-path
// sweep; with context_size > 0 the vertex space is expanded lazily to
// (state, last N-1 tokens) pairs.
std::optional<SearchResult> shortest_path(const AnnotatedGraph& ag,
                                          const WeightMethod& wm);

// The n best complete paths, weight-nondecreasing. Fewer if fewer exist.
std::vector<SearchResult> n_best(const AnnotatedGraph& ag,
                                 const WeightMethod& wm, size_t n);

// "<c1,...;total>" for reports.
std::string format_weight(const Weight& w, const WeightMethod& wm);

}  // namespace sluice

#endif
