#ifndef SLUICE_WORDGRAPH_HPP
#define SLUICE_WORDGRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sluice {

struct WordGraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PathOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A word transition between two time-point states. Acoustic scores are
/// negative log probabilities, so lower is better and scores add along paths.
struct Transition {
  int from = 0;
  int to = 0;
  std::string label;
  double acoustic = 0.0;
};

/// A state where the utterance may end, with its own acoustic score.
struct Final {
  int state = 0;
  double acoustic = 0.0;
};

/// A speech-recognizer word-graph: a DAG over integer states where every
/// transition runs from a smaller to a larger state id. Immutable once built;
/// share freely across threads.
struct WordGraph {
  std::vector<int> states;  // sorted ascending
  std::vector<Transition> transitions;
  std::vector<Final> finals;
  int start_state = 0;

  bool has_state(int s) const;
};

// Constructs a graph from explicit parts, validating the invariants:
// from < to on every transition, non-empty labels, non-negative scores,
// finals on known states, and exactly one zero-in-degree state (the start).
WordGraph make_word_graph(std::vector<Transition> transitions,
                          std::vector<Final> finals);

// Reads one graph in the line format
//   TRANS <from> <to> <label> <acoustic>
//   FINAL <state> <acoustic>
// with #-comments. A blank line ends the graph; the stream may continue
// with further graphs (see load_word_graph_batch).
WordGraph load_word_graph(std::istream& in);
WordGraph load_word_graph(const std::string& text);

// Reads a whole batch file: graphs separated by blank lines.
std::vector<WordGraph> load_word_graph_batch(std::istream& in);

void write_word_graph(const WordGraph& g, std::ostream& out);
std::string to_text(const WordGraph& g);

// Eliminates pause transitions by forward bypass: each outgoing transition
// and final of a pause target is replicated onto the pause source with the
// pause score added, so every complete path keeps its token sequence (pauses
// deleted) and its exact total score. Unreachable and dead-end states are
// pruned afterwards. Fails if no complete path survives.
WordGraph normalize(const WordGraph& g, const std::string& pause_label = "#");

struct GraphPath {
  std::vector<std::string> tokens;
  double score = 0.0;  // transition scores plus final score
};

// All complete start-to-final paths in a deterministic order. Throws
// PathOverflowError when the graph holds more than `limit` paths.
std::vector<GraphPath> enumerate_paths(const WordGraph& g, size_t limit);

}  // namespace sluice

#endif
