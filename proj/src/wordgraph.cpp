#include "sluice/wordgraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace sluice {

bool WordGraph::has_state(int s) const {
  return std::binary_search(states.begin(), states.end(), s);
}

namespace {

void sort_edges(WordGraph& g) {
  std::sort(g.transitions.begin(), g.transitions.end(),
            [](const Transition& a, const Transition& b) {
              return std::tie(a.from, a.to, a.label, a.acoustic) <
                     std::tie(b.from, b.to, b.label, b.acoustic);
            });
  std::sort(g.finals.begin(), g.finals.end(), [](const Final& a, const Final& b) {
    return std::tie(a.state, a.acoustic) < std::tie(b.state, b.acoustic);
  });
}

}  // namespace

WordGraph make_word_graph(std::vector<Transition> transitions,
                          std::vector<Final> finals) {
  WordGraph g;
  g.transitions = std::move(transitions);
  g.finals = std::move(finals);

  std::set<int> states;
  for (const auto& t : g.transitions) {
    if (t.from < 0 || t.to < 0)
      throw WordGraphError("negative state id in transition");
    if (t.from >= t.to) {
      std::ostringstream os;
      os << "transition must lead to a larger state: " << t.from << " -> "
         << t.to;
      throw WordGraphError(os.str());
    }
    if (t.label.empty()) throw WordGraphError("empty transition label");
    if (t.acoustic < 0.0)
      throw WordGraphError("negative acoustic score on transition");
    states.insert(t.from);
    states.insert(t.to);
  }
  for (const auto& f : g.finals) {
    if (f.state < 0) throw WordGraphError("negative final state id");
    if (f.acoustic < 0.0)
      throw WordGraphError("negative acoustic score on final");
    states.insert(f.state);
  }
  if (states.empty()) throw WordGraphError("graph has no states");

  std::set<int> has_incoming;
  for (const auto& t : g.transitions) has_incoming.insert(t.to);
  std::vector<int> sources;
  for (int s : states)
    if (!has_incoming.count(s)) sources.push_back(s);
  if (sources.size() != 1) {
    std::ostringstream os;
    os << "expected exactly one zero-in-degree state, found "
       << sources.size();
    throw WordGraphError(os.str());
  }
  g.start_state = sources[0];
  g.states.assign(states.begin(), states.end());
  sort_edges(g);
  return g;
}

namespace {

struct LineScanner {
  std::istream& in;
  int line_no = 0;

  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
};

[[noreturn]] void line_fail(int line_no, const std::string& what) {
  std::ostringstream os;
  os << "line " << line_no << ": " << what;
  throw WordGraphError(os.str());
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

// Reads lines of one graph; returns false when the stream is exhausted
// before any content line was seen.
bool read_one(LineScanner& sc, std::vector<Transition>& transitions,
              std::vector<Final>& finals) {
  bool saw_content = false;
  std::string line;
  while (sc.next(line)) {
    if (blank(line)) {
      if (saw_content) return true;
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "TRANS") {
      Transition t;
      if (!(ls >> t.from >> t.to >> t.label >> t.acoustic))
        line_fail(sc.line_no, "malformed TRANS line");
      std::string extra;
      if (ls >> extra) line_fail(sc.line_no, "trailing tokens on TRANS line");
      if (t.from >= t.to)
        line_fail(sc.line_no, "transition must lead to a larger state");
      transitions.push_back(std::move(t));
    } else if (kw == "FINAL") {
      Final f;
      if (!(ls >> f.state >> f.acoustic))
        line_fail(sc.line_no, "malformed FINAL line");
      std::string extra;
      if (ls >> extra) line_fail(sc.line_no, "trailing tokens on FINAL line");
      finals.push_back(f);
    } else {
      line_fail(sc.line_no, "unknown keyword '" + kw + "'");
    }
    saw_content = true;
  }
  return saw_content;
}

}  // namespace

WordGraph load_word_graph(std::istream& in) {
  LineScanner sc{in};
  std::vector<Transition> transitions;
  std::vector<Final> finals;
  if (!read_one(sc, transitions, finals))
    throw WordGraphError("empty word-graph input");
  return make_word_graph(std::move(transitions), std::move(finals));
}

WordGraph load_word_graph(const std::string& text) {
  std::istringstream in(text);
  return load_word_graph(in);
}

std::vector<WordGraph> load_word_graph_batch(std::istream& in) {
  LineScanner sc{in};
  std::vector<WordGraph> graphs;
  for (;;) {
    std::vector<Transition> transitions;
    std::vector<Final> finals;
    if (!read_one(sc, transitions, finals)) break;
    graphs.push_back(make_word_graph(std::move(transitions), std::move(finals)));
  }
  return graphs;
}

void write_word_graph(const WordGraph& g, std::ostream& out) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& t : g.transitions)
    os << "TRANS " << t.from << ' ' << t.to << ' ' << t.label << ' '
       << t.acoustic << '\n';
  for (const auto& f : g.finals)
    os << "FINAL " << f.state << ' ' << f.acoustic << '\n';
  out << os.str();
}

std::string to_text(const WordGraph& g) {
  std::ostringstream os;
  write_word_graph(g, os);
  return os.str();
}

WordGraph normalize(const WordGraph& g, const std::string& pause_label) {
  std::vector<Transition> transitions = g.transitions;
  std::vector<Final> finals = g.finals;

  // Bypass pauses from the largest source downwards, so each pause target's
  // outgoing set is already pause-free when it is copied.
  std::vector<Transition> pauses;
  for (const auto& t : transitions)
    if (t.label == pause_label) pauses.push_back(t);
  std::sort(pauses.begin(), pauses.end(),
            [](const Transition& a, const Transition& b) {
              return a.from > b.from;
            });

  std::multimap<int, Transition> out_by_state;
  std::multimap<int, Final> finals_by_state;
  for (const auto& t : transitions)
    if (t.label != pause_label) out_by_state.emplace(t.from, t);
  for (const auto& f : finals) finals_by_state.emplace(f.state, f);

  for (const auto& p : pauses) {
    auto [tb, te] = out_by_state.equal_range(p.to);
    std::vector<Transition> copied;
    for (auto it = tb; it != te; ++it) {
      Transition t = it->second;
      t.from = p.from;
      t.acoustic += p.acoustic;
      copied.push_back(std::move(t));
    }
    for (auto& t : copied) out_by_state.emplace(t.from, std::move(t));
    auto [fb, fe] = finals_by_state.equal_range(p.to);
    std::vector<Final> fcopied;
    for (auto it = fb; it != fe; ++it) {
      Final f = it->second;
      f.state = p.from;
      f.acoustic += p.acoustic;
      fcopied.push_back(f);
    }
    for (auto& f : fcopied) finals_by_state.emplace(f.state, f);
  }

  std::vector<Transition> kept;
  for (auto& [_, t] : out_by_state) kept.push_back(t);
  std::vector<Final> kept_finals;
  for (auto& [_, f] : finals_by_state) kept_finals.push_back(f);

  // Prune states unreachable from the start or unable to reach a final.
  std::set<int> reachable{g.start_state};
  std::sort(kept.begin(), kept.end(),
            [](const Transition& a, const Transition& b) {
              return a.from < b.from;
            });
  for (const auto& t : kept)
    if (reachable.count(t.from)) reachable.insert(t.to);

  std::set<int> coreachable;
  for (const auto& f : kept_finals) coreachable.insert(f.state);
  for (auto it = kept.rbegin(); it != kept.rend(); ++it)
    if (coreachable.count(it->to)) coreachable.insert(it->from);

  std::vector<Transition> live;
  for (const auto& t : kept)
    if (reachable.count(t.from) && coreachable.count(t.from) &&
        reachable.count(t.to) && coreachable.count(t.to))
      live.push_back(t);
  std::vector<Final> live_finals;
  for (const auto& f : kept_finals)
    if (reachable.count(f.state) && coreachable.count(f.state))
      live_finals.push_back(f);

  if (live_finals.empty())
    throw WordGraphError("normalization left no complete path");
  if (live.empty() && live_finals[0].state != g.start_state)
    throw WordGraphError("normalization left no complete path");

  WordGraph out = make_word_graph(std::move(live), std::move(live_finals));
  if (out.start_state != g.start_state)
    throw WordGraphError("normalization changed the start state");
  return out;
}

std::vector<GraphPath> enumerate_paths(const WordGraph& g, size_t limit) {
  // Count first so the overflow error fires before any materialization.
  std::map<int, size_t> count;  // paths from state to any final
  std::multimap<int, const Transition*> out;
  for (const auto& t : g.transitions) out.emplace(t.from, &t);
  for (auto it = g.states.rbegin(); it != g.states.rend(); ++it) {
    size_t n = 0;
    for (const auto& f : g.finals)
      if (f.state == *it) ++n;
    auto [b, e] = out.equal_range(*it);
    for (auto o = b; o != e; ++o) {
      size_t sub = count.count(o->second->to) ? count[o->second->to] : 0;
      n = (n > limit || sub > limit || n + sub > limit + 1) ? limit + 1
                                                            : n + sub;
    }
    count[*it] = n;
  }
  size_t total = count.count(g.start_state) ? count[g.start_state] : 0;
  if (total > limit) {
    std::ostringstream os;
    os << "path count exceeds limit " << limit;
    throw PathOverflowError(os.str());
  }

  std::vector<GraphPath> paths;
  std::vector<std::string> tokens;
  // Finals sorted by (state, score); transitions already sorted.
  auto dfs = [&](auto&& self, int state, double score) -> void {
    for (const auto& f : g.finals)
      if (f.state == state) paths.push_back({tokens, score + f.acoustic});
    auto [b, e] = out.equal_range(state);
    for (auto it = b; it != e; ++it) {
      tokens.push_back(it->second->label);
      self(self, it->second->to, score + it->second->acoustic);
      tokens.pop_back();
    }
  };
  dfs(dfs, g.start_state, 0.0);
  return paths;
}

}  // namespace sluice
