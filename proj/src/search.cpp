#include "sluice/search.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sluice {

AnnotatedGraph build_annotated(const WordGraph& wg,
                               const std::vector<ParsedItem>& items) {
  AnnotatedGraph ag;
  ag.states = wg.states;
  ag.start = wg.start_state;
  ag.final_vertex = wg.states.back() + 1;

  for (const auto& t : wg.transitions) {
    Edge e;
    e.from = t.from;
    e.to = t.to;
    e.kind = EdgeKind::Skip;
    e.tokens = {t.label};
    e.acoustic = t.acoustic;
    ag.edges.push_back(std::move(e));
  }
  for (const auto& item : items) {
    if (!wg.has_state(item.from) || !wg.has_state(item.to)) {
      std::ostringstream os;
      os << "parsed item references unknown state " << item.from << ".."
         << item.to;
      throw SearchError(os.str());
    }
    Edge e;
    e.from = item.from;
    e.to = item.to;
    e.kind = EdgeKind::Category;
    e.tokens = item.tokens;
    e.acoustic = item.acoustic;
    e.sem = item.sem;
    ag.edges.push_back(std::move(e));
  }
  for (const auto& f : wg.finals) {
    Edge e;
    e.from = f.state;
    e.to = ag.final_vertex;
    e.kind = EdgeKind::Stopping;
    e.acoustic = f.acoustic;
    ag.edges.push_back(std::move(e));
  }
  std::sort(ag.edges.begin(), ag.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.to, a.kind, a.tokens, a.acoustic) <
           std::tie(b.from, b.to, b.kind, b.tokens, b.acoustic);
  });
  return ag;
}

WeightMethod method_speech() {
  WeightMethod wm;
  wm.name = "speech";
  wm.ini = {0.0};
  wm.update = [](const Weight& w,
                 const EdgeStep& e) -> std::optional<Weight> {
    if (e.kind == EdgeKind::Category) return std::nullopt;
    return Weight{w[0] + e.acoustic};
  };
  wm.less = [](const Weight& a, const Weight& b) { return a[0] < b[0]; };
  return wm;
}

WeightMethod method_nlp_speech() {
  WeightMethod wm;
  wm.name = "nlp_speech";
  wm.ini = {0.0, 0.0, 0.0};
  wm.update = [](const Weight& w,
                 const EdgeStep& e) -> std::optional<Weight> {
    switch (e.kind) {
      case EdgeKind::Skip:
        return Weight{w[0] + 1.0, w[1], w[2] + e.acoustic};
      case EdgeKind::Category:
        return Weight{w[0], w[1] + 1.0, w[2] + e.acoustic};
      case EdgeKind::Stopping:
        return Weight{w[0], w[1], w[2] + e.acoustic};
    }
    return std::nullopt;
  };
  wm.less = [](const Weight& a, const Weight& b) { return a < b; };
  return wm;
}

WeightMethod method_nlp_speech_ngram(std::shared_ptr<const NgramModel> model,
                                     double k_nlp, double k_wg) {
  WeightMethod wm;
  wm.name = model->order() == 2 ? "nlp_speech_bigram" : "nlp_speech_trigram";
  wm.context_size = model->order() - 1;
  wm.ini = {0.0, 0.0, 0.0, 0.0};
  wm.update = [model](const Weight& w,
                      const EdgeStep& e) -> std::optional<Weight> {
    switch (e.kind) {
      case EdgeKind::Skip:
        return Weight{w[0] + 1.0, w[1], w[2] + e.acoustic,
                      w[3] + model->score_seq(*e.context, *e.tokens)};
      case EdgeKind::Category:
        return Weight{w[0], w[1] + 1.0, w[2] + e.acoustic,
                      w[3] + model->score_seq(*e.context, *e.tokens)};
      case EdgeKind::Stopping:
        return Weight{w[0], w[1], w[2] + e.acoustic, w[3]};
    }
    return std::nullopt;
  };
  wm.total = [k_nlp, k_wg](const Weight& w) {
    return w[3] + k_nlp * (w[0] + w[1]) + k_wg * w[2];
  };
  auto total = wm.total;
  wm.less = [total](const Weight& a, const Weight& b) {
    return total(a) < total(b);
  };
  return wm;
}

WeightMethod method_speech_ngram(std::shared_ptr<const NgramModel> model,
                                 double k_wg, double bias) {
  WeightMethod wm;
  wm.name = model->order() == 2 ? "speech_bigram" : "speech_trigram";
  wm.context_size = model->order() - 1;
  wm.ini = {0.0, 0.0, 0.0, 0.0};
  wm.update = [model, bias](const Weight& w,
                            const EdgeStep& e) -> std::optional<Weight> {
    switch (e.kind) {
      case EdgeKind::Skip:
        return Weight{w[0] + 1.0, w[1], w[2] + e.acoustic,
                      w[3] + model->score_seq(*e.context, *e.tokens) -
                          bias * (double)e.tokens->size()};
      case EdgeKind::Category:
        return std::nullopt;
      case EdgeKind::Stopping:
        return Weight{w[0], w[1], w[2] + e.acoustic, w[3]};
    }
    return std::nullopt;
  };
  wm.total = [k_wg](const Weight& w) { return w[3] + k_wg * w[2]; };
  auto total = wm.total;
  wm.less = [total](const Weight& a, const Weight& b) {
    return total(a) < total(b);
  };
  return wm;
}

namespace {

// One ranked path candidate at a vertex.
struct Candidate {
  Weight weight;
  int prev_vertex = -1;  // index into the vertex table, -1 for the source
  int prev_rank = 0;
  int edge = -1;  // index into ag.edges
};

struct Vertex {
  int state;
  std::vector<std::string> context;
  std::vector<Candidate> ranked;  // best-first, at most n entries
};

std::vector<std::string> slide(const std::vector<std::string>& context,
                               const std::vector<std::string>& tokens,
                               size_t width) {
  std::vector<std::string> joined = context;
  joined.insert(joined.end(), tokens.begin(), tokens.end());
  if (joined.size() > width)
    joined.erase(joined.begin(), joined.end() - width);
  return joined;
}

std::vector<SearchResult> run_search(const AnnotatedGraph& ag,
                                     const WeightMethod& wm, size_t n) {
  if (n == 0) throw SearchError("n_best requires n >= 1");

  // edge adjacency by source state (edges are pre-sorted)
  std::map<int, std::pair<size_t, size_t>> edge_range;
  for (size_t i = 0; i < ag.edges.size(); ++i) {
    auto [it, inserted] = edge_range.emplace(ag.edges[i].from,
                                             std::make_pair(i, i + 1));
    if (!inserted) it->second.second = i + 1;
  }

  std::vector<Vertex> vertices;
  std::map<std::pair<int, std::vector<std::string>>, int> vertex_index;
  // per state, vertices in insertion order
  std::map<int, std::vector<int>> by_state;

  auto intern = [&](int state, std::vector<std::string> context) -> int {
    auto key = std::make_pair(state, context);
    auto it = vertex_index.find(key);
    if (it != vertex_index.end()) return it->second;
    int idx = (int)vertices.size();
    vertices.push_back({state, std::move(context), {}});
    vertex_index.emplace(std::move(key), idx);
    by_state[state].push_back(idx);
    return idx;
  };

  std::vector<std::string> start_context(
      (size_t)wm.context_size, std::string(NgramModel::kBos));
  int start = intern(ag.start, start_context);
  vertices[start].ranked.push_back({wm.ini, -1, 0, -1});
  int final_vertex = intern(ag.final_vertex, {});

  auto relax = [&](int target, Candidate cand) {
    auto& ranked = vertices[target].ranked;
    // strict comparison: on ties the incumbent stays ahead
    auto pos = ranked.begin();
    while (pos != ranked.end() && !wm.less(cand.weight, pos->weight)) ++pos;
    if ((size_t)(pos - ranked.begin()) >= n) return;
    ranked.insert(pos, std::move(cand));
    if (ranked.size() > n) ranked.pop_back();
  };

  // Sweep states in topological (= numeric) order. Vertices materialize on
  // first relax, always at a strictly larger state than the current one, so
  // every vertex is complete when its state comes up.
  std::vector<int> sweep = ag.states;
  sweep.push_back(ag.final_vertex);
  for (int state : sweep) {
    auto er = edge_range.find(state);
    if (er == edge_range.end()) continue;
    auto vs = by_state.find(state);
    if (vs == by_state.end()) continue;
    // by_state[state] cannot grow during this iteration: every edge leads
    // to a strictly larger state
    for (int vidx : vs->second) {
      // local copy: intern() may reallocate the vertex table mid-loop
      const std::vector<std::string> src_context = vertices[vidx].context;
      for (size_t ei = er->second.first; ei < er->second.second; ++ei) {
        const Edge& edge = ag.edges[ei];
        EdgeStep step;
        step.kind = edge.kind;
        step.acoustic = edge.acoustic;
        step.tokens = &edge.tokens;
        step.context = wm.context_size > 0 ? &src_context : nullptr;
        const size_t ranked_count = vertices[vidx].ranked.size();
        for (size_t rank = 0; rank < ranked_count; ++rank) {
          auto next = wm.update(vertices[vidx].ranked[rank].weight, step);
          if (!next) continue;  // absorbing weight: prune this extension
          int target;
          if (edge.kind == EdgeKind::Stopping) {
            target = final_vertex;
          } else {
            target = intern(edge.to,
                            wm.context_size > 0
                                ? slide(src_context, edge.tokens,
                                        (size_t)wm.context_size)
                                : std::vector<std::string>{});
          }
          relax(target, {std::move(*next), vidx, (int)rank, (int)ei});
        }
      }
    }
  }

  // Reconstruct paths from the final vertex's ranked list.
  std::vector<SearchResult> results;
  for (size_t rank = 0; rank < vertices[final_vertex].ranked.size(); ++rank) {
    SearchResult r;
    r.weight = vertices[final_vertex].ranked[rank].weight;
    int v = final_vertex;
    int k = (int)rank;
    std::vector<int> edges_rev;
    while (true) {
      const Candidate& c = vertices[v].ranked[k];
      if (c.edge < 0) break;
      edges_rev.push_back(c.edge);
      v = c.prev_vertex;
      k = c.prev_rank;
    }
    for (auto it = edges_rev.rbegin(); it != edges_rev.rend(); ++it) {
      const Edge& e = ag.edges[*it];
      r.edges.push_back(e);
      r.tokens.insert(r.tokens.end(), e.tokens.begin(), e.tokens.end());
      if (e.kind == EdgeKind::Category) r.sems.push_back(e.sem);
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace

std::optional<SearchResult> shortest_path(const AnnotatedGraph& ag,
                                          const WeightMethod& wm) {
  auto results = run_search(ag, wm, 1);
  if (results.empty()) return std::nullopt;
  return std::move(results[0]);
}

std::vector<SearchResult> n_best(const AnnotatedGraph& ag,
                                 const WeightMethod& wm, size_t n) {
  return run_search(ag, wm, n);
}

std::string format_weight(const Weight& w, const WeightMethod& wm) {
  std::ostringstream os;
  os.precision(12);
  os << '<';
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i];
  }
  if (wm.total) os << ';' << wm.total(w);
  os << '>';
  return os.str();
}

}  // namespace sluice
