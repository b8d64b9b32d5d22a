#include "sluice/lattice_parser.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace sluice {

namespace {

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  return s;
}

// Extracts the semantic argument from an instantiated top category. When the
// top template has exactly one distinct variable, the semantics is whatever
// that variable got bound to; otherwise the whole instantiated category.
void collect_vars(const TermPtr& t, std::vector<int64_t>& vars) {
  if (t->is_var()) {
    if (std::find(vars.begin(), vars.end(), t->var_id()) == vars.end())
      vars.push_back(t->var_id());
    return;
  }
  for (const auto& a : t->args()) collect_vars(a, vars);
}

std::optional<TermPtr> match_top(const TermPtr& top_template,
                                 const TermPtr& category, int64_t& counter) {
  std::unordered_map<int64_t, int64_t> mapping;
  TermPtr templ = rename_apart(top_template, counter, mapping);
  auto subst = unify(templ, category, {});
  if (!subst) return std::nullopt;
  std::vector<int64_t> vars;
  collect_vars(templ, vars);
  if (vars.size() == 1) return resolve(Term::var(vars[0]), *subst);
  return resolve(templ, *subst);
}

// Minimum acoustic cost of a transition path from `from` to `to` spelling
// exactly `tokens`. The tokens came from an actual path, so a path exists.
double min_path_cost(const std::multimap<int, const Transition*>& out,
                     int from, int to, const std::vector<std::string>& tokens) {
  const double inf = std::numeric_limits<double>::infinity();
  std::map<int, double> frontier{{from, 0.0}};
  for (const auto& token : tokens) {
    std::map<int, double> next;
    for (const auto& [state, cost] : frontier) {
      auto [b, e] = out.equal_range(state);
      for (auto it = b; it != e; ++it) {
        if (it->second->label != token) continue;
        double c = cost + it->second->acoustic;
        auto [n, inserted] = next.emplace(it->second->to, c);
        if (!inserted && c < n->second) n->second = c;
      }
    }
    frontier = std::move(next);
  }
  auto it = frontier.find(to);
  return it == frontier.end() ? inf : it->second;
}

struct Chart {
  struct Passive {
    int from, to;
    TermPtr cat;
    std::vector<std::string> tokens;
  };
  struct Active {
    const Rule* rule;
    TermPtr mother;                  // instantiated so far
    std::vector<TermPtr> remaining;  // daughters still to find
    int from, at;
    std::vector<std::string> tokens;
  };

  const Grammar& grammar;
  const ParseOptions& opts;
  int64_t var_counter = 0;
  std::vector<Passive> passives;
  std::vector<Active> actives;
  std::deque<size_t> agenda;  // indices into passives
  std::map<int, std::vector<size_t>> passives_by_start;
  std::map<std::pair<int, std::string>, std::vector<size_t>> actives_by_need;
  std::set<std::string> seen;
  ParseStats stats;

  Chart(const Grammar& g, const ParseOptions& o) : grammar(g), opts(o) {}

  void add_passive(int from, int to, const TermPtr& cat,
                   std::vector<std::string> tokens) {
    std::ostringstream key;
    key << from << '|' << to << '|' << join(tokens) << '|' << canonical(cat);
    if (!seen.insert(key.str()).second) return;
    if (passives.size() >= opts.derivation_cap) {
      std::ostringstream os;
      os << "derivation cap " << opts.derivation_cap
         << " exceeded while deriving span " << from << ".." << to;
      throw ParserResourceError(os.str());
    }
    passives.push_back({from, to, cat, std::move(tokens)});
    ++stats.chart_items;
    passives_by_start[from].push_back(passives.size() - 1);
    agenda.push_back(passives.size() - 1);
  }

  void add_active(Active a) {
    actives.push_back(a);
    ++stats.active_edges;
    size_t idx = actives.size() - 1;
    std::string need = functor_of(a.remaining[0]);
    actives_by_need[{a.at, need}].push_back(idx);
    // combine with passives already waiting at this state
    auto it = passives_by_start.find(a.at);
    if (it == passives_by_start.end()) return;
    std::vector<size_t> snapshot = it->second;
    for (size_t p : snapshot) extend(actives[idx], passives[p]);
  }

  // both by value: the chart vectors may reallocate during the call
  void extend(Active a, Passive p) {
    if (functor_of(a.remaining[0]) != functor_of(p.cat)) return;
    auto subst = unify(a.remaining[0], p.cat, {});
    if (!subst) return;
    std::vector<std::string> tokens = a.tokens;
    tokens.insert(tokens.end(), p.tokens.begin(), p.tokens.end());
    if (a.remaining.size() == 1) {
      add_passive(a.from, p.to, resolve(a.mother, *subst), std::move(tokens));
      return;
    }
    Active next;
    next.rule = a.rule;
    next.mother = resolve(a.mother, *subst);
    for (size_t i = 1; i < a.remaining.size(); ++i)
      next.remaining.push_back(resolve(a.remaining[i], *subst));
    next.from = a.from;
    next.at = p.to;
    next.tokens = std::move(tokens);
    add_active(std::move(next));
  }

  void process(size_t pidx) {
    // new analyses may start with this item as the first daughter
    Passive p = passives[pidx];
    for (const Rule* r : grammar.rules_by_first_daughter(functor_of(p.cat))) {
      std::unordered_map<int64_t, int64_t> mapping;
      TermPtr mother = rename_apart(r->mother, var_counter, mapping);
      std::vector<TermPtr> daughters;
      for (const auto& d : r->daughters)
        daughters.push_back(rename_apart(d, var_counter, mapping));
      auto subst = unify(daughters[0], p.cat, {});
      if (!subst) continue;
      if (daughters.size() == 1) {
        add_passive(p.from, p.to, resolve(mother, *subst), p.tokens);
        continue;
      }
      Active a;
      a.rule = r;
      a.mother = resolve(mother, *subst);
      for (size_t i = 1; i < daughters.size(); ++i)
        a.remaining.push_back(resolve(daughters[i], *subst));
      a.from = p.from;
      a.at = p.to;
      a.tokens = p.tokens;
      add_active(std::move(a));
    }
    // or continue analyses waiting for this item
    auto it = actives_by_need.find({p.from, functor_of(p.cat)});
    if (it != actives_by_need.end()) {
      std::vector<size_t> snapshot = it->second;
      for (size_t a : snapshot) extend(actives[a], p);
    }
  }
};

}  // namespace

std::vector<ParsedItem> parse_all(const Grammar& g, const WordGraph& wg,
                                  const ParseOptions& opts,
                                  ParseStats* stats) {
  Chart chart(g, opts);
  std::multimap<int, const Transition*> out;
  for (const auto& t : wg.transitions) out.emplace(t.from, &t);

  int lo = opts.span_from.value_or(std::numeric_limits<int>::min());
  int hi = opts.span_to.value_or(std::numeric_limits<int>::max());

  // Lexical seeding: walk every transition path spelling a lexicon entry.
  for (int s : wg.states) {
    if (s < lo) continue;
    auto [b, e] = out.equal_range(s);
    for (auto it = b; it != e; ++it) {
      for (const LexEntry* entry : g.lex_by_first_word(it->second->label)) {
        // frontier of states after matching a prefix of entry->words
        std::vector<int> frontier{it->second->to};
        bool dead = false;
        for (size_t w = 1; w < entry->words.size() && !dead; ++w) {
          std::vector<int> next;
          for (int f : frontier) {
            auto [fb, fe] = out.equal_range(f);
            for (auto jt = fb; jt != fe; ++jt)
              if (jt->second->label == entry->words[w])
                next.push_back(jt->second->to);
          }
          std::sort(next.begin(), next.end());
          next.erase(std::unique(next.begin(), next.end()), next.end());
          frontier = std::move(next);
          dead = frontier.empty();
        }
        if (dead) continue;
        for (int end : frontier) {
          if (end > hi) continue;
          std::unordered_map<int64_t, int64_t> mapping;
          TermPtr cat =
              rename_apart(entry->category, chart.var_counter, mapping);
          chart.add_passive(s, end, cat, entry->words);
        }
      }
    }
  }

  while (!chart.agenda.empty()) {
    size_t idx = chart.agenda.front();
    chart.agenda.pop_front();
    chart.process(idx);
  }
  if (stats) *stats = chart.stats;

  // Collect top-category items; dedupe by (span, tokens, sem), keep the
  // cheapest transition path spelling the tokens.
  std::map<std::string, ParsedItem> results;
  for (const auto& p : chart.passives) {
    auto sem = match_top(g.top_template(), p.cat, chart.var_counter);
    if (!sem) continue;
    ParsedItem item;
    item.from = p.from;
    item.to = p.to;
    item.tokens = p.tokens;
    item.sem = *sem;
    std::ostringstream key;
    key << item.from << '|' << item.to << '|' << join(item.tokens) << '|'
        << canonical(item.sem);
    if (results.count(key.str())) continue;
    item.acoustic = min_path_cost(out, item.from, item.to, item.tokens);
    results.emplace(key.str(), std::move(item));
  }
  std::vector<ParsedItem> items;
  items.reserve(results.size());
  for (auto& [_, item] : results) items.push_back(std::move(item));
  std::sort(items.begin(), items.end(),
            [](const ParsedItem& a, const ParsedItem& b) {
              return std::tie(a.from, a.to, a.tokens) <
                     std::tie(b.from, b.to, b.tokens) ||
                     (a.from == b.from && a.to == b.to &&
                      a.tokens == b.tokens &&
                      canonical(a.sem) < canonical(b.sem));
            });
  return items;
}

std::vector<TermPtr> parse_string(const Grammar& g,
                                  const std::vector<std::string>& tokens,
                                  size_t derivation_cap) {
  if (tokens.empty())
    throw std::invalid_argument("parse_string requires a non-empty sequence");
  const size_t n = tokens.size();
  int64_t counter = 0;

  // table[i][j]: categories spanning tokens [i, j), deduped by canonical form
  std::vector<std::vector<std::vector<TermPtr>>> table(
      n + 1, std::vector<std::vector<TermPtr>>(n + 1));
  std::set<std::string> seen;
  size_t total = 0;

  auto add = [&](size_t i, size_t j, const TermPtr& cat) -> bool {
    std::ostringstream key;
    key << i << '|' << j << '|' << canonical(cat);
    if (!seen.insert(key.str()).second) return false;
    if (++total > derivation_cap)
      throw ParserResourceError("derivation cap exceeded in string parser");
    table[i][j].push_back(cat);
    return true;
  };

  for (size_t i = 0; i < n; ++i) {
    for (const auto& [entry, len] : g.lex_lookup(tokens, i)) {
      std::unordered_map<int64_t, int64_t> mapping;
      add(i, i + len, rename_apart(entry->category, counter, mapping));
    }
  }

  // Tile rule daughters over every split of every span until fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t width = 1; width <= n; ++width) {
      for (size_t i = 0; i + width <= n; ++i) {
        size_t j = i + width;
        for (const auto& rule : g.rules()) {
          std::unordered_map<int64_t, int64_t> mapping;
          TermPtr mother = rename_apart(rule.mother, counter, mapping);
          std::vector<TermPtr> daughters;
          for (const auto& d : rule.daughters)
            daughters.push_back(rename_apart(d, counter, mapping));

          // recursively choose spans for each daughter
          auto tile = [&](auto&& self, size_t k, size_t at,
                          const Subst& subst) -> void {
            if (k == daughters.size()) {
              if (at == j)
                changed = add(i, j, resolve(mother, subst)) || changed;
              return;
            }
            size_t remaining = daughters.size() - k - 1;
            for (size_t mid = at + 1; mid + remaining <= j; ++mid) {
              // iterate over a copy: add() may grow the cell
              std::vector<TermPtr> cell = table[at][mid];
              for (const auto& cat : cell) {
                auto s2 = unify(daughters[k], cat, subst);
                if (s2) self(self, k + 1, mid, *s2);
              }
            }
          };
          tile(tile, 0, i, Subst{});
        }
      }
    }
  }

  std::vector<TermPtr> sems;
  std::set<std::string> sem_seen;
  for (const auto& cat : table[0][n]) {
    auto sem = match_top(g.top_template(), cat, counter);
    if (!sem) continue;
    if (sem_seen.insert(canonical(*sem)).second) sems.push_back(*sem);
  }
  std::sort(sems.begin(), sems.end(), [](const TermPtr& a, const TermPtr& b) {
    return canonical(a) < canonical(b);
  });
  return sems;
}

std::string dump_items(const std::vector<ParsedItem>& items) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& item : items) {
    os << "ITEM " << item.from << ' ' << item.to << ' ' << item.acoustic;
    for (const auto& t : item.tokens) os << ' ' << t;
    os << " :: " << to_string(item.sem) << '\n';
  }
  return os.str();
}

}  // namespace sluice
