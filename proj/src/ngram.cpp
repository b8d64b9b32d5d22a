#include "sluice/ngram.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sluice {

NgramModel NgramModel::train(
    const std::vector<std::vector<std::string>>& corpus, int order,
    double k) {
  if (order < 2) throw NgramError("ngram order must be at least 2");
  if (k <= 0.0) throw NgramError("smoothing constant must be positive");
  if (corpus.empty()) throw NgramError("training corpus is empty");

  NgramModel m;
  m.order_ = order;
  m.k_ = k;
  for (const auto& sentence : corpus)
    for (const auto& w : sentence) {
      if (w == kBos || w == kEos || w == kUnk)
        throw NgramError("reserved marker used as a corpus token: " + w);
      m.vocab_.insert(w);
    }
  if (m.vocab_.empty()) throw NgramError("training corpus has no tokens");

  for (const auto& sentence : corpus) {
    std::vector<std::string> padded(order - 1, kBos);
    padded.insert(padded.end(), sentence.begin(), sentence.end());
    padded.push_back(kEos);
    for (size_t i = 0; i + order <= padded.size() + 0u; ++i) {
      std::vector<std::string> event(padded.begin() + i,
                                     padded.begin() + i + order);
      std::vector<std::string> history(event.begin(), event.end() - 1);
      ++m.event_counts_[event];
      ++m.history_counts_[history];
    }
  }
  return m;
}

std::string NgramModel::map_token(const std::string& t) const {
  if (t == kBos || t == kEos) return t;
  return vocab_.count(t) ? t : kUnk;
}

double NgramModel::raw_score(const std::vector<std::string>& history,
                             const std::string& word) const {
  std::vector<std::string> h;
  h.reserve(history.size());
  for (const auto& t : history) h.push_back(map_token(t));
  std::vector<std::string> event = h;
  event.push_back(map_token(word));

  auto ev = event_counts_.find(event);
  double num = (ev == event_counts_.end() ? 0.0 : (double)ev->second) + k_;
  auto hi = history_counts_.find(h);
  double den = (hi == history_counts_.end() ? 0.0 : (double)hi->second) +
               k_ * ((double)vocab_.size() + 1.0);
  return -std::log(num / den);
}

double NgramModel::score(const std::vector<std::string>& history,
                         const std::string& word) const {
  if ((int)history.size() != order_ - 1) {
    std::ostringstream os;
    os << "history must hold " << order_ - 1 << " tokens, got "
       << history.size();
    throw NgramError(os.str());
  }
  return raw_score(history, word);
}

double NgramModel::score_eos(const std::vector<std::string>& history) const {
  if ((int)history.size() != order_ - 1)
    throw NgramError("history length mismatch");
  return raw_score(history, kEos);
}

double NgramModel::score_seq(const std::vector<std::string>& context,
                             const std::vector<std::string>& xs) const {
  if ((int)context.size() != order_ - 1)
    throw NgramError("context length mismatch");
  std::vector<std::string> h = context;
  double total = 0.0;
  for (const auto& x : xs) {
    total += raw_score(h, x);
    h.erase(h.begin());
    h.push_back(x);
  }
  return total;
}

std::vector<std::string> NgramModel::bos_context() const {
  return std::vector<std::string>(order_ - 1, kBos);
}

void NgramModel::save(std::ostream& out) const {
  std::ostringstream os;
  os.precision(17);
  os << "NGRAM 1\n";
  os << "ORDER " << order_ << "\n";
  os << "K " << k_ << "\n";
  for (const auto& w : vocab_) os << "WORD " << w << "\n";
  for (const auto& [event, count] : event_counts_) {
    os << "SCORE";
    for (const auto& t : event) os << ' ' << t;
    os << ' ' << count << "\n";
  }
  out << os.str();
}

void NgramModel::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw NgramError("cannot write model file: " + path);
  save(out);
}

NgramModel NgramModel::load(std::istream& in) {
  NgramModel m;
  std::string line;
  int line_no = 0;
  bool got_version = false;
  auto fail = [&](const std::string& what) -> void {
    std::ostringstream os;
    os << "model line " << line_no << ": " << what;
    throw NgramError(os.str());
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "NGRAM") {
      int version = 0;
      if (!(ls >> version) || version != 1) fail("unsupported model version");
      got_version = true;
    } else if (kw == "ORDER") {
      if (!(ls >> m.order_) || m.order_ < 2) fail("bad ORDER");
    } else if (kw == "K") {
      if (!(ls >> m.k_) || m.k_ <= 0.0) fail("bad K");
    } else if (kw == "WORD") {
      std::string w;
      if (!(ls >> w)) fail("bad WORD");
      m.vocab_.insert(w);
    } else if (kw == "SCORE") {
      std::vector<std::string> fields;
      std::string f;
      while (ls >> f) fields.push_back(f);
      if ((int)fields.size() != m.order_ + 1) fail("bad SCORE arity");
      size_t count = 0;
      try {
        count = std::stoull(fields.back());
      } catch (...) {
        fail("bad SCORE count");
      }
      fields.pop_back();
      std::vector<std::string> history(fields.begin(), fields.end() - 1);
      m.event_counts_[fields] += count;
      m.history_counts_[history] += count;
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  if (!got_version) throw NgramError("missing NGRAM version header");
  if (m.order_ < 2) throw NgramError("model file missing ORDER");
  if (m.vocab_.empty()) throw NgramError("model file has empty vocabulary");
  return m;
}

NgramModel NgramModel::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NgramError("cannot open model file: " + path);
  return load(in);
}

}  // namespace sluice
