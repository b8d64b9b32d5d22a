#ifndef SLUICE_NGRAM_HPP
#define SLUICE_NGRAM_HPP

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sluice {

struct NgramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Add-k smoothed N-gram model over negative natural-log scores:
///   P(w | h) = (c(h.w) + k) / (c(h) + k * (|V| + 1))
/// with eos as an extra outcome next to the training vocabulary. Unknown
/// tokens are mapped to a reserved marker. Immutable once trained.
class NgramModel {
 public:
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";
  static constexpr const char* kUnk = "<unk>";

  // Trains from tokenized sentences; each sentence is padded with N-1
  // beginning markers and one end marker.
  static NgramModel train(const std::vector<std::vector<std::string>>& corpus,
                          int order, double k = 1.0);

  int order() const { return order_; }
  double k() const { return k_; }
  const std::set<std::string>& vocabulary() const { return vocab_; }

  // -ln P(w | history); history must hold exactly order-1 tokens.
  double score(const std::vector<std::string>& history,
               const std::string& word) const;

  // Sum of scores for reading xs one token at a time, sliding the history:
  // the 3-gram recursion tri(w0 w1 w2 x) = tri(w0 w1 w2) + tri(w1 w2 x),
  // generalized to any order.
  double score_seq(const std::vector<std::string>& context,
                   const std::vector<std::string>& xs) const;

  // End-of-sentence score for a given history.
  double score_eos(const std::vector<std::string>& history) const;

  // The start-of-sentence context: order-1 bos markers.
  std::vector<std::string> bos_context() const;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static NgramModel load(std::istream& in);
  static NgramModel load_file(const std::string& path);

 private:
  NgramModel() = default;

  std::string map_token(const std::string& t) const;
  double raw_score(const std::vector<std::string>& history,
                   const std::string& word) const;

  int order_ = 0;
  double k_ = 1.0;
  std::set<std::string> vocab_;
  std::map<std::vector<std::string>, size_t> event_counts_;   // h.w
  std::map<std::vector<std::string>, size_t> history_counts_; // h
};

}  // namespace sluice

#endif
