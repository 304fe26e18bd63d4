#ifndef DEPMT_DECODER_HPP_
#define DEPMT_DECODER_HPP_

#include <string>
#include <vector>

#include "depmt/lm.hpp"
#include "depmt/transfer.hpp"

namespace depmt {

// One recognizer output: a word string with a log score proportional to
// the acoustic likelihood of the utterance given that string.
struct RecognitionHypothesis {
  std::vector<std::string> words;
  double log_acoustic = 0.0;
};

// A fully instantiated decoding chain with one log score per factor.
struct Hypothesis {
  std::vector<std::string> source_words;
  RelationTree source_tree;
  Alignment alignment;
  RelationTree target_tree;
  std::vector<std::string> target_words;

  double log_acoustic = 0.0;
  double log_source_generation = 0.0;  // P(W_s | C_s)
  double log_source_content = 0.0;     // P(C_s); P(C_t) after reverse rescoring
  double log_transfer = 0.0;           // P(C_t | C_s); P(C_s | C_t) after reverse
  double log_target_generation = 0.0;  // P(W_t | C_t)

  double total() const {
    return log_acoustic + log_source_generation + log_source_content +
           log_transfer + log_target_generation;
  }
};

enum class DecodeMode { kSum, kMax };

// One ranked result. In sum mode log_score is the marginal over all
// chains sharing the target string and hypothesis is the best such chain;
// in max mode log_score is the chain's own total.
struct DecodeEntry {
  Hypothesis hypothesis;
  double log_score = 0.0;
};

// Ranks target strings (sum mode, the default) or full chains (max mode)
// for an n-best list of recognition hypotheses. Throws EmptyInput for an
// empty list and TooLarge when a hypothesis exceeds the bound.
std::vector<DecodeEntry> decode(const std::vector<RecognitionHypothesis>& hyps,
                                const MonolingualModel& source_lm,
                                const TransferModel& tm,
                                const MonolingualModel& target_lm, std::size_t k,
                                DecodeMode mode = DecodeMode::kSum,
                                int max_nodes = kDefaultEnumerationBound);

// Replaces each chain's content and transfer factors by the target
// content P(C_t) and the reverse transfer P(C_s | C_t), leaving the other
// factors untouched, then re-ranks by the substituted totals.
std::vector<DecodeEntry> rescore_reverse(const std::vector<DecodeEntry>& entries,
                                         const MonolingualModel& target_lm,
                                         const TransferModel& reverse_tm,
                                         int max_nodes = kDefaultEnumerationBound);

// Convenience form reading the reverse model from tm.reverse; throws
// MissingReverseModel when it is absent.
std::vector<DecodeEntry> rescore_reverse_attached(
    const std::vector<DecodeEntry>& entries, const MonolingualModel& target_lm,
    const TransferModel& tm_with_reverse);

}  // namespace depmt

#endif  // DEPMT_DECODER_HPP_
