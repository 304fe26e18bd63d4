#include "depmt/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "depmt/logprob.hpp"

namespace depmt {

namespace {

std::string chain_key(const Hypothesis& h) {
  std::string key;
  for (const auto& w : h.source_words) key += w + " ";
  key += "|" + to_string(h.source_tree) + "|" + to_string(h.target_tree) + "|" +
         to_string(h.alignment);
  return key;
}

bool better_chain(const Hypothesis& a, const Hypothesis& b) {
  if (a.total() != b.total()) return a.total() > b.total();
  return chain_key(a) < chain_key(b);
}

bool entry_order(const DecodeEntry& a, const DecodeEntry& b) {
  if (a.log_score != b.log_score) return a.log_score > b.log_score;
  if (a.hypothesis.target_words != b.hypothesis.target_words) {
    return a.hypothesis.target_words < b.hypothesis.target_words;
  }
  return chain_key(a.hypothesis) < chain_key(b.hypothesis);
}

}  // namespace

std::vector<DecodeEntry> decode(const std::vector<RecognitionHypothesis>& hyps,
                                const MonolingualModel& source_lm,
                                const TransferModel& tm,
                                const MonolingualModel& target_lm, std::size_t k,
                                DecodeMode mode, int max_nodes) {
  if (hyps.empty()) {
    throw Error(ErrorKind::kEmptyInput, "no recognition hypotheses");
  }
  std::vector<Hypothesis> chains;
  for (const auto& hyp : hyps) {
    if (hyp.words.empty()) {
      throw Error(ErrorKind::kEmptyInput, "recognition hypothesis has no words");
    }
    if (!std::isfinite(hyp.log_acoustic)) {
      throw Error(ErrorKind::kMalformedInput,
                  "acoustic score is not finite for hypothesis \"" +
                      hyp.words.front() + " ...\"");
    }
    for (const auto& analysis : analyses(hyp.words, source_lm, max_nodes)) {
      // transfer candidates grouped by target tree; the transfer factor
      // is the alignment marginal, the stored alignment the best witness
      auto candidates = translate(analysis.tree, tm,
                                  std::numeric_limits<std::size_t>::max(),
                                  max_nodes);
      std::map<std::string, std::pair<const TranslationCandidate*, double>> by_tree;
      for (const auto& candidate : candidates) {
        auto key = to_string(candidate.tree);
        auto it = by_tree.find(key);
        if (it == by_tree.end()) {
          by_tree.emplace(key, std::make_pair(&candidate,
                                              log_from_prob(candidate.prob)));
        } else {
          it->second.second =
              log_add(it->second.second, log_from_prob(candidate.prob));
        }
      }
      for (const auto& [tree_key, group] : by_tree) {
        const TranslationCandidate& witness = *group.first;
        double log_transfer = group.second;
        if (log_transfer == kLogZero) continue;
        for (const auto& scored :
             enumerate_linearizations(witness.tree, target_lm, max_nodes)) {
          if (scored.prob == 0.0) continue;
          Hypothesis chain;
          chain.source_words = hyp.words;
          chain.source_tree = analysis.tree;
          chain.alignment = witness.alignment;
          chain.target_tree = witness.tree;
          chain.target_words = scored.words;
          chain.log_acoustic = hyp.log_acoustic;
          chain.log_source_generation = analysis.log_ordering;
          chain.log_source_content = analysis.log_content;
          chain.log_transfer = log_transfer;
          chain.log_target_generation = log_from_prob(scored.prob);
          chains.push_back(std::move(chain));
        }
      }
    }
  }

  std::vector<DecodeEntry> entries;
  if (mode == DecodeMode::kMax) {
    for (auto& chain : chains) {
      double total = chain.total();
      entries.push_back({std::move(chain), total});
    }
  } else {
    std::map<std::vector<std::string>, std::pair<Hypothesis, double>> by_string;
    for (auto& chain : chains) {
      std::vector<std::string> key = chain.target_words;
      double total = chain.total();
      auto it = by_string.find(key);
      if (it == by_string.end()) {
        by_string.emplace(std::move(key), std::make_pair(std::move(chain), total));
      } else {
        it->second.second = log_add(it->second.second, total);
        if (better_chain(chain, it->second.first)) {
          it->second.first = std::move(chain);
        }
      }
    }
    for (auto& [words, group] : by_string) {
      entries.push_back({std::move(group.first), group.second});
    }
  }
  std::sort(entries.begin(), entries.end(), entry_order);
  if (entries.size() > k) entries.resize(k);
  return entries;
}

std::vector<DecodeEntry> rescore_reverse(const std::vector<DecodeEntry>& entries,
                                         const MonolingualModel& target_lm,
                                         const TransferModel& reverse_tm,
                                         int max_nodes) {
  std::vector<DecodeEntry> rescored;
  for (const auto& entry : entries) {
    DecodeEntry out = entry;
    Hypothesis& h = out.hypothesis;
    h.log_source_content = log_score_content(h.target_tree, target_lm);
    h.log_transfer = log_from_prob(
        score_translation(h.source_tree, h.target_tree, reverse_tm, max_nodes));
    out.log_score = h.total();
    rescored.push_back(std::move(out));
  }
  std::sort(rescored.begin(), rescored.end(), entry_order);
  return rescored;
}

std::vector<DecodeEntry> rescore_reverse_attached(
    const std::vector<DecodeEntry>& entries, const MonolingualModel& target_lm,
    const TransferModel& tm_with_reverse) {
  if (!tm_with_reverse.reverse) {
    throw Error(ErrorKind::kMissingReverseModel,
                "transfer model carries no reverse-direction model");
  }
  return rescore_reverse(entries, target_lm, *tm_with_reverse.reverse);
}

}  // namespace depmt
