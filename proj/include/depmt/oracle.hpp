#ifndef DEPMT_ORACLE_HPP_
#define DEPMT_ORACLE_HPP_

#include <map>
#include <string>
#include <vector>

#include "depmt/decoder.hpp"
#include "depmt/lm.hpp"
#include "depmt/transfer.hpp"

namespace depmt {

// Brute-force reference implementations used by tests and the `verify`
// command. They read model parameters through the public accessors but
// share no scoring or enumeration code with the main modules; every
// formula is expanded directly over exhaustive loops, in linear space.

// P(W) by enumerating every head-choice function that forms a tree over
// the occurrences, with every edge labeling. At most 5 tokens.
double oracle_sentence_prob(const std::vector<std::string>& words,
                            const MonolingualModel& m);

// P(C_t|C_s) by enumerating every total alignment and every assignment of
// target edges to source partitions. At most 5 nodes per side.
double oracle_translation_prob(const RelationTree& target,
                               const RelationTree& source,
                               const TransferModel& tm);

// Target-string marginals by literally evaluating the factored sum over
// every (W_s, C_s, C_t, W_t) chain. At most 10^6 chains.
std::map<std::vector<std::string>, double> oracle_decode(
    const std::vector<RecognitionHypothesis>& hyps, const MonolingualModel& src,
    const TransferModel& tm, const MonolingualModel& tgt);

// Per target string, the best single-chain probability over the same
// exhaustive enumeration (a chain is one (W_s, C_s, C_t, W_t) tuple, its
// transfer factor already summed over alignments).
std::map<std::vector<std::string>, double> oracle_chain_maxima(
    const std::vector<RecognitionHypothesis>& hyps, const MonolingualModel& src,
    const TransferModel& tm, const MonolingualModel& tgt);

}  // namespace depmt

#endif  // DEPMT_ORACLE_HPP_
