#ifndef DEPMT_SAMPLING_HPP_
#define DEPMT_SAMPLING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "depmt/lm.hpp"
#include "depmt/transfer.hpp"

namespace depmt {

// Seeded random model construction for oracle comparisons. Draws go
// through a fixed mt19937_64-to-double mapping so runs are reproducible
// across platforms.

// A fully normalized monolingual model: top over the vocabulary,
// dependency and detail rows for every (head, relation), and sequencing
// rows for every label multiset with at most n_max per relation. All
// cells are bounded away from zero.
MonolingualModel random_monolingual_model(std::uint64_t seed,
                                          const std::vector<std::string>& vocab,
                                          const std::vector<std::string>& relations,
                                          int n_max);

struct TransferInstance {
  RelationTree source;
  TransferModel model;
};

// A random source tree (at most max_edges edges) over a small vocabulary
// plus a normalized transfer model whose rule set mixes faithful shapes
// with distractors, so translation succeeds on some instances and fails
// on others.
TransferInstance random_transfer_instance(std::uint64_t seed, int max_edges = 3);

}  // namespace depmt

#endif  // DEPMT_SAMPLING_HPP_
