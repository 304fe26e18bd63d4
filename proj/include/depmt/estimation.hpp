#ifndef DEPMT_ESTIMATION_HPP_
#define DEPMT_ESTIMATION_HPP_

#include <vector>

#include "depmt/graph.hpp"
#include "depmt/lm.hpp"
#include "depmt/transfer.hpp"

namespace depmt {

// One annotated sentence: the surface word order plus its relation tree.
struct TreebankRecord {
  std::vector<WordOccurrence> words;  // surface order
  RelationTree tree;
};

// One annotated sentence pair with a word alignment from target
// occurrences to source occurrences.
struct BitextRecord {
  TreebankRecord source;
  TreebankRecord target;
  Alignment alignment;
};

// Relative-frequency estimation of the four monolingual tables. With
// lambda > 0 every cell of each table's observed support gets lambda
// added before normalizing. n_max defaults to the largest observed
// dependent count; passing a smaller cap is an error.
MonolingualModel estimate_monolingual(const std::vector<TreebankRecord>& corpus,
                                      double lambda = 0.0, int n_max = -1);

// Relative-frequency estimation of the lexical multiset table and the
// structural rule set. Every record's target edges must decompose into
// per-source-local-tree groups consistent with its alignment.
TransferModel estimate_transfer(const std::vector<BitextRecord>& corpus,
                                double lambda = 0.0);

// Swaps source and target of every record, inverting the alignments.
// Only records whose alignment is a bijection can be reversed.
std::vector<BitextRecord> reverse_bitext(const std::vector<BitextRecord>& corpus);

}  // namespace depmt

#endif  // DEPMT_ESTIMATION_HPP_
