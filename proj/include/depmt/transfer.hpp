#ifndef DEPMT_TRANSFER_HPP_
#define DEPMT_TRANSFER_HPP_

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "depmt/graph.hpp"

namespace depmt {

// One derivation step template: an unlabeled source local-tree shape, an
// unlabeled target shape, and a node alignment from target shape nodes to
// source shape nodes. Shapes carry no isolated nodes.
struct StructuralRule {
  UnlabeledGraph source_shape;
  UnlabeledGraph target_shape;
  std::map<std::string, std::string> node_alignment;  // target node -> source node
  double probability = 0.0;
};

// Renames shape nodes to s0..sm / t0..tn, choosing the renaming that
// minimizes the serialized (source, target, alignment) triple, so
// structurally equal rules compare equal as strings.
StructuralRule canonicalize_rule(const StructuralRule& rule);

// Serialized identity of a canonical rule, ignoring its probability.
std::string rule_identity(const StructuralRule& rule);

// Grouping key for rule normalization: the canonical source shape.
std::string source_shape_key(const UnlabeledGraph& shape);

// Raw tables of a transfer model:
//   lexical: P(M | w) keyed by (source word, sorted target word multiset);
//            the empty multiset is a legal key (the word drops out)
//   rules:   derivation step parameters, normalized per source shape
struct TransferTables {
  std::map<std::pair<std::string, std::vector<std::string>>, double> lexical;
  std::vector<StructuralRule> rules;
};

class TransferModel {
 public:
  TransferModel() = default;
  explicit TransferModel(TransferTables tables);

  double lexical_prob(const std::string& word,
                      std::vector<std::string> multiset) const;
  // (sorted multiset, probability) pairs for one source word
  const std::vector<std::pair<std::vector<std::string>, double>>&
  lexical_entries(const std::string& word) const;

  const std::vector<StructuralRule>& rules() const { return rules_; }
  const std::map<std::pair<std::string, std::vector<std::string>>, double>&
  lexical() const {
    return lexical_;
  }

  // every relation label some rule can produce on the target side
  const std::vector<std::string>& target_relation_labels() const {
    return target_labels_;
  }

  std::vector<std::string> normalization_issues(double tolerance = 1e-9) const;

  // Separately estimated model for the opposite direction, when loaded.
  std::shared_ptr<const TransferModel> reverse;

 private:
  std::map<std::pair<std::string, std::vector<std::string>>, double> lexical_;
  std::vector<StructuralRule> rules_;
  std::map<std::string, std::vector<std::pair<std::vector<std::string>, double>>>
      entries_;
  std::vector<std::string> target_labels_;
};

// The deterministic partition of a source tree's edges: one set per
// internal node (its out-edges), ordered by head index.
std::vector<std::vector<RelationEdge>> partition_source(const RelationTree& source);

// P(N_t, f | N_s): product over source nodes of the lexical parameter of
// the word multiset that f maps onto the node.
double lexical_score(const Alignment& f,
                     const std::vector<WordOccurrence>& source_nodes,
                     const std::vector<WordOccurrence>& target_nodes,
                     const TransferModel& tm);

// One applicable derivation step: a rule, witnesses for both shape
// matches, and the concrete target edges it produces. Steps that produce
// the same edge set from the same rule are collapsed to one.
struct TransferStep {
  std::size_t rule_index = 0;
  NodeBijection source_match;                      // shape node -> source occurrence
  std::map<WordOccurrence, std::string> target_match;  // target occurrence -> shape node
  std::vector<RelationEdge> target_edges;
  double probability = 0.0;
};

std::vector<TransferStep> applicable_steps(
    const std::vector<RelationEdge>& source_local, const Alignment& f,
    const std::vector<WordOccurrence>& target_nodes, const TransferModel& tm);

// A complete derivation of one target edge set under one alignment.
struct DerivationStep {
  std::vector<RelationEdge> source_edges;
  TransferStep step;
};

struct TransferDerivation {
  Alignment alignment;
  std::vector<DerivationStep> steps;
  double lexical = 0.0;     // P(N_t, f | N_s)
  double structural = 0.0;  // product of step probabilities
};

// Every (alignment, derivation) pair that assembles exactly the target
// tree's edge set. Throws TooLarge above the node bound per side.
std::vector<TransferDerivation> enumerate_derivations(
    const RelationTree& target, const RelationTree& source,
    const TransferModel& tm, int max_nodes = kDefaultEnumerationBound);

// P(C_t | C_s): sum of lexical times structural over all derivations.
double score_translation(const RelationTree& target, const RelationTree& source,
                         const TransferModel& tm,
                         int max_nodes = kDefaultEnumerationBound);

struct TranslationCandidate {
  RelationTree tree;
  Alignment alignment;
  double prob = 0.0;
};

struct TransferDiagnostics {
  long long discarded_non_trees = 0;
};

// Top-k target trees by P(C_t, f | C_s), generated by choosing a lexical
// multiset per source node and a rule per source partition. Derivations
// whose assembled edge sets do not form a tree are discarded and counted.
std::vector<TranslationCandidate> translate(
    const RelationTree& source, const TransferModel& tm, std::size_t k,
    int max_nodes = kDefaultEnumerationBound,
    TransferDiagnostics* diagnostics = nullptr);

}  // namespace depmt

#endif  // DEPMT_TRANSFER_HPP_
