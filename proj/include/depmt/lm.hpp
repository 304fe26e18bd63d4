#ifndef DEPMT_LM_HPP_
#define DEPMT_LM_HPP_

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "depmt/graph.hpp"

namespace depmt {

// Raw parameter tables of a head-lexicalized monolingual model:
//   top:        P(Top(h))            keyed by root word
//   dependency: P(r(h,w) | h, r)     keyed by (head word, relation, word)
//   detail:     P(N(r,n) | h)        keyed by (head word, relation, n)
//   sequencing: P(s | M(s))          keyed by the label sequence
// Absent cells score zero, except that a (head, relation) pair with no
// detail entries at all implicitly has P(n=0) = 1.
struct MonolingualTables {
  std::map<std::string, double> top;
  std::map<std::tuple<std::string, std::string, std::string>, double> dependency;
  std::map<std::tuple<std::string, std::string, int>, double> detail;
  std::map<std::vector<std::string>, double> sequencing;
  int n_max = 1;
};

class MonolingualModel {
 public:
  MonolingualModel() = default;
  explicit MonolingualModel(MonolingualTables tables);

  double top_prob(const std::string& word) const;
  double dependency_prob(const std::string& head, const std::string& relation,
                         const std::string& dependent) const;
  double detail_prob(const std::string& head, const std::string& relation,
                     int n) const;
  double sequencing_prob(const std::vector<std::string>& sequence) const;

  // Relations with detail entries for this head word; the product over
  // relation labels in the content model ranges over these.
  const std::vector<std::string>& detail_relations(const std::string& head) const;

  // All relation labels mentioned anywhere in the tables.
  const std::vector<std::string>& relation_alphabet() const { return relations_; }

  // All words mentioned anywhere in the tables.
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  int n_max() const { return tables_.n_max; }
  const MonolingualTables& tables() const { return tables_; }

  // Violations of the normalization invariants at the given tolerance,
  // one message per failing distribution; empty means well formed.
  std::vector<std::string> normalization_issues(double tolerance = 1e-9) const;

 private:
  MonolingualTables tables_;
  std::map<std::string, std::vector<std::string>> head_relations_;
  std::vector<std::string> relations_;
  std::vector<std::string> vocabulary_;
};

// Number of distinct ordered tuples realizing an unordered multiset of
// dependent words: n! over the product of word multiplicity factorials.
long long distinct_orderings(const std::vector<std::string>& dependent_words);

// P(E(h)|h): probability that head `head` expands to exactly the given
// local edges. Every edge must be headed by `head`.
double score_expansion(const WordOccurrence& head,
                       const std::vector<RelationEdge>& edges,
                       const MonolingualModel& m);

// P(C): top parameter of the root times the expansion score of every node.
double score_content(const RelationTree& tree, const MonolingualModel& m);
double log_score_content(const RelationTree& tree, const MonolingualModel& m);

// One slot of a head's local ordering: a label and the occurrence that
// fills it (the head itself for the head-marker slot).
struct SequenceSlot {
  std::string label;
  WordOccurrence occupant;
};

// Per-head local orderings induced by a word order.
struct Linearization {
  std::map<WordOccurrence, std::vector<SequenceSlot>> local_orders;

  std::vector<std::string> sequence(const WordOccurrence& head) const;
};

// The per-head sequences induced by the occurrence order `order`, which
// must be a permutation of the tree's nodes in which every subtree spans
// a contiguous block. Throws NonProjective or NodeMismatch.
Linearization induced_sequences(const std::vector<WordOccurrence>& order,
                                const RelationTree& tree);

// P(W|C) for one concrete occurrence order.
double score_ordering(const std::vector<WordOccurrence>& order,
                      const RelationTree& tree, const MonolingualModel& m);
double log_score_ordering(const std::vector<WordOccurrence>& order,
                          const RelationTree& tree, const MonolingualModel& m);

struct ScoredString {
  std::vector<std::string> words;
  double prob;
};

// Every word string the tree can project to, with its ordering
// probability. Interchangeable sibling subtrees are enumerated once;
// distinct derivations of the same string are summed. Results are in
// lexicographic string order. Throws TooLarge above `max_nodes`.
std::vector<ScoredString> enumerate_linearizations(
    const RelationTree& tree, const MonolingualModel& m,
    int max_nodes = kDefaultEnumerationBound);

// One exhaustive analysis of a word string: a tree over the occurrences
// (token i gets index i+1) together with its factor scores.
struct Analysis {
  RelationTree tree;
  double log_content;
  double log_ordering;
  double log_prob;  // log_content + log_ordering
};

// All trees with nonzero P(C) * P(W|C) over the string, deterministic
// order (descending probability, then serialization).
std::vector<Analysis> analyses(const std::vector<std::string>& words,
                               const MonolingualModel& m,
                               int max_nodes = kDefaultEnumerationBound);

// P(W): sum of P(C) * P(W|C) over every tree on the string's occurrences.
double score_sentence(const std::vector<std::string>& words,
                      const MonolingualModel& m,
                      int max_nodes = kDefaultEnumerationBound);

// The k best trees by P(C) * P(W|C); shorter if fewer score nonzero.
std::vector<std::pair<RelationTree, double>> parse(
    const std::vector<std::string>& words, const MonolingualModel& m,
    std::size_t k, int max_nodes = kDefaultEnumerationBound);

}  // namespace depmt

#endif  // DEPMT_LM_HPP_
