#ifndef DEPMT_GRAPH_HPP_
#define DEPMT_GRAPH_HPP_

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "depmt/error.hpp"

namespace depmt {

// Reserved label standing for the head's own position inside a local
// ordering sequence. It may never be used as an edge relation.
inline const std::string kHeadMarker = "e";

// Desk-scale cap on exhaustive enumeration over trees and orders.
inline constexpr int kDefaultEnumerationBound = 8;

// A word occurrence: a token plus an index that is unique within one
// utterance or record. Identity is on both fields.
struct WordOccurrence {
  std::string word;
  int index = 0;

  auto operator<=>(const WordOccurrence&) const = default;
};

std::string to_string(const WordOccurrence& occ);

// One directed labeled edge; the head is the first argument, the
// dependent the second.
struct RelationEdge {
  std::string relation;
  WordOccurrence head;
  WordOccurrence dependent;

  auto operator<=>(const RelationEdge&) const = default;
};

std::string to_string(const RelationEdge& edge);

// Directed labeled tree over word occurrences with unordered siblings.
// Instances are built through validate_tree, so every tree satisfies the
// rooted-tree invariants. Edges are stored in a canonical order, so two
// trees that differ only in sibling storage order compare equal.
class RelationTree {
 public:
  RelationTree() = default;  // empty placeholder, not a valid tree

  const WordOccurrence& root() const { return root_; }
  const std::vector<WordOccurrence>& nodes() const { return nodes_; }
  const std::vector<RelationEdge>& edges() const { return edges_; }
  const std::vector<RelationEdge>& out_edges(const WordOccurrence& head) const;
  bool contains(const WordOccurrence& occ) const;
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  int depth() const;

  bool operator==(const RelationTree& other) const {
    return root_ == other.root_ && nodes_ == other.nodes_ &&
           edges_ == other.edges_;
  }
  bool operator<(const RelationTree& other) const;

  friend RelationTree validate_tree(const std::vector<WordOccurrence>& nodes,
                                    const std::vector<RelationEdge>& edges);

 private:
  WordOccurrence root_;
  std::vector<WordOccurrence> nodes_;  // sorted by index
  std::vector<RelationEdge> edges_;    // sorted by dependent index
  std::map<WordOccurrence, std::vector<RelationEdge>> children_;
};

// Checks that the edges form a single tree rooted somewhere over exactly
// the given nodes and returns it. Throws Error with kind MultipleRoots,
// Cycle, DisconnectedNode, MultipleHeads, DuplicateIndex, ReservedLabel
// or MalformedInput; messages name the offending occurrences.
RelationTree validate_tree(const std::vector<WordOccurrence>& nodes,
                           const std::vector<RelationEdge>& edges);

// Canonical one-line serialization, usable as a deterministic sort key.
std::string to_string(const RelationTree& tree);

// The edges headed by `head` (possibly empty). Throws NodeNotInTree.
std::vector<RelationEdge> local_edges(const RelationTree& tree,
                                      const WordOccurrence& head);

// Multiset of relation labels, possibly including the head marker.
class LabelMultiset {
 public:
  LabelMultiset() = default;

  void add(const std::string& label, int n = 1);
  int count(const std::string& label) const;
  int total() const;
  const std::map<std::string, int>& counts() const { return counts_; }

  // Every distinct ordering of the multiset, in lexicographic order.
  std::vector<std::vector<std::string>> distinct_permutations() const;

  auto operator<=>(const LabelMultiset&) const = default;

 private:
  std::map<std::string, int> counts_;
};

std::string to_string(const LabelMultiset& multiset);

// Counts the labels of a local ordering sequence. The sequence must
// contain the head marker exactly once; throws MissingHeadMarker or
// DuplicateHeadMarker otherwise.
LabelMultiset sequence_multiset(const std::vector<std::string>& sequence);

// Graph shape whose nodes are abstract identifiers; only edges carry
// relation labels. Node and edge lists are kept sorted and unique.
struct UnlabeledEdge {
  std::string relation;
  std::string from;
  std::string to;

  auto operator<=>(const UnlabeledEdge&) const = default;
};

class UnlabeledGraph {
 public:
  UnlabeledGraph() = default;
  UnlabeledGraph(std::vector<std::string> nodes,
                 std::vector<UnlabeledEdge> edges);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<UnlabeledEdge>& edges() const { return edges_; }
  bool empty() const { return nodes_.empty(); }

  // True iff all edges leave a single root node and no node has two
  // parents: the shape of the out-edges of one tree node.
  bool is_local_tree() const;

  auto operator<=>(const UnlabeledGraph&) const = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<UnlabeledEdge> edges_;
};

std::string to_string(const UnlabeledGraph& graph);

// Total function from target word occurrences to source word occurrences.
// The inverse is set-valued.
class Alignment {
 public:
  Alignment() = default;
  explicit Alignment(std::map<WordOccurrence, WordOccurrence> target_to_source)
      : map_(std::move(target_to_source)) {}

  void set(const WordOccurrence& target, const WordOccurrence& source);
  bool has(const WordOccurrence& target) const;
  const WordOccurrence& source_of(const WordOccurrence& target) const;
  std::vector<WordOccurrence> inverse_image(const WordOccurrence& source) const;
  const std::map<WordOccurrence, WordOccurrence>& pairs() const { return map_; }
  std::size_t size() const { return map_.size(); }

  auto operator<=>(const Alignment&) const = default;

 private:
  std::map<WordOccurrence, WordOccurrence> map_;  // target -> source
};

std::string to_string(const Alignment& alignment);

// Bijection from abstract shape nodes to concrete occurrences.
using NodeBijection = std::map<std::string, WordOccurrence>;

// Every bijection from the nodes of `shape` onto the occurrences of
// `concrete` such that r(a,b) is a shape edge iff r(g(a),g(b)) is a
// concrete edge. Results are ordered lexicographically by the mapped
// occurrence sequence; an empty list means no isomorphism exists.
std::vector<NodeBijection> isomorphisms(const UnlabeledGraph& shape,
                                        const std::vector<RelationEdge>& concrete);

}  // namespace depmt

#endif  // DEPMT_GRAPH_HPP_
