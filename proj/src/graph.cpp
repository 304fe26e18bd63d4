#include "depmt/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace depmt {

std::string to_string(const WordOccurrence& occ) {
  return occ.word + ":" + std::to_string(occ.index);
}

std::string to_string(const RelationEdge& edge) {
  return edge.relation + "(" + to_string(edge.head) + "," +
         to_string(edge.dependent) + ")";
}

namespace {

std::string join_names(const std::vector<WordOccurrence>& occs) {
  std::string out;
  for (const auto& occ : occs) {
    if (!out.empty()) out += ", ";
    out += to_string(occ);
  }
  return out;
}

bool valid_token(const std::string& token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  }
  return true;
}

}  // namespace

const std::vector<RelationEdge>& RelationTree::out_edges(
    const WordOccurrence& head) const {
  static const std::vector<RelationEdge> kNone;
  auto it = children_.find(head);
  return it == children_.end() ? kNone : it->second;
}

bool RelationTree::contains(const WordOccurrence& occ) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), occ,
                             [](const WordOccurrence& a, const WordOccurrence& b) {
                               return a.index < b.index;
                             });
  return it != nodes_.end() && *it == occ;
}

int RelationTree::depth() const {
  if (nodes_.empty()) return -1;
  struct Walker {
    const RelationTree& tree;
    int at(const WordOccurrence& occ) const {
      int best = 0;
      for (const auto& edge : tree.out_edges(occ)) {
        best = std::max(best, 1 + at(edge.dependent));
      }
      return best;
    }
  };
  return Walker{*this}.at(root_);
}

bool RelationTree::operator<(const RelationTree& other) const {
  return to_string(*this) < to_string(other);
}

RelationTree validate_tree(const std::vector<WordOccurrence>& nodes,
                           const std::vector<RelationEdge>& edges) {
  if (nodes.empty()) {
    throw Error(ErrorKind::kMalformedInput, "tree has no nodes");
  }
  std::set<WordOccurrence> node_set;
  std::set<int> seen_indices;
  for (const auto& occ : nodes) {
    if (!valid_token(occ.word)) {
      throw Error(ErrorKind::kMalformedInput,
                  "invalid word token at index " + std::to_string(occ.index));
    }
    if (!seen_indices.insert(occ.index).second) {
      throw Error(ErrorKind::kDuplicateIndex,
                  "duplicate occurrence index " + std::to_string(occ.index));
    }
    node_set.insert(occ);
  }

  std::map<WordOccurrence, WordOccurrence> head_of;
  std::map<WordOccurrence, std::vector<RelationEdge>> children;
  std::set<RelationEdge> edge_set;
  for (const auto& edge : edges) {
    if (edge.relation == kHeadMarker) {
      throw Error(ErrorKind::kReservedLabel,
                  "relation label \"" + kHeadMarker +
                      "\" is reserved for the head marker: " + to_string(edge));
    }
    if (!valid_token(edge.relation)) {
      throw Error(ErrorKind::kMalformedInput,
                  "invalid relation label in " + to_string(edge));
    }
    if (edge.head == edge.dependent) {
      throw Error(ErrorKind::kCycle, "self-edge at " + to_string(edge.head));
    }
    if (!node_set.count(edge.head) || !node_set.count(edge.dependent)) {
      throw Error(ErrorKind::kMalformedInput,
                  "edge references an occurrence outside the node set: " +
                      to_string(edge));
    }
    if (!edge_set.insert(edge).second) continue;  // duplicate edge, ignore
    auto [it, fresh] = head_of.emplace(edge.dependent, edge.head);
    if (!fresh) {
      throw Error(ErrorKind::kMultipleHeads,
                  to_string(edge.dependent) + " has heads " +
                      to_string(it->second) + " and " + to_string(edge.head));
    }
    children[edge.head].push_back(edge);
  }

  std::vector<WordOccurrence> roots;
  for (const auto& occ : node_set) {
    if (!head_of.count(occ)) roots.push_back(occ);
  }
  std::sort(roots.begin(), roots.end(),
            [](const WordOccurrence& a, const WordOccurrence& b) {
              return a.index < b.index;
            });

  if (roots.empty()) {
    // every node has a head, so following head links must loop
    std::vector<WordOccurrence> trail;
    std::set<WordOccurrence> on_trail;
    WordOccurrence at = *node_set.begin();
    while (on_trail.insert(at).second) {
      trail.push_back(at);
      at = head_of.at(at);
    }
    throw Error(ErrorKind::kCycle, "cycle through " + to_string(at));
  }
  if (roots.size() > 1) {
    // an extra headless node with no dependents is reported as
    // disconnected; a headless node with dependents is a second root
    for (std::size_t i = 1; i < roots.size(); ++i) {
      if (!children.count(roots[i])) {
        throw Error(ErrorKind::kDisconnectedNode,
                    to_string(roots[i]) + " is not connected to the tree");
      }
    }
    throw Error(ErrorKind::kMultipleRoots, "multiple roots: " + join_names(roots));
  }

  // reachability from the unique root; with unique heads any unreachable
  // region must contain a cycle
  std::set<WordOccurrence> reached;
  std::vector<WordOccurrence> stack{roots[0]};
  while (!stack.empty()) {
    WordOccurrence occ = stack.back();
    stack.pop_back();
    if (!reached.insert(occ).second) continue;
    auto it = children.find(occ);
    if (it == children.end()) continue;
    for (const auto& edge : it->second) stack.push_back(edge.dependent);
  }
  if (reached.size() != node_set.size()) {
    for (const auto& occ : node_set) {
      if (reached.count(occ)) continue;
      std::set<WordOccurrence> on_trail;
      WordOccurrence at = occ;
      while (on_trail.insert(at).second) at = head_of.at(at);
      throw Error(ErrorKind::kCycle, "cycle through " + to_string(at));
    }
  }

  RelationTree tree;
  tree.root_ = roots[0];
  tree.nodes_.assign(node_set.begin(), node_set.end());
  std::sort(tree.nodes_.begin(), tree.nodes_.end(),
            [](const WordOccurrence& a, const WordOccurrence& b) {
              return a.index < b.index;
            });
  tree.edges_.assign(edge_set.begin(), edge_set.end());
  std::sort(tree.edges_.begin(), tree.edges_.end(),
            [](const RelationEdge& a, const RelationEdge& b) {
              return a.dependent.index < b.dependent.index;
            });
  for (auto& [head, list] : children) {
    std::sort(list.begin(), list.end(),
              [](const RelationEdge& a, const RelationEdge& b) {
                return a.dependent.index < b.dependent.index;
              });
  }
  tree.children_ = std::move(children);
  return tree;
}

std::string to_string(const RelationTree& tree) {
  std::string out = tree.empty() ? std::string("<empty>") : to_string(tree.root());
  out += "|";
  bool first = true;
  for (const auto& edge : tree.edges()) {
    if (!first) out += ";";
    first = false;
    out += to_string(edge);
  }
  return out;
}

std::vector<RelationEdge> local_edges(const RelationTree& tree,
                                      const WordOccurrence& head) {
  if (!tree.contains(head)) {
    throw Error(ErrorKind::kNodeNotInTree,
                to_string(head) + " is not a node of the tree");
  }
  return tree.out_edges(head);
}

void LabelMultiset::add(const std::string& label, int n) {
  counts_[label] += n;
  if (counts_[label] <= 0) counts_.erase(label);
}

int LabelMultiset::count(const std::string& label) const {
  auto it = counts_.find(label);
  return it == counts_.end() ? 0 : it->second;
}

int LabelMultiset::total() const {
  int n = 0;
  for (const auto& [label, c] : counts_) n += c;
  return n;
}

std::vector<std::vector<std::string>> LabelMultiset::distinct_permutations()
    const {
  std::vector<std::string> items;
  for (const auto& [label, c] : counts_) {
    items.insert(items.end(), c, label);
  }
  std::vector<std::vector<std::string>> result;
  if (items.empty()) {
    result.push_back({});
    return result;
  }
  std::sort(items.begin(), items.end());
  do {
    result.push_back(items);
  } while (std::next_permutation(items.begin(), items.end()));
  return result;
}

std::string to_string(const LabelMultiset& multiset) {
  std::string out = "{";
  bool first = true;
  for (const auto& [label, c] : multiset.counts()) {
    if (!first) out += ",";
    first = false;
    out += label + ":" + std::to_string(c);
  }
  return out + "}";
}

LabelMultiset sequence_multiset(const std::vector<std::string>& sequence) {
  LabelMultiset result;
  int markers = 0;
  for (const auto& label : sequence) {
    if (label == kHeadMarker) ++markers;
    result.add(label);
  }
  if (markers == 0) {
    throw Error(ErrorKind::kMissingHeadMarker,
                "sequence has no head marker \"" + kHeadMarker + "\"");
  }
  if (markers > 1) {
    throw Error(ErrorKind::kDuplicateHeadMarker,
                "sequence has " + std::to_string(markers) + " head markers");
  }
  return result;
}

UnlabeledGraph::UnlabeledGraph(std::vector<std::string> nodes,
                               std::vector<UnlabeledEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& edge : edges_) {
    if (edge.relation == kHeadMarker) {
      throw Error(ErrorKind::kReservedLabel,
                  "relation label \"" + kHeadMarker + "\" in graph shape");
    }
    bool ok = std::binary_search(nodes_.begin(), nodes_.end(), edge.from) &&
              std::binary_search(nodes_.begin(), nodes_.end(), edge.to);
    if (!ok) {
      throw Error(ErrorKind::kMalformedInput,
                  "shape edge references unknown node: " + edge.relation + "(" +
                      edge.from + "," + edge.to + ")");
    }
  }
}

bool UnlabeledGraph::is_local_tree() const {
  if (edges_.empty()) return false;
  const std::string& root = edges_.front().from;
  std::set<std::string> targets;
  for (const auto& edge : edges_) {
    if (edge.from != root) return false;
    if (edge.to == root) return false;
    if (!targets.insert(edge.to).second) return false;
  }
  return nodes_.size() == targets.size() + 1;
}

std::string to_string(const UnlabeledGraph& graph) {
  std::string out;
  for (const auto& edge : graph.edges()) {
    if (!out.empty()) out += ";";
    out += edge.relation + "(" + edge.from + "," + edge.to + ")";
  }
  return out.empty() ? "-" : out;
}

void Alignment::set(const WordOccurrence& target, const WordOccurrence& source) {
  map_[target] = source;
}

bool Alignment::has(const WordOccurrence& target) const {
  return map_.count(target) > 0;
}

const WordOccurrence& Alignment::source_of(const WordOccurrence& target) const {
  auto it = map_.find(target);
  if (it == map_.end()) {
    throw Error(ErrorKind::kNodeMismatch,
                "alignment is not defined on " + to_string(target));
  }
  return it->second;
}

std::vector<WordOccurrence> Alignment::inverse_image(
    const WordOccurrence& source) const {
  std::vector<WordOccurrence> result;
  for (const auto& [target, src] : map_) {
    if (src == source) result.push_back(target);
  }
  return result;
}

std::string to_string(const Alignment& alignment) {
  std::string out;
  for (const auto& [target, source] : alignment.pairs()) {
    if (!out.empty()) out += ",";
    out += to_string(target) + ">" + to_string(source);
  }
  return out.empty() ? "-" : out;
}

std::vector<NodeBijection> isomorphisms(const UnlabeledGraph& shape,
                                        const std::vector<RelationEdge>& concrete) {
  std::vector<NodeBijection> result;

  std::set<WordOccurrence> occ_set;
  std::set<RelationEdge> concrete_set(concrete.begin(), concrete.end());
  for (const auto& edge : concrete_set) {
    occ_set.insert(edge.head);
    occ_set.insert(edge.dependent);
  }
  std::vector<WordOccurrence> occs(occ_set.begin(), occ_set.end());
  const std::vector<std::string>& shape_nodes = shape.nodes();
  if (shape_nodes.size() != occs.size()) return result;
  if (shape.edges().size() != concrete_set.size()) return result;
  if (shape_nodes.empty()) {
    result.push_back({});
    return result;
  }

  // candidates are generated by permuting the occurrence vector; starting
  // from sorted order, next_permutation yields them in lexicographic order
  // of the mapped sequence
  std::sort(occs.begin(), occs.end());
  do {
    std::map<std::string, WordOccurrence> mapping;
    for (std::size_t i = 0; i < shape_nodes.size(); ++i) {
      mapping.emplace(shape_nodes[i], occs[i]);
    }
    bool ok = true;
    for (const auto& edge : shape.edges()) {
      RelationEdge mapped{edge.relation, mapping.at(edge.from),
                          mapping.at(edge.to)};
      if (!concrete_set.count(mapped)) {
        ok = false;
        break;
      }
    }
    // forward inclusion plus equal edge counts gives the iff condition,
    // since an injective node map sends distinct edges to distinct edges
    if (ok) result.push_back(std::move(mapping));
  } while (std::next_permutation(occs.begin(), occs.end()));

  return result;
}

}  // namespace depmt
