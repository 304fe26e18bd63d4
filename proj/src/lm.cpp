#include "depmt/lm.hpp"

#include <algorithm>
#include <set>

#include "depmt/logprob.hpp"

namespace depmt {

MonolingualModel::MonolingualModel(MonolingualTables tables)
    : tables_(std::move(tables)) {
  std::set<std::string> rels;
  std::set<std::string> words;
  for (const auto& [word, p] : tables_.top) words.insert(word);
  for (const auto& [key, p] : tables_.dependency) {
    words.insert(std::get<0>(key));
    words.insert(std::get<2>(key));
    rels.insert(std::get<1>(key));
  }
  std::map<std::string, std::set<std::string>> by_head;
  for (const auto& [key, p] : tables_.detail) {
    words.insert(std::get<0>(key));
    rels.insert(std::get<1>(key));
    by_head[std::get<0>(key)].insert(std::get<1>(key));
  }
  for (const auto& [seq, p] : tables_.sequencing) {
    for (const auto& label : seq) {
      if (label != kHeadMarker) rels.insert(label);
    }
  }
  for (auto& [head, set] : by_head) {
    head_relations_[head].assign(set.begin(), set.end());
  }
  relations_.assign(rels.begin(), rels.end());
  vocabulary_.assign(words.begin(), words.end());
}

double MonolingualModel::top_prob(const std::string& word) const {
  auto it = tables_.top.find(word);
  return it == tables_.top.end() ? 0.0 : it->second;
}

double MonolingualModel::dependency_prob(const std::string& head,
                                         const std::string& relation,
                                         const std::string& dependent) const {
  auto it = tables_.dependency.find({head, relation, dependent});
  return it == tables_.dependency.end() ? 0.0 : it->second;
}

double MonolingualModel::detail_prob(const std::string& head,
                                     const std::string& relation, int n) const {
  auto it = tables_.detail.find({head, relation, n});
  if (it != tables_.detail.end()) return it->second;
  // a (head, relation) pair with no entries is a deterministic zero count
  const auto& rels = detail_relations(head);
  if (!std::binary_search(rels.begin(), rels.end(), relation)) {
    return n == 0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double MonolingualModel::sequencing_prob(
    const std::vector<std::string>& sequence) const {
  auto it = tables_.sequencing.find(sequence);
  if (it != tables_.sequencing.end()) return it->second;
  // the singleton sequence admits exactly one order, so its probability
  // is forced to one even when the table omits it
  if (sequence.size() == 1 && sequence[0] == kHeadMarker) return 1.0;
  return 0.0;
}

const std::vector<std::string>& MonolingualModel::detail_relations(
    const std::string& head) const {
  static const std::vector<std::string> kNone;
  auto it = head_relations_.find(head);
  return it == head_relations_.end() ? kNone : it->second;
}

std::vector<std::string> MonolingualModel::normalization_issues(
    double tolerance) const {
  std::vector<std::string> issues;
  auto check = [&](const std::string& what, double sum) {
    if (std::abs(sum - 1.0) > tolerance) {
      issues.push_back(what + " sums to " + std::to_string(sum));
    }
  };

  double top_sum = 0.0;
  for (const auto& [word, p] : tables_.top) top_sum += p;
  if (!tables_.top.empty()) check("top distribution", top_sum);

  std::map<std::pair<std::string, std::string>, double> dep_sums;
  for (const auto& [key, p] : tables_.dependency) {
    dep_sums[{std::get<0>(key), std::get<1>(key)}] += p;
  }
  for (const auto& [key, sum] : dep_sums) {
    check("dependency(" + key.first + "," + key.second + ")", sum);
  }

  std::map<std::pair<std::string, std::string>, double> det_sums;
  for (const auto& [key, p] : tables_.detail) {
    if (std::get<2>(key) < 0 || std::get<2>(key) > tables_.n_max) {
      issues.push_back("detail(" + std::get<0>(key) + "," + std::get<1>(key) +
                       ") has count outside 0..n_max");
    }
    det_sums[{std::get<0>(key), std::get<1>(key)}] += p;
  }
  for (const auto& [key, sum] : det_sums) {
    check("detail(" + key.first + "," + key.second + ")", sum);
  }

  std::map<LabelMultiset, double> seq_sums;
  for (const auto& [seq, p] : tables_.sequencing) {
    seq_sums[sequence_multiset(seq)] += p;
  }
  for (const auto& [multiset, sum] : seq_sums) {
    check("sequencing(" + to_string(multiset) + ")", sum);
  }
  return issues;
}

long long distinct_orderings(const std::vector<std::string>& dependent_words) {
  std::map<std::string, int> multiplicity;
  for (const auto& word : dependent_words) ++multiplicity[word];
  long long result = 1;
  long long placed = 0;
  for (const auto& [word, m] : multiplicity) {
    for (long long j = 1; j <= m; ++j) {
      result = result * (placed + j) / j;  // running binomial, exact
    }
    placed += m;
  }
  return result;
}

namespace {

std::map<std::string, std::vector<std::string>> dependents_by_relation(
    const std::vector<RelationEdge>& edges) {
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& edge : edges) groups[edge.relation].push_back(edge.dependent.word);
  return groups;
}

double log_score_expansion(const WordOccurrence& head,
                           const std::vector<RelationEdge>& edges,
                           const MonolingualModel& m) {
  for (const auto& edge : edges) {
    if (edge.head != head) {
      throw Error(ErrorKind::kNodeMismatch,
                  "edge " + to_string(edge) + " is not headed by " + to_string(head));
    }
  }
  auto groups = dependents_by_relation(edges);
  std::set<std::string> relations;
  for (const auto& [rel, words] : groups) relations.insert(rel);
  for (const auto& rel : m.detail_relations(head.word)) relations.insert(rel);

  double log_p = 0.0;
  for (const auto& rel : relations) {
    auto it = groups.find(rel);
    int n = it == groups.end() ? 0 : static_cast<int>(it->second.size());
    double detail = m.detail_prob(head.word, rel, n);
    if (detail == 0.0) return kLogZero;
    log_p += std::log(detail);
    if (n == 0) continue;
    log_p += std::log(static_cast<double>(distinct_orderings(it->second)));
    for (const auto& word : it->second) {
      double dep = m.dependency_prob(head.word, rel, word);
      if (dep == 0.0) return kLogZero;
      log_p += std::log(dep);
    }
  }
  return log_p;
}

}  // namespace

double score_expansion(const WordOccurrence& head,
                       const std::vector<RelationEdge>& edges,
                       const MonolingualModel& m) {
  return prob_from_log(log_score_expansion(head, edges, m));
}

double log_score_content(const RelationTree& tree, const MonolingualModel& m) {
  double top = m.top_prob(tree.root().word);
  if (top == 0.0) return kLogZero;
  double log_p = std::log(top);
  for (const auto& node : tree.nodes()) {
    double expansion = log_score_expansion(node, tree.out_edges(node), m);
    if (expansion == kLogZero) return kLogZero;
    log_p += expansion;
  }
  return log_p;
}

double score_content(const RelationTree& tree, const MonolingualModel& m) {
  return prob_from_log(log_score_content(tree, m));
}

std::vector<std::string> Linearization::sequence(
    const WordOccurrence& head) const {
  std::vector<std::string> labels;
  auto it = local_orders.find(head);
  if (it == local_orders.end()) return labels;
  for (const auto& slot : it->second) labels.push_back(slot.label);
  return labels;
}

Linearization induced_sequences(const std::vector<WordOccurrence>& order,
                                const RelationTree& tree) {
  std::vector<WordOccurrence> sorted = order;
  std::sort(sorted.begin(), sorted.end(),
            [](const WordOccurrence& a, const WordOccurrence& b) {
              return a.index < b.index;
            });
  if (sorted != tree.nodes()) {
    throw Error(ErrorKind::kNodeMismatch,
                "word order is not a permutation of the tree's occurrences");
  }

  std::map<WordOccurrence, int> position;
  for (std::size_t i = 0; i < order.size(); ++i) {
    position[order[i]] = static_cast<int>(i);
  }

  struct Span {
    int lo, hi, count;
  };
  std::map<WordOccurrence, Span> spans;
  struct Walker {
    const RelationTree& tree;
    const std::map<WordOccurrence, int>& position;
    std::map<WordOccurrence, Span>& spans;
    Span at(const WordOccurrence& occ) const {
      int pos = position.at(occ);
      Span span{pos, pos, 1};
      for (const auto& edge : tree.out_edges(occ)) {
        Span child = at(edge.dependent);
        span.lo = std::min(span.lo, child.lo);
        span.hi = std::max(span.hi, child.hi);
        span.count += child.count;
      }
      if (span.hi - span.lo + 1 != span.count) {
        throw Error(ErrorKind::kNonProjective,
                    "subtree of " + to_string(occ) +
                        " does not occupy a contiguous span");
      }
      spans[occ] = span;
      return span;
    }
  };
  Walker{tree, position, spans}.at(tree.root());

  Linearization lin;
  for (const auto& node : tree.nodes()) {
    std::vector<std::pair<int, SequenceSlot>> items;
    items.push_back({position.at(node), {kHeadMarker, node}});
    for (const auto& edge : tree.out_edges(node)) {
      items.push_back({spans.at(edge.dependent).lo,
                       {edge.relation, edge.dependent}});
    }
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<SequenceSlot> slots;
    for (auto& [pos, slot] : items) slots.push_back(std::move(slot));
    lin.local_orders.emplace(node, std::move(slots));
  }
  return lin;
}

double log_score_ordering(const std::vector<WordOccurrence>& order,
                          const RelationTree& tree, const MonolingualModel& m) {
  Linearization lin = induced_sequences(order, tree);
  double log_p = 0.0;
  for (const auto& node : tree.nodes()) {
    double seq = m.sequencing_prob(lin.sequence(node));
    if (seq == 0.0) return kLogZero;
    log_p += std::log(seq);
    for (const auto& [rel, words] : dependents_by_relation(tree.out_edges(node))) {
      log_p -= std::log(static_cast<double>(distinct_orderings(words)));
    }
  }
  return log_p;
}

double score_ordering(const std::vector<WordOccurrence>& order,
                      const RelationTree& tree, const MonolingualModel& m) {
  return prob_from_log(log_score_ordering(order, tree, m));
}

namespace {

// Canonical index-blind serialization of a subtree; equal signatures mean
// the subtrees are interchangeable in every word string.
std::string subtree_signature(const RelationTree& tree,
                              const WordOccurrence& occ) {
  std::vector<std::string> parts;
  for (const auto& edge : tree.out_edges(occ)) {
    parts.push_back(edge.relation + "=" + subtree_signature(tree, edge.dependent));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = occ.word + "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + ")";
}

struct LinPart {
  std::vector<WordOccurrence> order;
  double log_prob;
};

std::vector<LinPart> linearize_subtree(const RelationTree& tree,
                                       const WordOccurrence& head,
                                       const MonolingualModel& m) {
  const auto& edges = tree.out_edges(head);

  std::map<std::string, std::vector<WordOccurrence>> groups;
  for (const auto& edge : edges) groups[edge.relation].push_back(edge.dependent);

  // distinct slot fillings per relation: permutations that only swap
  // non-interchangeable subtrees (equal signatures stay in index order)
  std::vector<std::string> group_order;
  std::vector<std::vector<std::vector<WordOccurrence>>> arrangements;
  double log_k = 0.0;
  for (const auto& [rel, occs] : groups) {
    std::vector<std::string> words;
    for (const auto& occ : occs) words.push_back(occ.word);
    log_k += std::log(static_cast<double>(distinct_orderings(words)));

    std::vector<std::pair<std::string, WordOccurrence>> tagged;
    for (const auto& occ : occs) {
      tagged.push_back({subtree_signature(tree, occ), occ});
    }
    std::sort(tagged.begin(), tagged.end());
    auto sig_less = [](const auto& a, const auto& b) { return a.first < b.first; };
    std::vector<std::vector<WordOccurrence>> arr;
    do {
      std::vector<WordOccurrence> one;
      for (const auto& [sig, occ] : tagged) one.push_back(occ);
      arr.push_back(std::move(one));
    } while (std::next_permutation(tagged.begin(), tagged.end(), sig_less));
    group_order.push_back(rel);
    arrangements.push_back(std::move(arr));
  }

  std::map<WordOccurrence, std::vector<LinPart>> sub;
  for (const auto& edge : edges) {
    sub.emplace(edge.dependent, linearize_subtree(tree, edge.dependent, m));
  }

  std::vector<std::string> labels{kHeadMarker};
  for (const auto& [rel, occs] : groups) {
    labels.insert(labels.end(), occs.size(), rel);
  }
  std::sort(labels.begin(), labels.end());

  std::vector<LinPart> result;
  do {
    double log_seq = log_from_prob(m.sequencing_prob(labels));
    // odometer over per-relation arrangements
    std::vector<std::size_t> pick(arrangements.size(), 0);
    while (true) {
      // fill slots left to right from each relation's arrangement
      std::map<std::string, std::size_t> cursor;
      std::vector<const WordOccurrence*> slot_occ;
      for (const auto& label : labels) {
        if (label == kHeadMarker) {
          slot_occ.push_back(&head);
          continue;
        }
        std::size_t g = std::find(group_order.begin(), group_order.end(), label) -
                        group_order.begin();
        slot_occ.push_back(&arrangements[g][pick[g]][cursor[label]++]);
      }
      // odometer over dependent sub-linearizations
      std::vector<std::size_t> choice(labels.size(), 0);
      while (true) {
        LinPart part;
        part.log_prob = log_seq - log_k;
        for (std::size_t s = 0; s < labels.size(); ++s) {
          if (labels[s] == kHeadMarker) {
            part.order.push_back(head);
            continue;
          }
          const LinPart& piece = sub.at(*slot_occ[s])[choice[s]];
          part.order.insert(part.order.end(), piece.order.begin(),
                            piece.order.end());
          part.log_prob += piece.log_prob;
        }
        result.push_back(std::move(part));
        std::size_t s = 0;
        for (; s < labels.size(); ++s) {
          if (labels[s] == kHeadMarker) continue;
          if (++choice[s] < sub.at(*slot_occ[s]).size()) break;
          choice[s] = 0;
        }
        if (s == labels.size()) break;
      }
      std::size_t g = 0;
      for (; g < arrangements.size(); ++g) {
        if (++pick[g] < arrangements[g].size()) break;
        pick[g] = 0;
      }
      if (g == arrangements.size()) break;
    }
  } while (std::next_permutation(labels.begin(), labels.end()));

  return result;
}

}  // namespace

std::vector<ScoredString> enumerate_linearizations(const RelationTree& tree,
                                                   const MonolingualModel& m,
                                                   int max_nodes) {
  if (tree.empty()) {
    throw Error(ErrorKind::kNodeMismatch, "cannot linearize an empty tree");
  }
  if (static_cast<int>(tree.size()) > max_nodes) {
    throw Error(ErrorKind::kTooLarge,
                "tree has " + std::to_string(tree.size()) +
                    " nodes, enumeration bound is " + std::to_string(max_nodes));
  }
  std::map<std::vector<std::string>, double> by_string;
  for (const auto& part : linearize_subtree(tree, tree.root(), m)) {
    std::vector<std::string> words;
    for (const auto& occ : part.order) words.push_back(occ.word);
    by_string[words] += prob_from_log(part.log_prob);
  }
  std::vector<ScoredString> result;
  for (auto& [words, prob] : by_string) {
    result.push_back({words, prob});
  }
  return result;
}

namespace {

// Exhaustive projective tree enumeration over a fixed occurrence order.
class TreeEnumerator {
 public:
  TreeEnumerator(std::vector<WordOccurrence> occs, const MonolingualModel& m)
      : occs_(std::move(occs)), m_(m) {}

  std::vector<std::vector<RelationEdge>> all_trees() {
    std::vector<std::vector<RelationEdge>> result;
    int n = static_cast<int>(occs_.size());
    for (int p = 0; p < n; ++p) {
      if (m_.top_prob(occs_[p].word) == 0.0) continue;
      for (auto& edges : span_trees(0, n - 1, p)) {
        result.push_back(std::move(edges));
      }
    }
    return result;
  }

 private:
  using EdgeSets = std::vector<std::vector<RelationEdge>>;

  const EdgeSets& span_trees(int lo, int hi, int p) {
    auto key = std::make_tuple(lo, hi, p);
    auto it = tree_memo_.find(key);
    if (it != tree_memo_.end()) return it->second;
    EdgeSets result;
    for (const auto& left : cover(lo, p - 1, p)) {
      for (const auto& right : cover(p + 1, hi, p)) {
        std::vector<RelationEdge> edges = left;
        edges.insert(edges.end(), right.begin(), right.end());
        result.push_back(std::move(edges));
      }
    }
    return tree_memo_.emplace(key, std::move(result)).first->second;
  }

  // all ways to cover [lo,hi] with consecutive dependent subtrees whose
  // heads attach to the occurrence at `head_pos`
  const EdgeSets& cover(int lo, int hi, int head_pos) {
    auto key = std::make_tuple(lo, hi, head_pos);
    auto it = cover_memo_.find(key);
    if (it != cover_memo_.end()) return it->second;
    EdgeSets result;
    if (lo > hi) {
      result.push_back({});
      return cover_memo_.emplace(key, std::move(result)).first->second;
    }
    for (int cut = lo; cut <= hi; ++cut) {
      for (int q = lo; q <= cut; ++q) {
        for (const auto& rel : m_.relation_alphabet()) {
          if (m_.dependency_prob(occs_[head_pos].word, rel, occs_[q].word) == 0.0) {
            continue;
          }
          RelationEdge attach{rel, occs_[head_pos], occs_[q]};
          for (const auto& sub : span_trees(lo, cut, q)) {
            for (const auto& rest : cover(cut + 1, hi, head_pos)) {
              std::vector<RelationEdge> edges{attach};
              edges.insert(edges.end(), sub.begin(), sub.end());
              edges.insert(edges.end(), rest.begin(), rest.end());
              result.push_back(std::move(edges));
            }
          }
        }
      }
    }
    return cover_memo_.emplace(key, std::move(result)).first->second;
  }

  std::vector<WordOccurrence> occs_;
  const MonolingualModel& m_;
  std::map<std::tuple<int, int, int>, EdgeSets> tree_memo_;
  std::map<std::tuple<int, int, int>, EdgeSets> cover_memo_;
};

}  // namespace

std::vector<Analysis> analyses(const std::vector<std::string>& words,
                               const MonolingualModel& m, int max_nodes) {
  if (static_cast<int>(words.size()) > max_nodes) {
    throw Error(ErrorKind::kTooLarge,
                "string has " + std::to_string(words.size()) +
                    " tokens, enumeration bound is " + std::to_string(max_nodes));
  }
  std::vector<Analysis> result;
  if (words.empty()) return result;

  std::vector<WordOccurrence> occs;
  for (std::size_t i = 0; i < words.size(); ++i) {
    occs.push_back({words[i], static_cast<int>(i) + 1});
  }

  TreeEnumerator enumerator(occs, m);
  for (const auto& edges : enumerator.all_trees()) {
    RelationTree tree = validate_tree(occs, edges);
    double log_content = log_score_content(tree, m);
    if (log_content == kLogZero) continue;
    double log_ordering = log_score_ordering(occs, tree, m);
    if (log_ordering == kLogZero) continue;
    result.push_back({std::move(tree), log_content, log_ordering,
                      log_content + log_ordering});
  }
  std::sort(result.begin(), result.end(), [](const Analysis& a, const Analysis& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    return to_string(a.tree) < to_string(b.tree);
  });
  return result;
}

double score_sentence(const std::vector<std::string>& words,
                      const MonolingualModel& m, int max_nodes) {
  double log_total = kLogZero;
  for (const auto& analysis : analyses(words, m, max_nodes)) {
    log_total = log_add(log_total, analysis.log_prob);
  }
  return prob_from_log(log_total);
}

std::vector<std::pair<RelationTree, double>> parse(
    const std::vector<std::string>& words, const MonolingualModel& m,
    std::size_t k, int max_nodes) {
  std::vector<std::pair<RelationTree, double>> result;
  for (const auto& analysis : analyses(words, m, max_nodes)) {
    if (result.size() >= k) break;
    result.push_back({analysis.tree, prob_from_log(analysis.log_prob)});
  }
  return result;
}

}  // namespace depmt
