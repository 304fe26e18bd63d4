#include "depmt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

namespace depmt {

namespace {

// The oracles keep their own arithmetic helpers so that a defect in the
// main modules cannot cancel out here.

long long oracle_factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

long long oracle_arrangements(const std::vector<std::string>& words) {
  std::map<std::string, int> mult;
  for (const auto& w : words) ++mult[w];
  long long result = oracle_factorial(static_cast<int>(words.size()));
  for (const auto& [w, m] : mult) result /= oracle_factorial(m);
  return result;
}

// A tree over nodes 0..n-1: parent index (-1 for the root) plus the label
// of the edge to the parent.
struct FlatTree {
  std::vector<std::string> words;
  std::vector<int> parent;
  std::vector<std::string> label;
};

// every (parent function, labeling) that forms a tree
template <typename Fn>
void for_each_flat_tree(const std::vector<std::string>& words,
                        const std::vector<std::string>& labels, Fn&& yield) {
  int n = static_cast<int>(words.size());
  if (n == 0) return;
  std::vector<int> parent(n, -1);
  std::function<void(int)> choose_parent = [&](int i) {
    if (i == n) {
      int roots = 0;
      for (int v = 0; v < n; ++v) {
        if (parent[v] < 0) ++roots;
      }
      if (roots != 1) return;
      for (int v = 0; v < n; ++v) {
        int steps = 0, at = v;
        while (at >= 0 && steps <= n) {
          at = parent[at];
          ++steps;
        }
        if (steps > n) return;  // cycle
      }
      // label every non-root node's in-edge
      std::vector<int> edge_nodes;
      for (int v = 0; v < n; ++v) {
        if (parent[v] >= 0) edge_nodes.push_back(v);
      }
      std::vector<std::string> label(n);
      std::function<void(std::size_t)> choose_label = [&](std::size_t j) {
        if (j == edge_nodes.size()) {
          yield(FlatTree{words, parent, label});
          return;
        }
        for (const auto& rel : labels) {
          label[edge_nodes[j]] = rel;
          choose_label(j + 1);
        }
      };
      if (edge_nodes.empty()) {
        yield(FlatTree{words, parent, label});
      } else {
        choose_label(0);
      }
      return;
    }
    for (int p = -1; p < n; ++p) {
      if (p == i) continue;
      parent[i] = p;
      choose_parent(i + 1);
    }
  };
  choose_parent(0);
}

// direct expansion of the content formula
double flat_content(const FlatTree& t, const MonolingualModel& m) {
  int n = static_cast<int>(t.words.size());
  int root = -1;
  for (int v = 0; v < n; ++v) {
    if (t.parent[v] < 0) root = v;
  }
  double p = m.top_prob(t.words[root]);
  for (int h = 0; h < n && p > 0.0; ++h) {
    std::map<std::string, std::vector<std::string>> groups;
    for (int v = 0; v < n; ++v) {
      if (t.parent[v] == h) groups[t.label[v]].push_back(t.words[v]);
    }
    std::set<std::string> rels;
    for (const auto& [rel, deps] : groups) rels.insert(rel);
    for (const auto& rel : m.detail_relations(t.words[h])) rels.insert(rel);
    for (const auto& rel : rels) {
      auto it = groups.find(rel);
      if (it == groups.end()) {
        p *= m.detail_prob(t.words[h], rel, 0);
        continue;
      }
      p *= m.detail_prob(t.words[h], rel, static_cast<int>(it->second.size()));
      p *= static_cast<double>(oracle_arrangements(it->second));
      for (const auto& w : it->second) p *= m.dependency_prob(t.words[h], rel, w);
    }
  }
  return p;
}

// Direct expansion of the ordering formula for node v at position[v].
// With uniform_slots the per-relation divisor is n_r! (each assignment of
// dependents to same-label slots equally likely and counted separately);
// otherwise it is the word-multiset arrangement count, pairing with the
// arrangement factor of flat_content.
double flat_ordering(const FlatTree& t, const std::vector<int>& position,
                     const MonolingualModel& m, bool uniform_slots = false) {
  int n = static_cast<int>(t.words.size());
  // subtree position sets, contiguity check
  std::vector<std::vector<int>> members(n);
  for (int v = 0; v < n; ++v) {
    int at = v;
    while (at >= 0) {
      members[at].push_back(position[v]);
      at = t.parent[at];
    }
  }
  for (int v = 0; v < n; ++v) {
    auto lo = *std::min_element(members[v].begin(), members[v].end());
    auto hi = *std::max_element(members[v].begin(), members[v].end());
    if (hi - lo + 1 != static_cast<int>(members[v].size())) return 0.0;
  }
  double p = 1.0;
  for (int h = 0; h < n && p > 0.0; ++h) {
    std::vector<std::pair<int, std::string>> items;
    items.push_back({position[h], kHeadMarker});
    std::map<std::string, std::vector<std::string>> groups;
    for (int v = 0; v < n; ++v) {
      if (t.parent[v] != h) continue;
      int start = *std::min_element(members[v].begin(), members[v].end());
      items.push_back({start, t.label[v]});
      groups[t.label[v]].push_back(t.words[v]);
    }
    std::sort(items.begin(), items.end());
    std::vector<std::string> sequence;
    for (const auto& [pos, lab] : items) sequence.push_back(lab);
    p *= m.sequencing_prob(sequence);
    for (const auto& [rel, deps] : groups) {
      p /= static_cast<double>(
          uniform_slots ? oracle_factorial(static_cast<int>(deps.size()))
                        : oracle_arrangements(deps));
    }
  }
  return p;
}

RelationTree flat_to_relation_tree(const FlatTree& t) {
  std::vector<WordOccurrence> nodes;
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    nodes.push_back({t.words[i], static_cast<int>(i) + 1});
  }
  std::vector<RelationEdge> edges;
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    if (t.parent[i] >= 0) {
      edges.push_back({t.label[i], nodes[t.parent[i]], nodes[i]});
    }
  }
  return validate_tree(nodes, edges);
}

// brute-force labeled-graph match witness search for one derivation step
bool step_applies(const StructuralRule& rule,
                  const std::vector<RelationEdge>& source_part,
                  const std::vector<RelationEdge>& target_part,
                  const Alignment& f) {
  std::set<WordOccurrence> src_nodes_set, tgt_nodes_set;
  for (const auto& e : source_part) {
    src_nodes_set.insert(e.head);
    src_nodes_set.insert(e.dependent);
  }
  for (const auto& e : target_part) {
    tgt_nodes_set.insert(e.head);
    tgt_nodes_set.insert(e.dependent);
  }
  std::vector<WordOccurrence> src_nodes(src_nodes_set.begin(), src_nodes_set.end());
  std::vector<WordOccurrence> tgt_nodes(tgt_nodes_set.begin(), tgt_nodes_set.end());
  if (rule.source_shape.nodes().size() != src_nodes.size()) return false;
  if (rule.target_shape.nodes().size() != tgt_nodes.size()) return false;
  if (rule.source_shape.edges().size() != source_part.size()) return false;
  if (rule.target_shape.edges().size() != target_part.size()) return false;

  std::sort(src_nodes.begin(), src_nodes.end());
  do {
    std::map<std::string, WordOccurrence> h;  // shape node -> occurrence
    for (std::size_t i = 0; i < src_nodes.size(); ++i) {
      h.emplace(rule.source_shape.nodes()[i], src_nodes[i]);
    }
    bool src_ok = true;
    for (const auto& e : rule.source_shape.edges()) {
      RelationEdge mapped{e.relation, h.at(e.from), h.at(e.to)};
      if (std::find(source_part.begin(), source_part.end(), mapped) ==
          source_part.end()) {
        src_ok = false;
        break;
      }
    }
    if (!src_ok) continue;

    std::vector<WordOccurrence> tgt_perm = tgt_nodes;
    std::sort(tgt_perm.begin(), tgt_perm.end());
    do {
      std::map<WordOccurrence, std::string> g;  // occurrence -> shape node
      for (std::size_t i = 0; i < tgt_perm.size(); ++i) {
        g.emplace(tgt_perm[i], rule.target_shape.nodes()[i]);
      }
      bool tgt_ok = true;
      for (const auto& e : target_part) {
        bool found = false;
        for (const auto& se : rule.target_shape.edges()) {
          if (se.relation == e.relation && g.at(e.head) == se.from &&
              g.at(e.dependent) == se.to) {
            found = true;
          }
        }
        if (!found) {
          tgt_ok = false;
          break;
        }
      }
      if (!tgt_ok) continue;
      bool compatible = true;
      for (const auto& v : tgt_perm) {
        if (h.at(rule.node_alignment.at(g.at(v))) != f.source_of(v)) {
          compatible = false;
          break;
        }
      }
      if (compatible) return true;
    } while (std::next_permutation(tgt_perm.begin(), tgt_perm.end()));
  } while (std::next_permutation(src_nodes.begin(), src_nodes.end()));
  return false;
}

}  // namespace

double oracle_sentence_prob(const std::vector<std::string>& words,
                            const MonolingualModel& m) {
  if (words.size() > 5) {
    throw Error(ErrorKind::kTooLarge, "oracle handles at most 5 tokens");
  }
  double total = 0.0;
  std::vector<int> position(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) position[i] = static_cast<int>(i);
  for_each_flat_tree(words, m.relation_alphabet(), [&](const FlatTree& tree) {
    total += flat_content(tree, m) * flat_ordering(tree, position, m);
  });
  return total;
}

double oracle_translation_prob(const RelationTree& target,
                               const RelationTree& source,
                               const TransferModel& tm) {
  if (target.size() > 5 || source.size() > 5) {
    throw Error(ErrorKind::kTooLarge, "oracle handles at most 5 nodes per side");
  }
  // deterministic partitions: out-edges per internal source node
  std::vector<std::vector<RelationEdge>> partitions;
  for (const auto& node : source.nodes()) {
    std::vector<RelationEdge> part;
    for (const auto& e : source.edges()) {
      if (e.head == node) part.push_back(e);
    }
    if (!part.empty()) partitions.push_back(part);
  }
  const auto& tgt_nodes = target.nodes();
  const auto& src_nodes = source.nodes();
  const auto& tgt_edges = target.edges();

  double total = 0.0;
  std::vector<std::size_t> assign(tgt_nodes.size(), 0);
  while (true) {
    Alignment f;
    for (std::size_t i = 0; i < tgt_nodes.size(); ++i) {
      f.set(tgt_nodes[i], src_nodes[assign[i]]);
    }
    double lex = 1.0;
    for (const auto& s : src_nodes) {
      std::vector<std::string> image;
      for (const auto& [t, src] : f.pairs()) {
        if (src == s) image.push_back(t.word);
      }
      lex *= tm.lexical_prob(s.word, image);
    }
    if (lex > 0.0) {
      double structural = 0.0;
      if (partitions.empty()) {
        structural = tgt_edges.empty() ? 1.0 : 0.0;
      } else {
        std::vector<std::size_t> home(tgt_edges.size(), 0);
        while (true) {
          std::vector<std::vector<RelationEdge>> parts(partitions.size());
          for (std::size_t e = 0; e < tgt_edges.size(); ++e) {
            parts[home[e]].push_back(tgt_edges[e]);
          }
          double product = 1.0;
          for (std::size_t i = 0; i < partitions.size() && product > 0.0; ++i) {
            double rule_sum = 0.0;
            for (const auto& rule : tm.rules()) {
              if (step_applies(rule, partitions[i], parts[i], f)) {
                rule_sum += rule.probability;
              }
            }
            product *= rule_sum;
          }
          structural += product;
          std::size_t e = 0;
          for (; e < tgt_edges.size(); ++e) {
            if (++home[e] < partitions.size()) break;
            home[e] = 0;
          }
          if (e == tgt_edges.size()) break;
        }
      }
      total += lex * structural;
    }
    std::size_t i = 0;
    for (; i < tgt_nodes.size(); ++i) {
      if (++assign[i] < src_nodes.size()) break;
      assign[i] = 0;
    }
    if (i == tgt_nodes.size()) break;
  }
  return total;
}

namespace {

// shared exhaustive walk; accumulates marginals and per-string best chain
void oracle_chain_walk(const std::vector<RecognitionHypothesis>& hyps,
                       const MonolingualModel& src, const TransferModel& tm,
                       const MonolingualModel& tgt,
                       std::map<std::vector<std::string>, double>& marginals,
                       std::map<std::vector<std::string>, double>& chain_maxima) {
  long long work = 0;
  auto spend = [&]() {
    if (++work > 1000000) {
      throw Error(ErrorKind::kTooLarge, "oracle chain budget of 10^6 exceeded");
    }
  };

  for (const auto& hyp : hyps) {
    double acoustic = std::isinf(hyp.log_acoustic) && hyp.log_acoustic < 0
                          ? 0.0
                          : std::exp(hyp.log_acoustic);
    if (acoustic == 0.0) continue;
    std::vector<int> src_position(hyp.words.size());
    for (std::size_t i = 0; i < hyp.words.size(); ++i) {
      src_position[i] = static_cast<int>(i);
    }

    for_each_flat_tree(hyp.words, src.relation_alphabet(), [&](const FlatTree& s_tree) {
      spend();
      double content = flat_content(s_tree, src);
      if (content == 0.0) return;
      double ordering = flat_ordering(s_tree, src_position, src);
      if (ordering == 0.0) return;
      RelationTree c_s = flat_to_relation_tree(s_tree);

      // distinct candidate target word multisets from the lexical choices
      std::vector<const std::vector<std::pair<std::vector<std::string>, double>>*>
          options;
      for (const auto& node : c_s.nodes()) {
        options.push_back(&tm.lexical_entries(node.word));
        if (options.back()->empty()) return;
      }
      std::set<std::vector<std::string>> multisets;
      std::vector<std::size_t> pick(options.size(), 0);
      while (true) {
        std::vector<std::string> words;
        for (std::size_t i = 0; i < options.size(); ++i) {
          const auto& multiset = (*options[i])[pick[i]].first;
          words.insert(words.end(), multiset.begin(), multiset.end());
        }
        std::sort(words.begin(), words.end());
        if (!words.empty() && words.size() <= 5) multisets.insert(std::move(words));
        std::size_t i = 0;
        for (; i < options.size(); ++i) {
          if (++pick[i] < options[i]->size()) break;
          pick[i] = 0;
        }
        if (i == options.size()) break;
      }

      for (const auto& t_words : multisets) {
        for_each_flat_tree(t_words, tm.target_relation_labels(), [&](const FlatTree& t_tree) {
          spend();
          RelationTree c_t = flat_to_relation_tree(t_tree);
          double transfer = oracle_translation_prob(c_t, c_s, tm);
          if (transfer == 0.0) return;
          // all word orders: positions assigned by permutation, with the
          // uniform-slot divisor so every assignment counts separately
          int n = static_cast<int>(t_words.size());
          std::vector<int> perm(n);
          for (int i = 0; i < n; ++i) perm[i] = i;
          std::map<std::vector<std::string>, double> per_string;
          do {
            spend();
            double target_ordering = flat_ordering(t_tree, perm, tgt, true);
            if (target_ordering == 0.0) continue;
            std::vector<std::string> out(n);
            for (int v = 0; v < n; ++v) out[perm[v]] = t_tree.words[v];
            per_string[out] += target_ordering;
          } while (std::next_permutation(perm.begin(), perm.end()));
          for (const auto& [out, target_ordering] : per_string) {
            double chain = acoustic * content * ordering * transfer * target_ordering;
            marginals[out] += chain;
            auto it = chain_maxima.find(out);
            if (it == chain_maxima.end() || chain > it->second) {
              chain_maxima[out] = chain;
            }
          }
        });
      }
    });
  }
}

}  // namespace

std::map<std::vector<std::string>, double> oracle_decode(
    const std::vector<RecognitionHypothesis>& hyps, const MonolingualModel& src,
    const TransferModel& tm, const MonolingualModel& tgt) {
  std::map<std::vector<std::string>, double> marginals, chain_maxima;
  oracle_chain_walk(hyps, src, tm, tgt, marginals, chain_maxima);
  return marginals;
}

std::map<std::vector<std::string>, double> oracle_chain_maxima(
    const std::vector<RecognitionHypothesis>& hyps, const MonolingualModel& src,
    const TransferModel& tm, const MonolingualModel& tgt) {
  std::map<std::vector<std::string>, double> marginals, chain_maxima;
  oracle_chain_walk(hyps, src, tm, tgt, marginals, chain_maxima);
  return chain_maxima;
}

}  // namespace depmt
