#include "depmt/sampling.hpp"

#include <algorithm>
#include <random>

namespace depmt {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  // positive weight bounded away from zero
  double weight() { return 0.05 + unit(); }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 rng_;
};

template <typename Key, typename Table>
void set_normalized(Table& table, const std::vector<Key>& keys, Draw& draw) {
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    weights.push_back(draw.weight());
    total += weights.back();
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    table[keys[i]] = weights[i] / total;
  }
}

// all multisets over the relations with at most n_max of each
void collect_multisets(const std::vector<std::string>& relations, int n_max,
                       std::size_t at, LabelMultiset& current,
                       std::vector<LabelMultiset>& out) {
  if (at == relations.size()) {
    out.push_back(current);
    return;
  }
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) current.add(relations[at], n);
    collect_multisets(relations, n_max, at + 1, current, out);
    if (n > 0) current.add(relations[at], -n);
  }
}

}  // namespace

MonolingualModel random_monolingual_model(std::uint64_t seed,
                                          const std::vector<std::string>& vocab,
                                          const std::vector<std::string>& relations,
                                          int n_max) {
  Draw draw(seed);
  MonolingualTables tables;
  tables.n_max = n_max;

  set_normalized(tables.top, vocab, draw);
  for (const auto& head : vocab) {
    for (const auto& rel : relations) {
      std::vector<std::tuple<std::string, std::string, std::string>> dep_keys;
      for (const auto& word : vocab) dep_keys.push_back({head, rel, word});
      set_normalized(tables.dependency, dep_keys, draw);
      std::vector<std::tuple<std::string, std::string, int>> det_keys;
      for (int n = 0; n <= n_max; ++n) det_keys.push_back({head, rel, n});
      set_normalized(tables.detail, det_keys, draw);
    }
  }

  std::vector<LabelMultiset> multisets;
  LabelMultiset scratch;
  scratch.add(kHeadMarker);
  collect_multisets(relations, n_max, 0, scratch, multisets);
  for (const auto& multiset : multisets) {
    set_normalized(tables.sequencing, multiset.distinct_permutations(), draw);
  }
  return MonolingualModel(std::move(tables));
}

TransferInstance random_transfer_instance(std::uint64_t seed, int max_edges) {
  Draw draw(seed);
  const std::vector<std::string> src_vocab{"sa", "sb", "sc"};
  const std::vector<std::string> tgt_vocab{"ta", "tb", "tc"};
  const std::vector<std::string> src_rels{"r", "s"};
  const std::vector<std::string> tgt_rels{"u", "v"};

  // random source tree: node i attaches to an earlier node
  int n_edges = 1 + static_cast<int>(draw.pick(static_cast<std::size_t>(max_edges)));
  int n_nodes = n_edges + 1;
  std::vector<WordOccurrence> nodes;
  for (int i = 0; i < n_nodes; ++i) {
    nodes.push_back({src_vocab[draw.pick(src_vocab.size())], i + 1});
  }
  std::vector<RelationEdge> edges;
  for (int i = 1; i < n_nodes; ++i) {
    int parent = static_cast<int>(draw.pick(static_cast<std::size_t>(i)));
    edges.push_back({src_rels[draw.pick(src_rels.size())], nodes[parent], nodes[i]});
  }
  TransferInstance instance;
  instance.source = validate_tree(nodes, edges);

  TransferTables tables;

  // lexical rows: every source word gets one single-word multiset, often a
  // second option (another word, a pair, or the empty multiset)
  for (const auto& word : src_vocab) {
    std::vector<std::pair<std::string, std::vector<std::string>>> keys;
    keys.push_back({word, {tgt_vocab[draw.pick(tgt_vocab.size())]}});
    if (draw.chance(0.6)) {
      if (draw.chance(0.3)) {
        keys.push_back({word, {}});
      } else if (draw.chance(0.3)) {
        std::vector<std::string> pair{tgt_vocab[draw.pick(tgt_vocab.size())],
                                      tgt_vocab[draw.pick(tgt_vocab.size())]};
        std::sort(pair.begin(), pair.end());
        keys.push_back({word, pair});
      } else {
        keys.push_back({word, {tgt_vocab[draw.pick(tgt_vocab.size())]}});
      }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    set_normalized(tables.lexical, keys, draw);
  }

  // rules per distinct partition shape of the source tree: a faithful
  // relabeled copy plus random distractors
  std::map<std::string, std::vector<RelationEdge>> shapes;
  for (const auto& node : instance.source.nodes()) {
    const auto& out = instance.source.out_edges(node);
    if (out.empty()) continue;
    std::vector<std::string> labels;
    for (const auto& e : out) labels.push_back(e.relation);
    std::sort(labels.begin(), labels.end());
    std::string key;
    for (const auto& l : labels) key += l + ",";
    shapes.emplace(key, out);
  }
  auto relabel = [&](const std::string& rel) {
    return rel == "r" ? tgt_rels[0] : tgt_rels[1];
  };
  for (const auto& [key, local] : shapes) {
    std::vector<StructuralRule> rules;

    StructuralRule faithful;
    std::vector<std::string> src_shape_nodes{"s0"};
    std::vector<UnlabeledEdge> src_shape_edges;
    std::vector<std::string> tgt_shape_nodes{"t0"};
    std::vector<UnlabeledEdge> tgt_shape_edges;
    faithful.node_alignment["t0"] = "s0";
    for (std::size_t i = 0; i < local.size(); ++i) {
      std::string s = "s" + std::to_string(i + 1);
      std::string t = "t" + std::to_string(i + 1);
      src_shape_nodes.push_back(s);
      tgt_shape_nodes.push_back(t);
      src_shape_edges.push_back({local[i].relation, "s0", s});
      tgt_shape_edges.push_back({relabel(local[i].relation), "t0", t});
      faithful.node_alignment[t] = s;
    }
    faithful.source_shape = UnlabeledGraph(src_shape_nodes, src_shape_edges);
    faithful.target_shape = UnlabeledGraph(tgt_shape_nodes, tgt_shape_edges);
    rules.push_back(faithful);

    int extras = static_cast<int>(draw.pick(3));
    for (int x = 0; x < extras; ++x) {
      StructuralRule rule;
      rule.source_shape = UnlabeledGraph(src_shape_nodes, src_shape_edges);
      // distractor targets: drop the last edge, or chain the dependents,
      // or relabel with the other target relation
      std::vector<std::string> t_nodes{"t0"};
      std::vector<UnlabeledEdge> t_edges;
      rule.node_alignment.clear();
      rule.node_alignment["t0"] = "s0";
      std::size_t kind = draw.pick(3);
      std::size_t keep = kind == 0 && local.size() > 1 ? local.size() - 1
                                                       : local.size();
      std::string attach = "t0";
      for (std::size_t i = 0; i < keep; ++i) {
        std::string t = "t" + std::to_string(i + 1);
        t_nodes.push_back(t);
        std::string rel = kind == 2 ? tgt_rels[draw.pick(tgt_rels.size())]
                                    : relabel(local[i].relation);
        t_edges.push_back({rel, kind == 1 ? attach : "t0", t});
        rule.node_alignment[t] = "s" + std::to_string(i + 1);
        attach = t;
      }
      rule.target_shape = UnlabeledGraph(t_nodes, t_edges);
      rules.push_back(rule);
    }

    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      weights.push_back(draw.weight());
      total += weights.back();
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
      rules[i].probability = weights[i] / total;
      tables.rules.push_back(rules[i]);
    }
  }
  instance.model = TransferModel(std::move(tables));
  return instance;
}

}  // namespace depmt
