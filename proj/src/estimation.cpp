#include "depmt/estimation.hpp"

#include <algorithm>
#include <set>

namespace depmt {

namespace {

template <typename Key>
std::map<Key, double> normalize_counts(const std::map<Key, double>& counts) {
  double total = 0.0;
  for (const auto& [key, c] : counts) total += c;
  std::map<Key, double> probs;
  if (total <= 0.0) return probs;
  for (const auto& [key, c] : counts) {
    if (c > 0.0) probs[key] = c / total;
  }
  return probs;
}

}  // namespace

MonolingualModel estimate_monolingual(const std::vector<TreebankRecord>& corpus,
                                      double lambda, int n_max) {
  if (corpus.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "monolingual corpus is empty");
  }

  // first pass: vocabulary and the relation alphabet of each head word
  std::set<std::string> vocabulary;
  std::map<std::string, std::set<std::string>> head_relations;
  int observed_max = 0;
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    const TreebankRecord& record = corpus[r];
    try {
      induced_sequences(record.words, record.tree);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kNonProjective) {
        throw Error(ErrorKind::kNonProjective,
                    "record " + std::to_string(r + 1) + ": " + e.what());
      }
      throw;
    }
    for (const auto& node : record.tree.nodes()) {
      vocabulary.insert(node.word);
      std::map<std::string, int> counts;
      for (const auto& edge : record.tree.out_edges(node)) {
        head_relations[node.word].insert(edge.relation);
        ++counts[edge.relation];
      }
      for (const auto& [rel, n] : counts) observed_max = std::max(observed_max, n);
    }
  }
  if (n_max < 0) {
    n_max = std::max(observed_max, 1);
  } else if (observed_max > n_max) {
    throw Error(ErrorKind::kMalformedInput,
                "corpus contains " + std::to_string(observed_max) +
                    " same-relation dependents, over the requested cap of " +
                    std::to_string(n_max));
  }

  // second pass: counts
  std::map<std::string, double> top_counts;
  std::map<std::tuple<std::string, std::string, std::string>, double> dep_counts;
  std::map<std::tuple<std::string, std::string, int>, double> det_counts;
  std::map<std::vector<std::string>, double> seq_counts;
  for (const TreebankRecord& record : corpus) {
    top_counts[record.tree.root().word] += 1.0;
    Linearization lin = induced_sequences(record.words, record.tree);
    for (const auto& node : record.tree.nodes()) {
      std::map<std::string, int> counts;
      for (const auto& edge : record.tree.out_edges(node)) {
        dep_counts[{node.word, edge.relation, edge.dependent.word}] += 1.0;
        ++counts[edge.relation];
      }
      for (const auto& rel : head_relations[node.word]) {
        auto it = counts.find(rel);
        det_counts[{node.word, rel, it == counts.end() ? 0 : it->second}] += 1.0;
      }
      seq_counts[lin.sequence(node)] += 1.0;
    }
  }

  if (lambda > 0.0) {
    for (const auto& word : vocabulary) top_counts[word] += lambda;
    std::set<std::pair<std::string, std::string>> dep_pairs;
    for (const auto& [key, c] : dep_counts) {
      dep_pairs.insert({std::get<0>(key), std::get<1>(key)});
    }
    for (const auto& [head, rel] : dep_pairs) {
      for (const auto& word : vocabulary) dep_counts[{head, rel, word}] += lambda;
    }
    for (const auto& [head, rels] : head_relations) {
      for (const auto& rel : rels) {
        for (int n = 0; n <= n_max; ++n) det_counts[{head, rel, n}] += lambda;
      }
    }
    std::set<LabelMultiset> multisets;
    for (const auto& [seq, c] : seq_counts) multisets.insert(sequence_multiset(seq));
    for (const auto& multiset : multisets) {
      for (const auto& seq : multiset.distinct_permutations()) {
        seq_counts[seq] += lambda;
      }
    }
  }

  MonolingualTables tables;
  tables.n_max = n_max;
  tables.top = normalize_counts(top_counts);

  std::map<std::pair<std::string, std::string>,
           std::map<std::tuple<std::string, std::string, std::string>, double>>
      dep_groups;
  for (const auto& [key, c] : dep_counts) {
    dep_groups[{std::get<0>(key), std::get<1>(key)}][key] = c;
  }
  for (const auto& [group, counts] : dep_groups) {
    for (const auto& [key, p] : normalize_counts(counts)) {
      tables.dependency[key] = p;
    }
  }

  std::map<std::pair<std::string, std::string>,
           std::map<std::tuple<std::string, std::string, int>, double>>
      det_groups;
  for (const auto& [key, c] : det_counts) {
    det_groups[{std::get<0>(key), std::get<1>(key)}][key] = c;
  }
  for (const auto& [group, counts] : det_groups) {
    for (const auto& [key, p] : normalize_counts(counts)) {
      tables.detail[key] = p;
    }
  }

  std::map<LabelMultiset, std::map<std::vector<std::string>, double>> seq_groups;
  for (const auto& [seq, c] : seq_counts) {
    seq_groups[sequence_multiset(seq)][seq] = c;
  }
  for (const auto& [multiset, counts] : seq_groups) {
    for (const auto& [seq, p] : normalize_counts(counts)) {
      tables.sequencing[seq] = p;
    }
  }
  return MonolingualModel(std::move(tables));
}

namespace {

// Assigns every target edge of a record to one source partition: both
// endpoints must align into the partition's node set. When the shared
// source node is internal and not the root both its own partition and its
// parent's qualify; the partition headed at that node wins.
std::vector<std::vector<RelationEdge>> decompose_target_edges(
    const BitextRecord& record, std::size_t record_number,
    const std::vector<std::vector<RelationEdge>>& partitions) {
  std::vector<std::set<WordOccurrence>> partition_nodes(partitions.size());
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    for (const auto& edge : partitions[i]) {
      partition_nodes[i].insert(edge.head);
      partition_nodes[i].insert(edge.dependent);
    }
  }
  std::vector<std::vector<RelationEdge>> groups(partitions.size());
  for (const auto& edge : record.target.tree.edges()) {
    const WordOccurrence& head_src = record.alignment.source_of(edge.head);
    const WordOccurrence& dep_src = record.alignment.source_of(edge.dependent);
    std::vector<std::size_t> hosts;
    for (std::size_t i = 0; i < partitions.size(); ++i) {
      if (partition_nodes[i].count(head_src) && partition_nodes[i].count(dep_src)) {
        hosts.push_back(i);
      }
    }
    if (hosts.empty()) {
      throw Error(ErrorKind::kUndecomposableRecord,
                  "record " + std::to_string(record_number) + ": target edge " +
                      to_string(edge) +
                      " spans source nodes outside every local tree");
    }
    std::size_t chosen = hosts[0];
    if (hosts.size() > 1) {
      // both endpoints align to one shared source node; prefer the
      // partition headed there
      for (std::size_t i : hosts) {
        if (partitions[i].front().head == head_src) chosen = i;
      }
    }
    groups[chosen].push_back(edge);
  }
  return groups;
}

StructuralRule induced_rule(const std::vector<RelationEdge>& source_part,
                            const std::vector<RelationEdge>& target_part,
                            const Alignment& alignment) {
  std::map<WordOccurrence, std::string> src_names, tgt_names;
  std::vector<std::string> src_nodes, tgt_nodes;
  std::vector<UnlabeledEdge> src_edges, tgt_edges;
  auto src_name = [&](const WordOccurrence& occ) {
    auto it = src_names.find(occ);
    if (it == src_names.end()) {
      it = src_names.emplace(occ, "s" + std::to_string(src_names.size())).first;
      src_nodes.push_back(it->second);
    }
    return it->second;
  };
  auto tgt_name = [&](const WordOccurrence& occ) {
    auto it = tgt_names.find(occ);
    if (it == tgt_names.end()) {
      it = tgt_names.emplace(occ, "t" + std::to_string(tgt_names.size())).first;
      tgt_nodes.push_back(it->second);
    }
    return it->second;
  };
  for (const auto& edge : source_part) {
    src_edges.push_back({edge.relation, src_name(edge.head), src_name(edge.dependent)});
  }
  for (const auto& edge : target_part) {
    tgt_edges.push_back({edge.relation, tgt_name(edge.head), tgt_name(edge.dependent)});
  }
  StructuralRule rule;
  rule.source_shape = UnlabeledGraph(std::move(src_nodes), std::move(src_edges));
  rule.target_shape = UnlabeledGraph(std::move(tgt_nodes), std::move(tgt_edges));
  for (const auto& [occ, name] : tgt_names) {
    rule.node_alignment[name] = src_names.at(alignment.source_of(occ));
  }
  rule.probability = 1.0;
  return canonicalize_rule(rule);
}

}  // namespace

TransferModel estimate_transfer(const std::vector<BitextRecord>& corpus,
                                double lambda) {
  if (corpus.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "bitext corpus is empty");
  }

  std::map<std::pair<std::string, std::vector<std::string>>, double> lex_counts;
  std::map<std::string, std::map<std::string, std::pair<StructuralRule, double>>>
      rule_counts;  // source shape key -> rule identity -> (rule, count)

  for (std::size_t r = 0; r < corpus.size(); ++r) {
    const BitextRecord& record = corpus[r];
    for (const auto& target : record.target.tree.nodes()) {
      if (!record.alignment.has(target)) {
        throw Error(ErrorKind::kMalformedInput,
                    "record " + std::to_string(r + 1) +
                        ": alignment is not total, no source for " +
                        to_string(target));
      }
      if (!record.source.tree.contains(record.alignment.source_of(target))) {
        throw Error(ErrorKind::kMalformedInput,
                    "record " + std::to_string(r + 1) + ": " + to_string(target) +
                        " aligns outside the source tree");
      }
    }
    for (const auto& source : record.source.tree.nodes()) {
      std::vector<std::string> image;
      for (const auto& target : record.alignment.inverse_image(source)) {
        image.push_back(target.word);
      }
      std::sort(image.begin(), image.end());
      lex_counts[{source.word, image}] += 1.0;
    }
    const auto partitions = partition_source(record.source.tree);
    const auto groups = decompose_target_edges(record, r + 1, partitions);
    for (std::size_t i = 0; i < partitions.size(); ++i) {
      StructuralRule rule = induced_rule(partitions[i], groups[i], record.alignment);
      std::string shape = source_shape_key(rule.source_shape);
      std::string id = rule_identity(rule);
      auto [it, fresh] = rule_counts[shape].emplace(id, std::make_pair(rule, 1.0));
      if (!fresh) it->second.second += 1.0;
    }
  }

  if (lambda > 0.0) {
    std::map<std::string, std::set<std::vector<std::string>>> multisets_by_word;
    for (const auto& [key, c] : lex_counts) {
      multisets_by_word[key.first].insert(key.second);
    }
    for (const auto& [word, multisets] : multisets_by_word) {
      for (const auto& multiset : multisets) lex_counts[{word, multiset}] += lambda;
    }
    for (auto& [shape, rules] : rule_counts) {
      for (auto& [id, entry] : rules) entry.second += lambda;
    }
  }

  TransferTables tables;
  std::map<std::string, std::map<std::pair<std::string, std::vector<std::string>>,
                                 double>>
      lex_groups;
  for (const auto& [key, c] : lex_counts) lex_groups[key.first][key] = c;
  for (const auto& [word, counts] : lex_groups) {
    for (const auto& [key, p] : normalize_counts(counts)) tables.lexical[key] = p;
  }
  for (const auto& [shape, rules] : rule_counts) {
    double total = 0.0;
    for (const auto& [id, entry] : rules) total += entry.second;
    for (const auto& [id, entry] : rules) {
      StructuralRule rule = entry.first;
      rule.probability = entry.second / total;
      tables.rules.push_back(std::move(rule));
    }
  }
  return TransferModel(std::move(tables));
}

std::vector<BitextRecord> reverse_bitext(const std::vector<BitextRecord>& corpus) {
  std::vector<BitextRecord> reversed;
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    const BitextRecord& record = corpus[r];
    BitextRecord out;
    out.source = record.target;
    out.target = record.source;
    std::set<WordOccurrence> seen;
    for (const auto& [target, source] : record.alignment.pairs()) {
      if (!seen.insert(source).second) {
        throw Error(ErrorKind::kMalformedInput,
                    "record " + std::to_string(r + 1) +
                        ": alignment is not a bijection, cannot reverse");
      }
      out.alignment.set(source, target);
    }
    if (seen.size() != record.source.words.size()) {
      throw Error(ErrorKind::kMalformedInput,
                  "record " + std::to_string(r + 1) +
                      ": alignment is not onto the source tokens, cannot reverse");
    }
    reversed.push_back(std::move(out));
  }
  return reversed;
}

}  // namespace depmt
