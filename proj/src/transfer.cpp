#include "depmt/transfer.hpp"

#include <algorithm>
#include <set>

#include "depmt/logprob.hpp"

namespace depmt {

namespace {

std::string serialize_shape(const UnlabeledGraph& shape,
                            const std::map<std::string, std::string>& rename) {
  std::vector<std::string> parts;
  for (const auto& edge : shape.edges()) {
    parts.push_back(edge.relation + "(" + rename.at(edge.from) + "," +
                    rename.at(edge.to) + ")");
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ";";
    out += parts[i];
  }
  return out.empty() ? "-" : out;
}

std::string serialize_alignment_map(
    const std::map<std::string, std::string>& alignment,
    const std::map<std::string, std::string>& target_rename,
    const std::map<std::string, std::string>& source_rename) {
  std::vector<std::string> parts;
  for (const auto& [t, s] : alignment) {
    parts.push_back(target_rename.at(t) + ">" + source_rename.at(s));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out.empty() ? "-" : out;
}

std::string serialize_edges(const std::vector<RelationEdge>& edges) {
  std::vector<std::string> parts;
  for (const auto& edge : edges) parts.push_back(to_string(edge));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + ";";
  return out;
}

void validate_rule(const StructuralRule& rule) {
  if (!rule.source_shape.is_local_tree()) {
    throw Error(ErrorKind::kMalformedInput,
                "rule source shape is not a local tree: " +
                    to_string(rule.source_shape));
  }
  for (const auto& node : rule.target_shape.nodes()) {
    auto it = rule.node_alignment.find(node);
    if (it == rule.node_alignment.end()) {
      throw Error(ErrorKind::kMalformedInput,
                  "rule alignment is not total: no image for " + node);
    }
    bool known = std::find(rule.source_shape.nodes().begin(),
                           rule.source_shape.nodes().end(),
                           it->second) != rule.source_shape.nodes().end();
    if (!known) {
      throw Error(ErrorKind::kMalformedInput,
                  "rule alignment maps " + node + " to unknown node " + it->second);
    }
  }
  if (rule.node_alignment.size() != rule.target_shape.nodes().size()) {
    throw Error(ErrorKind::kMalformedInput,
                "rule alignment mentions nodes outside the target shape");
  }
  // no isolated nodes: every target node is an edge endpoint, unless the
  // shape is completely empty
  std::set<std::string> touched;
  for (const auto& edge : rule.target_shape.edges()) {
    touched.insert(edge.from);
    touched.insert(edge.to);
  }
  if (touched.size() != rule.target_shape.nodes().size()) {
    throw Error(ErrorKind::kMalformedInput,
                "rule target shape has isolated nodes");
  }
}

}  // namespace

StructuralRule canonicalize_rule(const StructuralRule& rule) {
  validate_rule(rule);

  const auto& src = rule.source_shape;
  const std::string root = src.edges().front().from;

  // source renamings: root is s0; dependents ordered by edge label, with
  // same-label dependents permutable
  std::vector<std::pair<std::string, std::string>> deps;  // (label, node)
  for (const auto& edge : src.edges()) deps.push_back({edge.relation, edge.to});
  std::sort(deps.begin(), deps.end());

  std::vector<std::string> tgt_nodes = rule.target_shape.nodes();
  std::sort(tgt_nodes.begin(), tgt_nodes.end());

  bool have_best = false;
  std::tuple<std::string, std::string, std::string> best;
  std::map<std::string, std::string> best_src_rename, best_tgt_rename;

  auto label_only = [](const std::pair<std::string, std::string>& a,
                       const std::pair<std::string, std::string>& b) {
    return a.first < b.first;
  };
  do {
    std::map<std::string, std::string> src_rename{{root, "s0"}};
    for (std::size_t i = 0; i < deps.size(); ++i) {
      src_rename[deps[i].second] = "s" + std::to_string(i + 1);
    }
    std::vector<std::string> tgt_perm = tgt_nodes;
    std::sort(tgt_perm.begin(), tgt_perm.end());
    do {
      std::map<std::string, std::string> tgt_rename;
      for (std::size_t i = 0; i < tgt_perm.size(); ++i) {
        tgt_rename[tgt_perm[i]] = "t" + std::to_string(i);
      }
      auto candidate = std::make_tuple(
          serialize_shape(src, src_rename),
          serialize_shape(rule.target_shape, tgt_rename),
          serialize_alignment_map(rule.node_alignment, tgt_rename, src_rename));
      if (!have_best || candidate < best) {
        have_best = true;
        best = candidate;
        best_src_rename = src_rename;
        best_tgt_rename = tgt_rename;
      }
    } while (std::next_permutation(tgt_perm.begin(), tgt_perm.end()));
  } while (std::next_permutation(deps.begin(), deps.end(), label_only));

  StructuralRule out;
  std::vector<std::string> src_nodes;
  std::vector<UnlabeledEdge> src_edges;
  for (const auto& [old_name, new_name] : best_src_rename) src_nodes.push_back(new_name);
  for (const auto& edge : src.edges()) {
    src_edges.push_back({edge.relation, best_src_rename.at(edge.from),
                         best_src_rename.at(edge.to)});
  }
  out.source_shape = UnlabeledGraph(std::move(src_nodes), std::move(src_edges));

  std::vector<std::string> new_tgt_nodes;
  std::vector<UnlabeledEdge> new_tgt_edges;
  for (const auto& [old_name, new_name] : best_tgt_rename) {
    new_tgt_nodes.push_back(new_name);
  }
  for (const auto& edge : rule.target_shape.edges()) {
    new_tgt_edges.push_back({edge.relation, best_tgt_rename.at(edge.from),
                             best_tgt_rename.at(edge.to)});
  }
  out.target_shape = UnlabeledGraph(std::move(new_tgt_nodes), std::move(new_tgt_edges));

  for (const auto& [t, s] : rule.node_alignment) {
    out.node_alignment[best_tgt_rename.at(t)] = best_src_rename.at(s);
  }
  out.probability = rule.probability;
  return out;
}

std::string rule_identity(const StructuralRule& rule) {
  std::map<std::string, std::string> id_src, id_tgt;
  for (const auto& n : rule.source_shape.nodes()) id_src[n] = n;
  for (const auto& n : rule.target_shape.nodes()) id_tgt[n] = n;
  return serialize_shape(rule.source_shape, id_src) + "|" +
         serialize_shape(rule.target_shape, id_tgt) + "|" +
         serialize_alignment_map(rule.node_alignment, id_tgt, id_src);
}

std::string source_shape_key(const UnlabeledGraph& shape) {
  std::map<std::string, std::string> rename;
  const std::string root = shape.edges().empty() ? "" : shape.edges().front().from;
  std::vector<std::pair<std::string, std::string>> deps;
  for (const auto& edge : shape.edges()) deps.push_back({edge.relation, edge.to});
  std::sort(deps.begin(), deps.end());
  rename[root] = "s0";
  for (std::size_t i = 0; i < deps.size(); ++i) {
    rename[deps[i].second] = "s" + std::to_string(i + 1);
  }
  return serialize_shape(shape, rename);
}

TransferModel::TransferModel(TransferTables tables)
    : lexical_(std::move(tables.lexical)) {
  // normalize lexical keys to sorted multisets
  std::map<std::pair<std::string, std::vector<std::string>>, double> fixed;
  for (auto& [key, p] : lexical_) {
    auto sorted_key = key;
    std::sort(sorted_key.second.begin(), sorted_key.second.end());
    fixed[sorted_key] += p;
  }
  lexical_ = std::move(fixed);
  for (const auto& [key, p] : lexical_) {
    entries_[key.first].push_back({key.second, p});
  }

  // canonicalize rules, merge structural duplicates, sort by identity
  std::map<std::string, StructuralRule> by_identity;
  for (const auto& rule : tables.rules) {
    StructuralRule canonical = canonicalize_rule(rule);
    std::string id = rule_identity(canonical);
    auto [it, fresh] = by_identity.emplace(id, canonical);
    if (!fresh) it->second.probability += canonical.probability;
  }
  std::set<std::string> labels;
  for (auto& [id, rule] : by_identity) {
    for (const auto& edge : rule.target_shape.edges()) labels.insert(edge.relation);
    rules_.push_back(std::move(rule));
  }
  target_labels_.assign(labels.begin(), labels.end());
}

double TransferModel::lexical_prob(const std::string& word,
                                   std::vector<std::string> multiset) const {
  std::sort(multiset.begin(), multiset.end());
  auto it = lexical_.find({word, multiset});
  return it == lexical_.end() ? 0.0 : it->second;
}

const std::vector<std::pair<std::vector<std::string>, double>>&
TransferModel::lexical_entries(const std::string& word) const {
  static const std::vector<std::pair<std::vector<std::string>, double>> kNone;
  auto it = entries_.find(word);
  return it == entries_.end() ? kNone : it->second;
}

std::vector<std::string> TransferModel::normalization_issues(
    double tolerance) const {
  std::vector<std::string> issues;
  std::map<std::string, double> lex_sums;
  for (const auto& [key, p] : lexical_) lex_sums[key.first] += p;
  for (const auto& [word, sum] : lex_sums) {
    if (std::abs(sum - 1.0) > tolerance) {
      issues.push_back("lexical(" + word + ") sums to " + std::to_string(sum));
    }
  }
  std::map<std::string, double> rule_sums;
  for (const auto& rule : rules_) {
    rule_sums[source_shape_key(rule.source_shape)] += rule.probability;
  }
  for (const auto& [shape, sum] : rule_sums) {
    if (std::abs(sum - 1.0) > tolerance) {
      issues.push_back("rules(" + shape + ") sum to " + std::to_string(sum));
    }
  }
  return issues;
}

std::vector<std::vector<RelationEdge>> partition_source(
    const RelationTree& source) {
  std::vector<std::vector<RelationEdge>> partitions;
  for (const auto& node : source.nodes()) {
    const auto& out = source.out_edges(node);
    if (!out.empty()) partitions.push_back(out);
  }
  // nodes() is ordered by index, so partitions are ordered by head index
  return partitions;
}

double lexical_score(const Alignment& f,
                     const std::vector<WordOccurrence>& source_nodes,
                     const std::vector<WordOccurrence>& target_nodes,
                     const TransferModel& tm) {
  std::set<WordOccurrence> sources(source_nodes.begin(), source_nodes.end());
  std::map<WordOccurrence, std::vector<std::string>> image_words;
  for (const auto& target : target_nodes) {
    const WordOccurrence& source = f.source_of(target);
    if (!sources.count(source)) {
      throw Error(ErrorKind::kNodeMismatch,
                  "alignment maps " + to_string(target) +
                      " outside the source node set");
    }
    image_words[source].push_back(target.word);
  }
  double log_p = 0.0;
  for (const auto& source : source_nodes) {
    auto it = image_words.find(source);
    double p = tm.lexical_prob(
        source.word, it == image_words.end() ? std::vector<std::string>{}
                                             : it->second);
    if (p == 0.0) return 0.0;
    log_p += std::log(p);
  }
  return prob_from_log(log_p);
}

std::vector<TransferStep> applicable_steps(
    const std::vector<RelationEdge>& source_local, const Alignment& f,
    const std::vector<WordOccurrence>& target_nodes, const TransferModel& tm) {
  std::vector<TransferStep> steps;
  std::set<std::pair<std::size_t, std::string>> seen;

  std::vector<WordOccurrence> targets = target_nodes;
  std::sort(targets.begin(), targets.end());

  for (std::size_t rule_index = 0; rule_index < tm.rules().size(); ++rule_index) {
    const StructuralRule& rule = tm.rules()[rule_index];
    for (const auto& source_match : isomorphisms(rule.source_shape, source_local)) {
      // candidates per target shape node: target occurrences aligned to
      // the source occurrence the rule requires (condition iii)
      const auto& shape_nodes = rule.target_shape.nodes();
      std::vector<std::vector<WordOccurrence>> candidates(shape_nodes.size());
      for (std::size_t i = 0; i < shape_nodes.size(); ++i) {
        const WordOccurrence& required =
            source_match.at(rule.node_alignment.at(shape_nodes[i]));
        for (const auto& target : targets) {
          if (f.has(target) && f.source_of(target) == required) {
            candidates[i].push_back(target);
          }
        }
      }
      // enumerate injective assignments
      std::vector<WordOccurrence> chosen(shape_nodes.size());
      std::set<WordOccurrence> used;
      std::function<void(std::size_t)> assign = [&](std::size_t i) {
        if (i == shape_nodes.size()) {
          std::map<WordOccurrence, std::string> target_match;
          std::vector<RelationEdge> produced;
          std::map<std::string, WordOccurrence> by_shape_node;
          for (std::size_t j = 0; j < shape_nodes.size(); ++j) {
            target_match[chosen[j]] = shape_nodes[j];
            by_shape_node[shape_nodes[j]] = chosen[j];
          }
          for (const auto& edge : rule.target_shape.edges()) {
            produced.push_back({edge.relation, by_shape_node.at(edge.from),
                                by_shape_node.at(edge.to)});
          }
          std::sort(produced.begin(), produced.end());
          if (!seen.insert({rule_index, serialize_edges(produced)}).second) {
            return;  // same rule, same produced edges: one step
          }
          steps.push_back({rule_index, source_match, std::move(target_match),
                           std::move(produced), rule.probability});
          return;
        }
        for (const auto& target : candidates[i]) {
          if (used.count(target)) continue;
          used.insert(target);
          chosen[i] = target;
          assign(i + 1);
          used.erase(target);
        }
      };
      assign(0);
    }
  }
  std::sort(steps.begin(), steps.end(),
            [](const TransferStep& a, const TransferStep& b) {
              if (a.rule_index != b.rule_index) return a.rule_index < b.rule_index;
              return serialize_edges(a.target_edges) < serialize_edges(b.target_edges);
            });
  return steps;
}

namespace {

void check_transfer_sizes(const RelationTree& target, const RelationTree& source,
                          int max_nodes) {
  if (static_cast<int>(source.size()) > max_nodes ||
      static_cast<int>(target.size()) > max_nodes) {
    throw Error(ErrorKind::kTooLarge,
                "transfer instance exceeds the enumeration bound of " +
                    std::to_string(max_nodes) + " nodes per side");
  }
}

// enumerate alignments recursively; target word must occur in some
// positive lexical multiset of the candidate source word
void for_each_alignment(const std::vector<WordOccurrence>& target_nodes,
                        const std::vector<WordOccurrence>& source_nodes,
                        const TransferModel& tm,
                        const std::function<void(const Alignment&)>& yield) {
  std::vector<std::vector<const WordOccurrence*>> candidates(target_nodes.size());
  for (std::size_t i = 0; i < target_nodes.size(); ++i) {
    for (const auto& source : source_nodes) {
      bool feasible = false;
      for (const auto& [multiset, p] : tm.lexical_entries(source.word)) {
        if (p > 0.0 && std::find(multiset.begin(), multiset.end(),
                                 target_nodes[i].word) != multiset.end()) {
          feasible = true;
          break;
        }
      }
      if (feasible) candidates[i].push_back(&source);
    }
    if (candidates[i].empty()) return;  // no alignment has nonzero mass
  }
  Alignment f;
  std::function<void(std::size_t)> fill = [&](std::size_t i) {
    if (i == target_nodes.size()) {
      yield(f);
      return;
    }
    for (const WordOccurrence* source : candidates[i]) {
      f.set(target_nodes[i], *source);
      fill(i + 1);
    }
  };
  fill(0);
}

}  // namespace

std::vector<TransferDerivation> enumerate_derivations(const RelationTree& target,
                                                      const RelationTree& source,
                                                      const TransferModel& tm,
                                                      int max_nodes) {
  check_transfer_sizes(target, source, max_nodes);
  std::vector<TransferDerivation> derivations;
  const auto partitions = partition_source(source);
  const std::vector<RelationEdge>& target_edges = target.edges();

  for_each_alignment(target.nodes(), source.nodes(), tm, [&](const Alignment& f) {
    double lex = lexical_score(f, source.nodes(), target.nodes(), tm);
    if (lex == 0.0) return;

    std::vector<std::vector<TransferStep>> usable(partitions.size());
    std::set<RelationEdge> edge_set(target_edges.begin(), target_edges.end());
    for (std::size_t i = 0; i < partitions.size(); ++i) {
      for (auto& step : applicable_steps(partitions[i], f, target.nodes(), tm)) {
        bool inside = std::all_of(
            step.target_edges.begin(), step.target_edges.end(),
            [&](const RelationEdge& e) { return edge_set.count(e) > 0; });
        if (inside && step.probability > 0.0) usable[i].push_back(std::move(step));
      }
      if (usable[i].empty()) return;  // some partition cannot fire
    }

    // exact cover of the target edge set, one step per partition
    std::vector<const TransferStep*> picked(partitions.size(), nullptr);
    std::function<void(std::size_t, std::set<RelationEdge>&)> walk =
        [&](std::size_t i, std::set<RelationEdge>& remaining) {
          if (i == partitions.size()) {
            if (!remaining.empty()) return;
            TransferDerivation derivation;
            derivation.alignment = f;
            derivation.lexical = lex;
            double log_structural = 0.0;
            for (std::size_t j = 0; j < partitions.size(); ++j) {
              derivation.steps.push_back({partitions[j], *picked[j]});
              log_structural += std::log(picked[j]->probability);
            }
            derivation.structural = prob_from_log(log_structural);
            derivations.push_back(std::move(derivation));
            return;
          }
          for (const TransferStep& step : usable[i]) {
            bool free = std::all_of(
                step.target_edges.begin(), step.target_edges.end(),
                [&](const RelationEdge& e) { return remaining.count(e) > 0; });
            if (!free) continue;
            for (const auto& e : step.target_edges) remaining.erase(e);
            picked[i] = &step;
            walk(i + 1, remaining);
            for (const auto& e : step.target_edges) remaining.insert(e);
          }
        };
    walk(0, edge_set);
  });
  return derivations;
}

double score_translation(const RelationTree& target, const RelationTree& source,
                         const TransferModel& tm, int max_nodes) {
  double log_total = kLogZero;
  for (const auto& derivation : enumerate_derivations(target, source, tm, max_nodes)) {
    log_total = log_add(log_total, log_from_prob(derivation.lexical) +
                                       log_from_prob(derivation.structural));
  }
  return prob_from_log(log_total);
}

std::vector<TranslationCandidate> translate(const RelationTree& source,
                                            const TransferModel& tm,
                                            std::size_t k, int max_nodes,
                                            TransferDiagnostics* diagnostics) {
  if (static_cast<int>(source.size()) > max_nodes) {
    throw Error(ErrorKind::kTooLarge,
                "source tree exceeds the enumeration bound of " +
                    std::to_string(max_nodes) + " nodes");
  }
  const auto partitions = partition_source(source);

  // one lexical option list per source node, in index order
  std::vector<const std::vector<std::pair<std::vector<std::string>, double>>*>
      options;
  for (const auto& node : source.nodes()) {
    options.push_back(&tm.lexical_entries(node.word));
    if (options.back()->empty()) return {};
  }

  std::map<std::pair<std::string, std::string>,
           std::pair<TranslationCandidate, double>>
      merged;  // (tree, alignment) serialization -> candidate with log prob

  std::vector<std::size_t> pick(options.size(), 0);
  while (true) {
    // instantiate target occurrences: source nodes in index order, words
    // of each multiset in sorted order, indices assigned sequentially
    std::vector<WordOccurrence> target_nodes;
    Alignment f;
    double log_lex = 0.0;
    bool feasible = true;
    int next_index = 1;
    for (std::size_t i = 0; i < options.size() && feasible; ++i) {
      const auto& [multiset, p] = (*options[i])[pick[i]];
      if (p == 0.0) {
        feasible = false;
        break;
      }
      log_lex += std::log(p);
      for (const auto& word : multiset) {
        WordOccurrence fresh{word, next_index++};
        target_nodes.push_back(fresh);
        f.set(fresh, source.nodes()[i]);
      }
    }
    if (feasible && static_cast<int>(target_nodes.size()) > max_nodes) {
      throw Error(ErrorKind::kTooLarge,
                  "a lexical choice yields " +
                      std::to_string(target_nodes.size()) +
                      " target nodes, over the bound of " +
                      std::to_string(max_nodes));
    }
    if (feasible && !target_nodes.empty()) {
      std::vector<std::vector<TransferStep>> steps(partitions.size());
      bool all_fire = true;
      for (std::size_t i = 0; i < partitions.size() && all_fire; ++i) {
        steps[i] = applicable_steps(partitions[i], f, target_nodes, tm);
        std::erase_if(steps[i],
                      [](const TransferStep& s) { return s.probability == 0.0; });
        all_fire = !steps[i].empty();
      }
      if (all_fire) {
        std::vector<std::size_t> choice(partitions.size(), 0);
        while (true) {
          std::set<RelationEdge> assembled;
          double log_structural = 0.0;
          bool disjoint = true;
          for (std::size_t i = 0; i < partitions.size() && disjoint; ++i) {
            const TransferStep& step = steps[i][choice[i]];
            log_structural += std::log(step.probability);
            for (const auto& edge : step.target_edges) {
              if (!assembled.insert(edge).second) disjoint = false;
            }
          }
          if (disjoint) {
            try {
              RelationTree tree = validate_tree(
                  target_nodes,
                  {assembled.begin(), assembled.end()});
              double log_prob = log_lex + log_structural;
              auto key = std::make_pair(to_string(tree), to_string(f));
              auto it = merged.find(key);
              if (it == merged.end()) {
                merged.emplace(key,
                               std::make_pair(
                                   TranslationCandidate{std::move(tree), f, 0.0},
                                   log_prob));
              } else {
                it->second.second = log_add(it->second.second, log_prob);
              }
            } catch (const Error&) {
              if (diagnostics) ++diagnostics->discarded_non_trees;
            }
          }
          std::size_t i = 0;
          for (; i < partitions.size(); ++i) {
            if (++choice[i] < steps[i].size()) break;
            choice[i] = 0;
          }
          if (i == partitions.size()) break;
        }
      }
    }
    std::size_t i = 0;
    for (; i < options.size(); ++i) {
      if (++pick[i] < options[i]->size()) break;
      pick[i] = 0;
    }
    if (i == options.size()) break;
  }

  std::vector<TranslationCandidate> result;
  for (auto& [key, entry] : merged) {
    entry.first.prob = prob_from_log(entry.second);
    result.push_back(std::move(entry.first));
  }
  std::sort(result.begin(), result.end(),
            [](const TranslationCandidate& a, const TranslationCandidate& b) {
              if (a.prob != b.prob) return a.prob > b.prob;
              auto ka = std::make_pair(to_string(a.tree), to_string(a.alignment));
              auto kb = std::make_pair(to_string(b.tree), to_string(b.alignment));
              return ka < kb;
            });
  if (result.size() > k) result.resize(k);
  return result;
}

}  // namespace depmt
