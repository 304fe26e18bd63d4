#include <functional>
#include <algorithm>
#include <random>

#include "depmt/graph.hpp"
#include "doctest.h"

using namespace depmt;

namespace {

WordOccurrence occ(const std::string& word, int index) { return {word, index}; }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::kMalformedInput;
}

// small random tree for property checks: node i attaches to a random
// earlier node
RelationTree random_tree(std::mt19937& rng, int n) {
  std::vector<std::string> words{"a", "b", "c", "d"};
  std::vector<std::string> rels{"r", "s", "t"};
  std::vector<WordOccurrence> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back(occ(words[rng() % words.size()], i + 1));
  }
  std::vector<RelationEdge> edges;
  for (int i = 1; i < n; ++i) {
    int parent = static_cast<int>(rng() % i);
    edges.push_back({rels[rng() % rels.size()], nodes[parent], nodes[i]});
  }
  return validate_tree(nodes, edges);
}

}  // namespace

TEST_CASE("validate_tree accepts the smallest nontrivial tree") {
  auto tree = validate_tree({occ("sees", 1), occ("john", 2)},
                            {{"subj", occ("sees", 1), occ("john", 2)}});
  CHECK(tree.root() == occ("sees", 1));
  CHECK(tree.edges().size() == 1);
}

TEST_CASE("validate_tree accepts a single node") {
  auto tree = validate_tree({occ("a", 1)}, {});
  CHECK(tree.root() == occ("a", 1));
  CHECK(tree.edges().empty());
  CHECK(tree.depth() == 0);
}

TEST_CASE("validate_tree rejects a two-cycle") {
  auto kind = kind_of([] {
    validate_tree({occ("a", 1), occ("b", 2)},
                  {{"r", occ("a", 1), occ("b", 2)}, {"r", occ("b", 2), occ("a", 1)}});
  });
  CHECK(kind == ErrorKind::kCycle);
}

TEST_CASE("validate_tree names the right failure") {
  CHECK(kind_of([] {
          validate_tree({occ("a", 1), occ("b", 2), occ("c", 3)},
                        {{"r", occ("a", 1), occ("c", 3)}, {"r", occ("b", 2), occ("c", 3)}});
        }) == ErrorKind::kMultipleHeads);
  CHECK(kind_of([] {
          validate_tree({occ("a", 1), occ("b", 2)}, {});
        }) == ErrorKind::kDisconnectedNode);
  CHECK(kind_of([] {
          validate_tree({occ("a", 1), occ("b", 2), occ("c", 3), occ("d", 4)},
                        {{"r", occ("a", 1), occ("b", 2)}, {"r", occ("c", 3), occ("d", 4)}});
        }) == ErrorKind::kMultipleRoots);
  CHECK(kind_of([] {
          validate_tree({occ("a", 1), occ("a", 1)}, {});
        }) == ErrorKind::kDuplicateIndex);
  CHECK(kind_of([] {
          validate_tree({occ("a", 1), occ("b", 2)},
                        {{"e", occ("a", 1), occ("b", 2)}});
        }) == ErrorKind::kReservedLabel);
  // unreachable cycle next to a valid root
  CHECK(kind_of([] {
          validate_tree({occ("a", 1), occ("b", 2), occ("c", 3)},
                        {{"r", occ("b", 2), occ("c", 3)}, {"r", occ("c", 3), occ("b", 2)}});
        }) == ErrorKind::kCycle);
}

TEST_CASE("trees with permuted sibling storage compare equal") {
  std::vector<RelationEdge> edges{{"subj", occ("sees", 1), occ("john", 2)},
                                  {"obj", occ("sees", 1), occ("mary", 3)}};
  auto a = validate_tree({occ("sees", 1), occ("john", 2), occ("mary", 3)}, edges);
  std::reverse(edges.begin(), edges.end());
  auto b = validate_tree({occ("mary", 3), occ("sees", 1), occ("john", 2)}, edges);
  CHECK(a == b);
  CHECK(to_string(a) == to_string(b));
}

TEST_CASE("local_edges returns exactly the edges headed by a node") {
  auto tree = validate_tree({occ("sees", 1), occ("john", 2), occ("mary", 3)},
                            {{"subj", occ("sees", 1), occ("john", 2)},
                             {"obj", occ("sees", 1), occ("mary", 3)}});
  CHECK(local_edges(tree, occ("sees", 1)).size() == 2);
  CHECK(local_edges(tree, occ("john", 2)).empty());
  CHECK(kind_of([&] { local_edges(tree, occ("eats", 9)); }) ==
        ErrorKind::kNodeNotInTree);
}

TEST_CASE("local edge counts add up to the edge count") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto tree = random_tree(rng, 1 + static_cast<int>(rng() % 7));
    std::size_t total = 0;
    for (const auto& node : tree.nodes()) {
      total += local_edges(tree, node).size();
    }
    CHECK(total == tree.edges().size());
  }
}

TEST_CASE("sequence_multiset counts labels") {
  auto m = sequence_multiset({"subj", "e", "obj"});
  CHECK(m.count("subj") == 1);
  CHECK(m.count("e") == 1);
  CHECK(m.count("obj") == 1);
  CHECK(m.total() == 3);

  CHECK(sequence_multiset({"e"}).total() == 1);
  CHECK(kind_of([] { sequence_multiset({"subj", "obj"}); }) ==
        ErrorKind::kMissingHeadMarker);
  CHECK(kind_of([] { sequence_multiset({"e", "e"}); }) ==
        ErrorKind::kDuplicateHeadMarker);
}

TEST_CASE("all permutations of a sequence share one multiset") {
  std::vector<std::string> seq{"subj", "e", "obj"};
  std::sort(seq.begin(), seq.end());
  auto expected = sequence_multiset(seq);
  do {
    CHECK(sequence_multiset(seq) == expected);
  } while (std::next_permutation(seq.begin(), seq.end()));
  CHECK(expected.distinct_permutations().size() == 6);
}

TEST_CASE("isomorphisms finds the unique match") {
  UnlabeledGraph g({"x", "y"}, {{"subj", "x", "y"}});
  auto result = isomorphisms(g, {{"subj", occ("sees", 1), occ("john", 2)}});
  REQUIRE(result.size() == 1);
  CHECK(result[0].at("x") == occ("sees", 1));
  CHECK(result[0].at("y") == occ("john", 2));
}

TEST_CASE("isomorphisms respects labels") {
  UnlabeledGraph g({"x", "y"}, {{"subj", "x", "y"}});
  CHECK(isomorphisms(g, {{"obj", occ("sees", 1), occ("mary", 3)}}).empty());
}

TEST_CASE("isomorphisms enumerates interchangeable nodes") {
  UnlabeledGraph g({"x", "y", "z"}, {{"r", "x", "y"}, {"r", "x", "z"}});
  std::vector<RelationEdge> h{{"r", occ("a", 1), occ("b", 2)},
                              {"r", occ("a", 1), occ("c", 3)}};
  auto result = isomorphisms(g, h);
  CHECK(result.size() == 2);

  // oracle: filter all bijections by the iff condition directly
  std::vector<WordOccurrence> occs{occ("a", 1), occ("b", 2), occ("c", 3)};
  std::sort(occs.begin(), occs.end());
  std::vector<std::string> shape_nodes{"x", "y", "z"};
  int oracle_count = 0;
  do {
    std::map<std::string, WordOccurrence> map;
    for (std::size_t i = 0; i < 3; ++i) map.emplace(shape_nodes[i], occs[i]);
    auto has_shape_edge = [&](const std::string& rel, const std::string& a,
                              const std::string& b) {
      for (const auto& e : g.edges()) {
        if (e.relation == rel && e.from == a && e.to == b) return true;
      }
      return false;
    };
    bool ok = true;
    for (const auto& e : g.edges()) {
      RelationEdge mapped{e.relation, map.at(e.from), map.at(e.to)};
      if (std::find(h.begin(), h.end(), mapped) == h.end()) ok = false;
    }
    for (const auto& e : h) {
      bool found = false;
      for (const auto& [sa, oa] : map) {
        for (const auto& [sb, ob] : map) {
          if (oa == e.head && ob == e.dependent && has_shape_edge(e.relation, sa, sb)) {
            found = true;
          }
        }
      }
      if (!found) ok = false;
    }
    if (ok) ++oracle_count;
  } while (std::next_permutation(occs.begin(), occs.end()));
  CHECK(oracle_count == 2);
}

TEST_CASE("isomorphism results are in lexicographic order of mapped indices") {
  UnlabeledGraph g({"x", "y", "z"}, {{"r", "x", "y"}, {"r", "x", "z"}});
  std::vector<RelationEdge> h{{"r", occ("a", 1), occ("b", 2)},
                              {"r", occ("a", 1), occ("c", 3)}};
  auto result = isomorphisms(g, h);
  REQUIRE(result.size() == 2);
  CHECK(result[0].at("y") == occ("b", 2));
  CHECK(result[1].at("y") == occ("c", 3));
}

TEST_CASE("alignment inverse images partition the target nodes") {
  Alignment f;
  f.set(occ("jean", 1), occ("john", 1));
  f.set(occ("voit", 2), occ("sees", 2));
  f.set(occ("bien", 4), occ("sees", 2));
  CHECK(f.inverse_image(occ("sees", 2)).size() == 2);
  CHECK(f.inverse_image(occ("john", 1)).size() == 1);
  CHECK(f.inverse_image(occ("mary", 3)).empty());
  CHECK(f.source_of(occ("jean", 1)) == occ("john", 1));
}

TEST_CASE("unlabeled graph recognizes local-tree shapes") {
  CHECK(UnlabeledGraph({"s0", "s1", "s2"},
                       {{"subj", "s0", "s1"}, {"obj", "s0", "s2"}})
            .is_local_tree());
  CHECK_FALSE(UnlabeledGraph({"s0", "s1", "s2"},
                             {{"r", "s0", "s1"}, {"s", "s1", "s2"}})
                  .is_local_tree());
  CHECK_FALSE(UnlabeledGraph({"s0"}, {}).is_local_tree());
}
