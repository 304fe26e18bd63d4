#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "depmt/lm.hpp"
#include "depmt/logprob.hpp"
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

// point-mass model for "john sees mary": every referenced parameter is 1
MonolingualModel point_mass_svo() {
  MonolingualTables t;
  t.top["sees"] = 1.0;
  t.dependency[{"sees", "subj", "john"}] = 1.0;
  t.dependency[{"sees", "obj", "mary"}] = 1.0;
  t.detail[{"sees", "subj", 1}] = 1.0;
  t.detail[{"sees", "obj", 1}] = 1.0;
  t.sequencing[{"subj", "e", "obj"}] = 1.0;
  t.sequencing[{"e"}] = 1.0;
  return MonolingualModel(std::move(t));
}

RelationTree svo_tree() {
  return validate_tree({occ("john", 1), occ("sees", 2), occ("mary", 3)},
                       {{"subj", occ("sees", 2), occ("john", 1)},
                        {"obj", occ("sees", 2), occ("mary", 3)}});
}

}  // namespace

TEST_CASE("distinct_orderings counts ordered realizations") {
  CHECK(distinct_orderings({"john", "mary"}) == 2);
  CHECK(distinct_orderings({}) == 1);
  CHECK(distinct_orderings({"very", "very"}) == 1);
  CHECK(distinct_orderings({"a", "a", "b"}) == 3);
  CHECK(distinct_orderings({"a", "b", "c", "d"}) == 24);

  // oracle for the duplicate case: enumerate ordered pairs and count
  // distinct tuples realizing the multiset
  std::vector<std::pair<std::string, std::string>> tuples;
  for (std::string w1 : {"very", "mary"}) {
    for (std::string w2 : {"very", "mary"}) {
      std::vector<std::string> got{w1, w2};
      std::sort(got.begin(), got.end());
      if (got == std::vector<std::string>{"very", "very"}) tuples.push_back({w1, w2});
    }
  }
  CHECK(static_cast<long long>(tuples.size()) == distinct_orderings({"very", "very"}));
}

TEST_CASE("score_expansion multiplies detail, arrangement count and dependencies") {
  MonolingualTables t;
  t.detail[{"sees", "subj", 1}] = 1.0;
  t.detail[{"sees", "obj", 0}] = 1.0;
  t.dependency[{"sees", "subj", "john"}] = 0.5;
  MonolingualModel m(std::move(t));

  CHECK(score_expansion(occ("sees", 1), {{"subj", occ("sees", 1), occ("john", 2)}}, m) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("score_expansion of a leaf with default details is one") {
  MonolingualModel m(MonolingualTables{});
  CHECK(score_expansion(occ("john", 2), {}, m) == doctest::Approx(1.0));
}

TEST_CASE("score_expansion handles duplicate dependents") {
  MonolingualTables t;
  t.detail[{"sees", "obj", 2}] = 0.2;
  t.dependency[{"sees", "obj", "mary"}] = 0.5;
  MonolingualModel m(std::move(t));

  double got = score_expansion(occ("sees", 1),
                               {{"obj", occ("sees", 1), occ("mary", 2)},
                                {"obj", occ("sees", 1), occ("mary", 3)}},
                               m);
  CHECK(got == doctest::Approx(0.05).epsilon(1e-12));

  // generative oracle: draw an ordered pair of dependents, keep the draws
  // whose unordered outcome matches {mary, mary}
  double oracle = 0.0;
  for (std::string w1 : {"mary"}) {
    for (std::string w2 : {"mary"}) {
      oracle += 0.2 * 0.5 * 0.5 * (w1 == "mary" && w2 == "mary" ? 1.0 : 0.0);
    }
  }
  CHECK(got == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("score_content multiplies top and every expansion") {
  auto tree = svo_tree();
  CHECK(score_content(tree, point_mass_svo()) == doctest::Approx(1.0));

  MonolingualTables t;
  t.top["sees"] = 0.5;
  t.dependency[{"sees", "subj", "john"}] = 0.4;
  t.dependency[{"sees", "obj", "mary"}] = 0.3;
  t.detail[{"sees", "subj", 1}] = 1.0;
  t.detail[{"sees", "obj", 1}] = 1.0;
  MonolingualModel m(std::move(t));
  CHECK(score_content(tree, m) == doctest::Approx(0.06).epsilon(1e-12));
}

TEST_CASE("induced_sequences reads off per-head orders") {
  auto tree = svo_tree();
  auto lin = induced_sequences({occ("john", 1), occ("sees", 2), occ("mary", 3)}, tree);
  CHECK(lin.sequence(occ("sees", 2)) == std::vector<std::string>{"subj", "e", "obj"});
  CHECK(lin.sequence(occ("john", 1)) == std::vector<std::string>{"e"});
  CHECK(lin.sequence(occ("mary", 3)) == std::vector<std::string>{"e"});

  auto lin2 = induced_sequences({occ("sees", 2), occ("john", 1), occ("mary", 3)}, tree);
  CHECK(lin2.sequence(occ("sees", 2)) == std::vector<std::string>{"e", "subj", "obj"});
}

TEST_CASE("induced_sequences rejects split subtrees and wrong node sets") {
  auto chain = validate_tree({occ("a", 1), occ("b", 2), occ("c", 3)},
                             {{"r", occ("a", 1), occ("b", 2)},
                              {"s", occ("b", 2), occ("c", 3)}});
  CHECK(kind_of([&] {
          induced_sequences({occ("b", 2), occ("a", 1), occ("c", 3)}, chain);
        }) == ErrorKind::kNonProjective);
  CHECK(kind_of([&] {
          induced_sequences({occ("a", 1), occ("b", 2)}, chain);
        }) == ErrorKind::kNodeMismatch);
}

TEST_CASE("score_ordering multiplies sequencing parameters") {
  MonolingualTables t;
  t.sequencing[{"subj", "e", "obj"}] = 0.7;
  t.sequencing[{"e"}] = 1.0;
  MonolingualModel m(std::move(t));
  CHECK(score_ordering({occ("john", 1), occ("sees", 2), occ("mary", 3)},
                       svo_tree(), m) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("score_ordering with identical-word dependents has no arrangement penalty") {
  auto tree = validate_tree({occ("very", 1), occ("very", 2), occ("x", 3)},
                            {{"mod", occ("x", 3), occ("very", 1)},
                             {"mod", occ("x", 3), occ("very", 2)}});
  MonolingualTables t;
  t.sequencing[{"mod", "mod", "e"}] = 0.6;
  MonolingualModel m(std::move(t));
  double got = score_ordering({occ("very", 1), occ("very", 2), occ("x", 3)}, tree, m);
  CHECK(got == doctest::Approx(0.6).epsilon(1e-12));

  // each distinct word string is produced exactly once
  auto strings = enumerate_linearizations(tree, m);
  CHECK(strings.size() == 3);
  for (const auto& s : strings) {
    if (s.words == std::vector<std::string>{"very", "very", "x"}) {
      CHECK(s.prob == doctest::Approx(0.6).epsilon(1e-12));
    }
  }
}

TEST_CASE("ordering probabilities of a tree sum to one under complete tables") {
  // full sequencing table over {subj, e, obj}
  MonolingualTables t;
  LabelMultiset m3;
  m3.add("subj");
  m3.add("obj");
  m3.add("e");
  double weight = 0.0;
  int i = 1;
  for (const auto& seq : m3.distinct_permutations()) {
    t.sequencing[seq] = i;
    weight += i;
    ++i;
  }
  for (auto& [seq, p] : t.sequencing) p /= weight;
  t.sequencing[{"e"}] = 1.0;
  MonolingualModel m(std::move(t));

  auto strings = enumerate_linearizations(svo_tree(), m);
  CHECK(strings.size() == 6);
  double total = 0.0;
  for (const auto& s : strings) total += s.prob;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("enumerate_linearizations bounds and trivial cases") {
  MonolingualModel m(MonolingualTables{});
  auto single = validate_tree({occ("a", 1)}, {});
  auto result = enumerate_linearizations(single, m);
  REQUIRE(result.size() == 1);
  CHECK(result[0].words == std::vector<std::string>{"a"});
  CHECK(result[0].prob == doctest::Approx(1.0));

  // 9-node chain exceeds the default bound
  std::vector<WordOccurrence> nodes;
  std::vector<RelationEdge> edges;
  for (int i = 1; i <= 9; ++i) nodes.push_back(occ("w", i));
  for (int i = 1; i < 9; ++i) edges.push_back({"r", nodes[i - 1], nodes[i]});
  auto big = validate_tree(nodes, edges);
  CHECK(kind_of([&] { enumerate_linearizations(big, m); }) == ErrorKind::kTooLarge);
}

TEST_CASE("score_sentence keeps only derivations the tables license") {
  auto m = point_mass_svo();
  CHECK(score_sentence({"john", "sees", "mary"}, m) == doctest::Approx(1.0));
  // the same tree cannot yield verb-initial order under this table
  CHECK(score_sentence({"sees", "john", "mary"}, m) == doctest::Approx(0.0));
}

TEST_CASE("parse returns the point-mass tree") {
  auto m = point_mass_svo();
  auto result = parse({"john", "sees", "mary"}, m, 1);
  REQUIRE(result.size() == 1);
  CHECK(result[0].first == svo_tree());
  CHECK(result[0].second == doctest::Approx(1.0));

  auto more = parse({"john", "sees", "mary"}, m, 50);
  CHECK(more.size() == 1);  // k beyond the nonzero trees shortens the list
}

TEST_CASE("analyses are storage-order invariant") {
  auto m = point_mass_svo();
  auto a = analyses({"john", "sees", "mary"}, m);
  REQUIRE(a.size() == 1);
  // every reported factor pair recombines to the total
  CHECK(a[0].log_prob == doctest::Approx(a[0].log_content + a[0].log_ordering));
}

TEST_CASE("generation and analysis round trip") {
  MonolingualTables t;
  t.top["v"] = 1.0;
  t.dependency[{"v", "subj", "n"}] = 0.6;
  t.dependency[{"v", "subj", "m"}] = 0.4;
  t.dependency[{"v", "obj", "m"}] = 1.0;
  t.detail[{"v", "subj", 1}] = 0.7;
  t.detail[{"v", "subj", 0}] = 0.3;
  t.detail[{"v", "obj", 1}] = 1.0;
  t.sequencing[{"subj", "e", "obj"}] = 0.5;
  t.sequencing[{"e", "subj", "obj"}] = 0.25;
  t.sequencing[{"subj", "obj", "e"}] = 0.25;
  t.sequencing[{"e", "obj"}] = 1.0;
  t.sequencing[{"e"}] = 1.0;
  MonolingualModel m(std::move(t));

  auto tree = validate_tree({occ("n", 1), occ("v", 2), occ("m", 3)},
                            {{"subj", occ("v", 2), occ("n", 1)},
                             {"obj", occ("v", 2), occ("m", 3)}});
  double content = score_content(tree, m);
  CHECK(content > 0.0);
  for (const auto& scored : enumerate_linearizations(tree, m)) {
    if (scored.prob == 0.0) continue;
    bool found = false;
    for (const auto& [candidate, prob] : parse(scored.words, m, 1000)) {
      // compare up to re-indexing by surface position
      if (to_string(candidate.root()).substr(0, 1) != to_string(tree.root()).substr(0, 1)) {
        continue;
      }
      std::map<int, std::string> words_at;
      bool same_shape = candidate.edges().size() == tree.edges().size();
      if (!same_shape) continue;
      // match by (head word, relation, dependent word) multiset
      auto key = [](const RelationTree& tr) {
        std::vector<std::string> parts;
        for (const auto& e : tr.edges()) {
          parts.push_back(e.relation + ":" + e.head.word + ">" + e.dependent.word);
        }
        std::sort(parts.begin(), parts.end());
        std::string out;
        for (const auto& p : parts) out += p + ";";
        return out;
      };
      if (key(candidate) == key(tree) && candidate.root().word == tree.root().word) {
        found = true;
        CHECK(prob == doctest::Approx(content * scored.prob).epsilon(1e-9));
      }
    }
    CHECK(found);
  }
}

TEST_CASE("sentence probability equals the sum over parses") {
  MonolingualTables t;
  t.top["a"] = 0.5;
  t.top["b"] = 0.5;
  t.dependency[{"a", "r", "b"}] = 0.5;
  t.dependency[{"a", "r", "a"}] = 0.5;
  t.dependency[{"b", "r", "a"}] = 1.0;
  t.detail[{"a", "r", 0}] = 0.4;
  t.detail[{"a", "r", 1}] = 0.6;
  t.detail[{"b", "r", 0}] = 0.5;
  t.detail[{"b", "r", 1}] = 0.5;
  t.sequencing[{"r", "e"}] = 0.3;
  t.sequencing[{"e", "r"}] = 0.7;
  t.sequencing[{"e"}] = 1.0;
  MonolingualModel m(std::move(t));

  for (const std::vector<std::string>& words :
       {std::vector<std::string>{"a", "b"}, {"b", "a"}, {"a", "a", "b"}}) {
    double total = 0.0;
    for (const auto& [tree, prob] : parse(words, m, 100000)) total += prob;
    CHECK(score_sentence(words, m) == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("sequencing composes with detail parameters over multisets") {
  // summing detail-product(h, M(s)) * sequencing(s) over all sequences
  // equals summing detail-product(h, M) over all multisets, because the
  // sequencing table is normalized per multiset
  MonolingualTables t;
  t.detail[{"h", "r", 0}] = 0.3;
  t.detail[{"h", "r", 1}] = 0.7;
  t.detail[{"h", "s", 0}] = 0.6;
  t.detail[{"h", "s", 1}] = 0.4;
  t.sequencing[{"e"}] = 1.0;
  t.sequencing[{"r", "e"}] = 0.2;
  t.sequencing[{"e", "r"}] = 0.8;
  t.sequencing[{"s", "e"}] = 0.5;
  t.sequencing[{"e", "s"}] = 0.5;
  t.sequencing[{"r", "s", "e"}] = 0.1;
  t.sequencing[{"r", "e", "s"}] = 0.2;
  t.sequencing[{"s", "r", "e"}] = 0.3;
  t.sequencing[{"s", "e", "r"}] = 0.1;
  t.sequencing[{"e", "r", "s"}] = 0.2;
  t.sequencing[{"e", "s", "r"}] = 0.1;
  MonolingualModel m(std::move(t));
  REQUIRE(m.normalization_issues().empty());

  auto detail_product = [&](const LabelMultiset& multiset) {
    double p = 1.0;
    for (const std::string rel : {"r", "s"}) {
      p *= m.detail_prob("h", rel, multiset.count(rel));
    }
    return p;
  };

  double by_sequences = 0.0, by_multisets = 0.0;
  for (int nr = 0; nr <= 1; ++nr) {
    for (int ns = 0; ns <= 1; ++ns) {
      LabelMultiset multiset;
      multiset.add("e");
      if (nr) multiset.add("r");
      if (ns) multiset.add("s");
      by_multisets += detail_product(multiset);
      for (const auto& seq : multiset.distinct_permutations()) {
        by_sequences += detail_product(multiset) * m.sequencing_prob(seq);
      }
    }
  }
  CHECK(by_sequences == doctest::Approx(by_multisets).epsilon(1e-12));
}

TEST_CASE("size bounds raise TooLarge") {
  MonolingualModel m(MonolingualTables{});
  std::vector<std::string> nine(9, "w");
  CHECK(kind_of([&] { score_sentence(nine, m); }) == ErrorKind::kTooLarge);
  CHECK(kind_of([&] { parse(nine, m, 1); }) == ErrorKind::kTooLarge);
  CHECK(score_sentence(nine, m, 16) == 0.0);  // a larger bound is accepted
}

TEST_CASE("model normalization checker flags bad tables") {
  MonolingualTables t;
  t.top["a"] = 0.4;
  MonolingualModel bad(std::move(t));
  CHECK_FALSE(bad.normalization_issues().empty());

  MonolingualTables ok;
  ok.top["a"] = 1.0;
  ok.sequencing[{"r", "e"}] = 0.3;
  ok.sequencing[{"e", "r"}] = 0.7;
  MonolingualModel good(std::move(ok));
  CHECK(good.normalization_issues().empty());
}
