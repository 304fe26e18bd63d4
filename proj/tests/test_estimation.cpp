#include <algorithm>
#include <functional>
#include <random>

#include "depmt/estimation.hpp"
#include "depmt/formats.hpp"
#include "depmt/toy_data.hpp"
#include "doctest.h"

using namespace depmt;

namespace {

WordOccurrence occ(const std::string& word, int index) { return {word, index}; }

TreebankRecord record_svo(const std::string& s, const std::string& v,
                          const std::string& o) {
  TreebankRecord record;
  record.words = {occ(s, 1), occ(v, 2), occ(o, 3)};
  record.tree = validate_tree(record.words, {{"subj", occ(v, 2), occ(s, 1)},
                                             {"obj", occ(v, 2), occ(o, 3)}});
  return record;
}

TreebankRecord record_ovs(const std::string& o, const std::string& v,
                          const std::string& s) {
  TreebankRecord record;
  record.words = {occ(o, 1), occ(v, 2), occ(s, 3)};
  record.tree = validate_tree(record.words, {{"obj", occ(v, 2), occ(o, 1)},
                                             {"subj", occ(v, 2), occ(s, 3)}});
  return record;
}

}  // namespace

TEST_CASE("one record yields a point-mass model") {
  auto m = estimate_monolingual({record_svo("john", "sees", "mary")});
  CHECK(m.top_prob("sees") == doctest::Approx(1.0));
  CHECK(score_sentence({"john", "sees", "mary"}, m) == doctest::Approx(1.0));
  CHECK(m.normalization_issues().empty());
}

TEST_CASE("order variants split the sequencing table") {
  auto m = estimate_monolingual(
      {record_svo("john", "sees", "mary"), record_ovs("mary", "sees", "john")});
  CHECK(m.sequencing_prob({"subj", "e", "obj"}) == doctest::Approx(0.5));
  CHECK(m.sequencing_prob({"obj", "e", "subj"}) == doctest::Approx(0.5));
  CHECK(m.normalization_issues().empty());
}

TEST_CASE("add-lambda smoothing opens unseen head-dependent pairs") {
  std::vector<TreebankRecord> corpus{record_svo("john", "sees", "mary")};
  // "john" was never seen as an object of "sees"
  auto strict = estimate_monolingual(corpus, 0.0);
  CHECK(score_sentence({"john", "sees", "john"}, strict) == doctest::Approx(0.0));

  auto smoothed = estimate_monolingual(corpus, 0.1);
  CHECK(score_sentence({"john", "sees", "john"}, smoothed) > 0.0);
  CHECK(smoothed.normalization_issues().empty());
}

TEST_CASE("estimation rejects bad corpora") {
  CHECK_THROWS_AS(estimate_monolingual({}), Error);

  // non-projective record: subtree of d splits around the root
  TreebankRecord bad;
  bad.words = {occ("a", 1), occ("b", 2), occ("c", 3), occ("d", 4)};
  bad.tree = validate_tree(bad.words, {{"y", occ("d", 4), occ("a", 1)},
                                       {"z", occ("b", 2), occ("c", 3)},
                                       {"x", occ("b", 2), occ("d", 4)}});
  try {
    estimate_monolingual({bad});
    FAIL("expected NonProjective");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonProjective);
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
  }
}

TEST_CASE("estimation is record-order invariant") {
  std::vector<TreebankRecord> corpus{record_svo("john", "sees", "mary"),
                                     record_svo("cat", "sees", "dog"),
                                     record_ovs("dog", "sees", "cat")};
  auto a = estimate_monolingual(corpus);
  std::reverse(corpus.begin(), corpus.end());
  auto b = estimate_monolingual(corpus);
  CHECK(format_model(&a, nullptr) == format_model(&b, nullptr));
}

TEST_CASE("transfer estimation on one record is point mass") {
  auto bitext = parse_bitext(toy_bitext_text(), "<toy>");
  std::vector<BitextRecord> one{bitext[2]};  // john loves mary / jean aime marie
  auto tm = estimate_transfer(one);
  CHECK(tm.normalization_issues().empty());
  CHECK(score_translation(one[0].target.tree, one[0].source.tree, tm) ==
        doctest::Approx(1.0));
}

TEST_CASE("a word aligned to nothing in half the records splits lexically") {
  auto bitext = parse_bitext(
      "1\tthe\t2\tdet\n2\tcat\t0\te\n---\n1\tchat\t0\te\n===\n1\t2\n\n"
      "1\tthe\t2\tdet\n2\tcat\t0\te\n---\n1\tle\t2\tdet\n2\tchat\t0\te\n===\n"
      "1\t1\n2\t2\n",
      "<inline>");
  auto tm = estimate_transfer(bitext);
  CHECK(tm.lexical_prob("the", {}) == doctest::Approx(0.5));
  CHECK(tm.lexical_prob("the", {"le"}) == doctest::Approx(0.5));
  CHECK(tm.normalization_issues().empty());
}

TEST_CASE("undecomposable records are rejected with a name") {
  // target edge between nodes aligned to source nodes two levels apart:
  // voit aligns to sees, noir aligns to black, but sees and black never
  // share a local tree
  auto bitext = parse_bitext(
      "1\tsees\t0\te\n2\tcat\t1\tsubj\n3\tblack\t2\tmod\n---\n"
      "1\tvoit\t0\te\n2\tnoir\t1\tmod\n===\n"
      "1\t1\n2\t3\n",
      "<inline>");
  try {
    estimate_transfer(bitext);
    FAIL("expected UndecomposableRecord");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUndecomposableRecord);
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
    CHECK(std::string(e.what()).find("mod") != std::string::npos);
  }
}

TEST_CASE("toy corpus training round trip reproduces frequencies") {
  auto bitext = parse_bitext(toy_bitext_text(), "<toy>");
  REQUIRE(bitext.size() == 10);
  auto tm = estimate_transfer(bitext);
  CHECK(tm.normalization_issues().empty());

  std::vector<TreebankRecord> target_side;
  for (const auto& record : bitext) target_side.push_back(record.target);
  auto tgt = estimate_monolingual(target_side);
  CHECK(tgt.normalization_issues().empty());

  // each training pair's chain probability equals its empirical frequency
  // among records sharing the source tree
  for (const auto& record : bitext) {
    double chain = score_translation(record.target.tree, record.source.tree, tm) *
                   score_ordering(record.target.words, record.target.tree, tgt);
    int same_source = 0, same_chain = 0;
    for (const auto& other : bitext) {
      if (to_string(other.source.tree) != to_string(record.source.tree)) continue;
      ++same_source;
      if (to_string(other.target.tree) == to_string(record.target.tree) &&
          other.target.words == record.target.words) {
        ++same_chain;
      }
    }
    double expected = static_cast<double>(same_chain) / same_source;
    CHECK(chain == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("estimation recovers a sampled point-mass model") {
  // sample records from the deterministic model and re-estimate
  std::vector<TreebankRecord> corpus{record_svo("john", "sees", "mary"),
                                     record_svo("john", "sees", "mary")};
  auto m = estimate_monolingual(corpus);
  CHECK(m.top_prob("sees") == doctest::Approx(1.0));
  CHECK(m.dependency_prob("sees", "subj", "john") == doctest::Approx(1.0));
  CHECK(m.detail_prob("sees", "subj", 1) == doctest::Approx(1.0));
  CHECK(m.sequencing_prob({"subj", "e", "obj"}) == doctest::Approx(1.0));
}

TEST_CASE("an explicit dependent cap below the data is rejected") {
  TreebankRecord two_mods;
  two_mods.words = {occ("big", 1), occ("red", 2), occ("cat", 3)};
  two_mods.tree = validate_tree(two_mods.words,
                                {{"mod", occ("cat", 3), occ("big", 1)},
                                 {"mod", occ("cat", 3), occ("red", 2)}});
  CHECK_THROWS_AS(estimate_monolingual({two_mods}, 0.0, 1), Error);
  auto m = estimate_monolingual({two_mods}, 0.0, 2);
  CHECK(m.n_max() == 2);
  CHECK(m.detail_prob("cat", "mod", 2) == doctest::Approx(1.0));
}

TEST_CASE("reverse_bitext swaps sides and inverts alignments") {
  auto bitext = parse_bitext(toy_bitext_text(), "<toy>");
  auto reversed = reverse_bitext(bitext);
  REQUIRE(reversed.size() == bitext.size());
  CHECK(reversed[0].source.words[0].word == "jean");
  CHECK(reversed[0].target.words[0].word == "john");
  auto rev_tm = estimate_transfer(reversed);
  CHECK(rev_tm.normalization_issues().empty());
  CHECK(score_translation(reversed[0].target.tree, reversed[0].source.tree,
                          rev_tm) > 0.0);
}
