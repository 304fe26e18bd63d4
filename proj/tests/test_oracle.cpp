#include <cmath>
#include <functional>
#include <limits>

#include "depmt/estimation.hpp"
#include "depmt/formats.hpp"
#include "depmt/oracle.hpp"
#include "depmt/sampling.hpp"
#include "depmt/toy_data.hpp"
#include "depmt/verify.hpp"
#include "doctest.h"

using namespace depmt;

namespace {

WordOccurrence occ(const std::string& word, int index) { return {word, index}; }

}  // namespace

TEST_CASE("sentence oracle trivial cases") {
  MonolingualModel empty{MonolingualTables{}};
  CHECK(oracle_sentence_prob({"a", "b"}, empty) == doctest::Approx(0.0));

  MonolingualTables t;
  t.top["a"] = 0.35;
  MonolingualModel m(std::move(t));
  CHECK(oracle_sentence_prob({"a"}, m) == doctest::Approx(0.35));

  CHECK_THROWS_AS(oracle_sentence_prob({"a", "a", "a", "a", "a", "a"}, m), Error);
}

TEST_CASE("sentence oracle agrees with score_sentence on random models") {
  auto m = random_monolingual_model(20260808, {"a", "b", "c"}, {"r", "s"}, 1);
  std::vector<std::vector<std::string>> strings{
      {"a"}, {"b", "c"}, {"a", "a"}, {"c", "b", "a"}, {"a", "b", "c"}};
  for (const auto& words : strings) {
    CHECK(score_sentence(words, m) ==
          doctest::Approx(oracle_sentence_prob(words, m)).epsilon(1e-10));
  }
}

TEST_CASE("translation oracle trivial cases") {
  auto source = validate_tree({occ("a", 1), occ("b", 2)},
                              {{"r", occ("a", 1), occ("b", 2)}});
  auto target = validate_tree({occ("x", 1), occ("y", 2)},
                              {{"u", occ("x", 1), occ("y", 2)}});

  TransferTables no_rules;
  no_rules.lexical[{"a", {"x"}}] = 1.0;
  no_rules.lexical[{"b", {"y"}}] = 1.0;
  TransferModel tm(std::move(no_rules));
  CHECK(oracle_translation_prob(target, source, tm) == doctest::Approx(0.0));

  // edgeless source and target: the product of lexical parameters
  auto s1 = validate_tree({occ("a", 1)}, {});
  auto t1 = validate_tree({occ("x", 1)}, {});
  TransferTables lex_only;
  lex_only.lexical[{"a", {"x"}}] = 0.4;
  lex_only.lexical[{"a", {"y"}}] = 0.6;
  TransferModel tm2(std::move(lex_only));
  CHECK(oracle_translation_prob(t1, s1, tm2) == doctest::Approx(0.4));
}

TEST_CASE("decode oracle trivial cases") {
  auto bitext = parse_bitext(toy_bitext_text(), "<toy>");
  std::vector<BitextRecord> one{bitext[2]};
  auto src = estimate_monolingual({one[0].source});
  auto tgt = estimate_monolingual({one[0].target});
  auto tm = estimate_transfer(one);

  // single chain: the marginal is the chain product
  std::vector<RecognitionHypothesis> hyps{{{"john", "loves", "mary"}, std::log(0.3)}};
  auto marginals = oracle_decode(hyps, src, tm, tgt);
  REQUIRE(marginals.size() == 1);
  CHECK(marginals.begin()->second == doctest::Approx(0.3).epsilon(1e-12));

  // zero acoustic mass gives an empty map
  std::vector<RecognitionHypothesis> silent{
      {{"john", "loves", "mary"}, -std::numeric_limits<double>::infinity()}};
  CHECK(oracle_decode(silent, src, tm, tgt).empty());
}

TEST_CASE("verify suites pass on their default configuration") {
  auto lm_report = verify_lm(1);
  CHECK(lm_report.ok);
  CHECK(lm_report.cases == 3 + 9 + 27 + 81);

  auto transfer_report = verify_transfer(1);
  CHECK(transfer_report.ok);

  auto decode_report = verify_decode(1);
  CHECK(decode_report.ok);
}
