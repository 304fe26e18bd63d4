#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "depmt/estimation.hpp"
#include "depmt/formats.hpp"
#include "depmt/toy_data.hpp"
#include "doctest.h"

using namespace depmt;

namespace {

std::string temp_path(const std::string& stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ErrorKind kind_of(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::kMalformedInput;
}

}  // namespace

TEST_CASE("corpus text round trips through load and save") {
  auto records = parse_corpus(
      "1\tjohn\t2\tsubj\n2\tsees\t0\te\n3\tmary\t2\tobj\n\n1\tcat\t0\te\n",
      "<inline>");
  REQUIRE(records.size() == 2);
  CHECK(records[0].tree.root().word == "sees");
  CHECK(records[1].tree.size() == 1);

  std::string text = format_corpus(records);
  auto again = parse_corpus(text, "<again>");
  CHECK(format_corpus(again) == text);
}

TEST_CASE("corpus loader names file and line for bad input") {
  std::string message;
  CHECK(kind_of([&] { parse_corpus("1\tjohn\t2\n", "bad.corpus"); }, &message) ==
        ErrorKind::kMalformedInput);
  CHECK(message.find("bad.corpus:1") != std::string::npos);

  CHECK(kind_of([&] {
          parse_corpus("1\tjohn\t0\te\n2\tsees\t0\te\n", "two.corpus");
        }) == ErrorKind::kMalformedInput);

  // non-projective record is rejected with the record named
  std::string np =
      "1\ta\t4\ty\n"
      "2\tb\t0\te\n"
      "3\tc\t2\tz\n"
      "4\td\t2\tx\n";
  CHECK(kind_of([&] { parse_corpus(np, "np.corpus"); }, &message) ==
        ErrorKind::kNonProjective);
  CHECK(message.find("record 1") != std::string::npos);
}

TEST_CASE("bitext parsing validates alignments") {
  auto records = parse_bitext(toy_bitext_text(), "<toy>");
  REQUIRE(records.size() == 10);
  CHECK(records[0].source.words.size() == 3);
  CHECK(records[0].alignment.size() == 3);
  CHECK(records[6].alignment.source_of({"grand", 2}) == WordOccurrence{"big", 1});

  std::string partial =
      "1\tcat\t0\te\n---\n1\tchat\t0\te\n2\tnoir\t1\tmod\n===\n1\t1\n";
  std::string message;
  CHECK(kind_of([&] { parse_bitext(partial, "p.bitext"); }, &message) ==
        ErrorKind::kMalformedInput);
  CHECK(message.find("not total") != std::string::npos);

  std::string text = format_bitext(records);
  CHECK(format_bitext(parse_bitext(text, "<again>")) == text);
}

TEST_CASE("model files round trip byte for byte") {
  auto bitext = parse_bitext(toy_bitext_text(), "<toy>");
  std::vector<TreebankRecord> source_side;
  for (const auto& record : bitext) source_side.push_back(record.source);
  auto lm = estimate_monolingual(source_side);
  auto tm = estimate_transfer(bitext);

  std::string lm_path = temp_path("depmt_lm_roundtrip.model");
  std::string tm_path = temp_path("depmt_tm_roundtrip.model");
  save_model(lm_path, &lm, nullptr);
  save_model(tm_path, nullptr, &tm);

  auto lm2 = load_monolingual_model(lm_path);
  auto tm2 = load_transfer_model(tm_path);
  CHECK(format_model(&lm2, nullptr) == slurp(lm_path));
  CHECK(format_model(nullptr, &tm2) == slurp(tm_path));

  // loaded model scores the way the original does
  CHECK(score_sentence({"john", "sees", "mary"}, lm2) ==
        doctest::Approx(score_sentence({"john", "sees", "mary"}, lm)).epsilon(1e-9));
  std::remove(lm_path.c_str());
  std::remove(tm_path.c_str());
}

TEST_CASE("differently named but equal rules canonicalize to the same bytes") {
  TransferTables a, b;
  StructuralRule rule_a;
  rule_a.source_shape = UnlabeledGraph({"p", "q"}, {{"subj", "p", "q"}});
  rule_a.target_shape = UnlabeledGraph({"m", "n"}, {{"suj", "m", "n"}});
  rule_a.node_alignment = {{"m", "p"}, {"n", "q"}};
  rule_a.probability = 1.0;
  a.rules.push_back(rule_a);

  StructuralRule rule_b;
  rule_b.source_shape = UnlabeledGraph({"z", "w"}, {{"subj", "w", "z"}});
  rule_b.target_shape = UnlabeledGraph({"k", "j"}, {{"suj", "j", "k"}});
  rule_b.node_alignment = {{"j", "w"}, {"k", "z"}};
  rule_b.probability = 1.0;
  b.rules.push_back(rule_b);

  TransferModel ta(std::move(a)), tb(std::move(b));
  CHECK(format_model(nullptr, &ta) == format_model(nullptr, &tb));
}

TEST_CASE("model loader rejects malformed lines with positions") {
  std::string message;
  CHECK(kind_of([&] {
          std::string path = temp_path("depmt_bad.model");
          std::ofstream(path) << "TOP\tjohn\n";
          load_monolingual_model(path);
        }, &message) == ErrorKind::kMalformedInput);
  CHECK(message.find(":1:") != std::string::npos);

  CHECK(kind_of([&] {
          std::string path = temp_path("depmt_bad2.model");
          std::ofstream(path) << "SEQ\tsubj,obj\t0.5\n";  // no head marker
          load_monolingual_model(path);
        }) == ErrorKind::kMalformedInput);

  CHECK(kind_of([&] {
          std::string path = temp_path("depmt_bad3.model");
          std::ofstream(path) << "WHAT\tx\t1\n";
          load_monolingual_model(path);
        }) == ErrorKind::kMalformedInput);
}

TEST_CASE("probabilities print with twelve significant digits") {
  CHECK(format_probability(1.0) == "1");
  CHECK(format_probability(0.5) == "0.5");
  CHECK(format_probability(1.0 / 3.0) == "0.333333333333");
  CHECK(format_probability(0.05) == "0.05");
}

TEST_CASE("nbest parsing") {
  auto hyps = parse_nbest(toy_nbest_text(), "<toy>");
  REQUIRE(hyps.size() == 3);
  CHECK(hyps[0].words == std::vector<std::string>{"john", "loves", "mary"});
  CHECK(hyps[0].log_acoustic == doctest::Approx(-1.203972804326));

  CHECK(kind_of([] { parse_nbest("abc\tjohn\n", "x.nbest"); }) ==
        ErrorKind::kMalformedInput);
  CHECK(kind_of([] { parse_nbest("inf\tjohn\n", "x.nbest"); }) ==
        ErrorKind::kMalformedInput);
  CHECK(kind_of([] { parse_nbest("-1.0\t\n", "x.nbest"); }) ==
        ErrorKind::kMalformedInput);
}
