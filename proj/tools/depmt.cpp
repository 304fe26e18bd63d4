// depmt: statistical dependency translation toolkit.
//
// Subcommands cover supervised training, sentence scoring, exhaustive
// parsing, tree translation, n-best decoding, and verification of the
// implementation against its brute-force oracles. Exit codes: 0 success,
// 1 malformed input, 2 size bound exceeded, 3 verification failure.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "depmt/decoder.hpp"
#include "depmt/estimation.hpp"
#include "depmt/formats.hpp"
#include "depmt/lm.hpp"
#include "depmt/logprob.hpp"
#include "depmt/oracle.hpp"
#include "depmt/transfer.hpp"
#include "depmt/verify.hpp"

namespace {

using namespace depmt;

std::string fmt_prob(double p) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12f", p);
  return buffer;
}

std::string fmt_log(double lp) {
  if (std::isinf(lp) && lp < 0) return "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.9f", lp);
  return buffer;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += " ";
    out += words[i];
  }
  return out;
}

TreebankRecord tree_as_record(const RelationTree& tree) {
  TreebankRecord record;
  record.words = tree.nodes();
  record.tree = tree;
  return record;
}

int run_train_lm(const std::string& corpus_path, const std::string& out_path,
                 double lambda, int n_max) {
  auto corpus = load_corpus(corpus_path);
  MonolingualModel model = estimate_monolingual(corpus, lambda, n_max);
  save_model(out_path, &model, nullptr);
  std::fprintf(stderr, "wrote %s (%zu records, vocabulary %zu)\n",
               out_path.c_str(), corpus.size(), model.vocabulary().size());
  return 0;
}

int run_train_transfer(const std::string& bitext_path, const std::string& out_path,
                       double lambda) {
  auto corpus = load_bitext(bitext_path);
  TransferModel model = estimate_transfer(corpus, lambda);
  save_model(out_path, nullptr, &model);
  std::fprintf(stderr, "wrote %s (%zu records, %zu rules)\n", out_path.c_str(),
               corpus.size(), model.rules().size());
  return 0;
}

int run_score(const std::string& lm_path, const std::string& sentence) {
  MonolingualModel model = load_monolingual_model(lm_path);
  auto words = split_tokens(sentence);
  if (words.empty()) {
    throw Error(ErrorKind::kEmptyInput, "empty sentence");
  }
  double p = score_sentence(words, model);
  std::printf("%s\n%s\n", fmt_prob(p).c_str(),
              fmt_log(log_from_prob(p)).c_str());
  return 0;
}

int run_parse(const std::string& lm_path, const std::string& sentence,
              std::size_t k) {
  MonolingualModel model = load_monolingual_model(lm_path);
  auto words = split_tokens(sentence);
  if (words.empty()) {
    throw Error(ErrorKind::kEmptyInput, "empty sentence");
  }
  for (const auto& [tree, prob] : parse(words, model, k)) {
    std::printf("# %s\n", fmt_prob(prob).c_str());
    std::fputs(format_corpus({tree_as_record(tree)}).c_str(), stdout);
    std::printf("\n");
  }
  return 0;
}

int run_translate(const std::string& lm_src_path, const std::string& transfer_path,
                  const std::string& lm_tgt_path, const std::string& tree_path,
                  std::size_t k) {
  (void)lm_src_path;  // accepted for interface symmetry with decode
  TransferModel tm = load_transfer_model(transfer_path);
  MonolingualModel tgt = load_monolingual_model(lm_tgt_path);
  auto records = load_corpus(tree_path);
  if (records.size() != 1) {
    throw Error(ErrorKind::kMalformedInput,
                tree_path + ": expected exactly one record, found " +
                    std::to_string(records.size()));
  }
  // string marginal over transfer candidates and their orderings
  std::map<std::vector<std::string>, double> marginals;
  for (const auto& candidate :
       translate(records[0].tree, tm, std::numeric_limits<std::size_t>::max())) {
    for (const auto& scored : enumerate_linearizations(candidate.tree, tgt)) {
      if (scored.prob == 0.0) continue;
      marginals[scored.words] += candidate.prob * scored.prob;
    }
  }
  std::vector<std::pair<std::vector<std::string>, double>> ranked(
      marginals.begin(), marginals.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);
  for (const auto& [words, p] : ranked) {
    std::printf("%s\t%s\n", join_words(words).c_str(), fmt_prob(p).c_str());
  }
  return 0;
}

int run_decode(const std::string& lm_src_path, const std::string& transfer_path,
               const std::string& lm_tgt_path, const std::string& nbest_path,
               std::size_t k, const std::string& mode,
               const std::vector<std::string>& reverse_paths) {
  MonolingualModel src = load_monolingual_model(lm_src_path);
  TransferModel tm = load_transfer_model(transfer_path);
  MonolingualModel tgt = load_monolingual_model(lm_tgt_path);
  auto hyps = load_nbest(nbest_path);

  DecodeMode decode_mode = DecodeMode::kSum;
  if (mode == "max") {
    decode_mode = DecodeMode::kMax;
  } else if (mode != "sum") {
    throw Error(ErrorKind::kMalformedInput, "mode must be sum or max");
  }
  auto entries = decode(hyps, src, tm, tgt, k, decode_mode);
  if (!reverse_paths.empty()) {
    TransferModel reverse_tm = load_transfer_model(reverse_paths[0]);
    MonolingualModel content_lm = load_monolingual_model(reverse_paths[1]);
    entries = rescore_reverse(entries, content_lm, reverse_tm);
  }
  for (const auto& entry : entries) {
    const Hypothesis& h = entry.hypothesis;
    std::printf("%s\t%s\t%s\t%s\t%s\t%s\t%s\n",
                join_words(h.target_words).c_str(), fmt_log(entry.log_score).c_str(),
                fmt_log(h.log_acoustic).c_str(),
                fmt_log(h.log_source_generation).c_str(),
                fmt_log(h.log_source_content).c_str(),
                fmt_log(h.log_transfer).c_str(),
                fmt_log(h.log_target_generation).c_str());
  }
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<VerifyReport> reports;
  if (suite == "all" || suite == "lm") reports.push_back(verify_lm(seed));
  if (suite == "all" || suite == "transfer") reports.push_back(verify_transfer(seed));
  if (suite == "all" || suite == "decode") reports.push_back(verify_decode(seed));
  if (reports.empty()) {
    throw Error(ErrorKind::kMalformedInput,
                "suite must be one of all, lm, transfer, decode");
  }
  bool ok = true;
  for (const auto& report : reports) {
    std::printf("suite %-8s cases=%-5d max deviation=%.3e %s\n",
                report.suite.c_str(), report.cases, report.max_deviation,
                report.ok ? "ok" : "FAILED");
    for (const auto& note : report.notes) {
      std::printf("  %s\n", note.c_str());
    }
    ok = ok && report.ok;
  }
  std::printf("verification %s\n", ok ? "passed" : "FAILED");
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistical dependency translation toolkit"};
  app.require_subcommand(1);

  std::string corpus_path, bitext_path, out_path, lm_path, sentence;
  std::string lm_src_path, transfer_path, lm_tgt_path, tree_path, nbest_path;
  std::string mode = "sum", suite = "all";
  std::vector<std::string> reverse_paths;
  double lambda = 0.0;
  int n_max = -1;
  std::size_t k = 1;
  std::uint64_t seed = 1;

  auto* train_lm = app.add_subcommand("train-lm", "estimate a monolingual model");
  train_lm->add_option("--corpus", corpus_path)->required();
  train_lm->add_option("--out", out_path)->required();
  train_lm->add_option("--lambda", lambda, "add-lambda smoothing weight");
  train_lm->add_option("--nmax", n_max, "cap on same-relation dependents");

  auto* train_transfer =
      app.add_subcommand("train-transfer", "estimate a transfer model");
  train_transfer->add_option("--bitext", bitext_path)->required();
  train_transfer->add_option("--out", out_path)->required();
  train_transfer->add_option("--lambda", lambda, "add-lambda smoothing weight");

  auto* score = app.add_subcommand("score", "print P(W) and log P(W)");
  score->add_option("--lm", lm_path)->required();
  score->add_option("--sentence", sentence)->required();

  auto* parse_cmd = app.add_subcommand("parse", "print the k best trees");
  parse_cmd->add_option("--lm", lm_path)->required();
  parse_cmd->add_option("--sentence", sentence)->required();
  parse_cmd->add_option("--k", k);

  auto* translate_cmd =
      app.add_subcommand("translate", "rank target strings for a source tree");
  translate_cmd->add_option("--lm-src", lm_src_path)->required();
  translate_cmd->add_option("--transfer", transfer_path)->required();
  translate_cmd->add_option("--lm-tgt", lm_tgt_path)->required();
  translate_cmd->add_option("--tree", tree_path)->required();
  translate_cmd->add_option("--k", k);

  auto* decode_cmd = app.add_subcommand("decode", "decode an n-best list");
  decode_cmd->add_option("--lm-src", lm_src_path)->required();
  decode_cmd->add_option("--transfer", transfer_path)->required();
  decode_cmd->add_option("--lm-tgt", lm_tgt_path)->required();
  decode_cmd->add_option("--nbest", nbest_path)->required();
  decode_cmd->add_option("--k", k);
  decode_cmd->add_option("--mode", mode, "sum or max");
  decode_cmd
      ->add_option("--reverse", reverse_paths,
                   "reverse transfer model and target content model")
      ->expected(2);

  auto* verify_cmd =
      app.add_subcommand("verify", "compare implementations against oracles");
  verify_cmd->add_option("--suite", suite, "all, lm, transfer or decode");
  verify_cmd->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(train_lm)) {
      return run_train_lm(corpus_path, out_path, lambda, n_max);
    }
    if (app.got_subcommand(train_transfer)) {
      return run_train_transfer(bitext_path, out_path, lambda);
    }
    if (app.got_subcommand(score)) return run_score(lm_path, sentence);
    if (app.got_subcommand(parse_cmd)) return run_parse(lm_path, sentence, k);
    if (app.got_subcommand(translate_cmd)) {
      return run_translate(lm_src_path, transfer_path, lm_tgt_path, tree_path, k);
    }
    if (app.got_subcommand(decode_cmd)) {
      return run_decode(lm_src_path, transfer_path, lm_tgt_path, nbest_path, k,
                        mode, reverse_paths);
    }
    if (app.got_subcommand(verify_cmd)) return run_verify(suite, seed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", error_kind_name(e.kind()), e.what());
    return e.kind() == ErrorKind::kTooLarge ? 2 : 1;
  }
  return 0;
}
