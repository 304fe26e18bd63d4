#ifndef DEPMT_FORMATS_HPP_
#define DEPMT_FORMATS_HPP_

#include <string>
#include <vector>

#include "depmt/decoder.hpp"
#include "depmt/estimation.hpp"
#include "depmt/lm.hpp"
#include "depmt/transfer.hpp"

namespace depmt {

// Plain TSV text formats. Loaders are tolerant about blank-line runs;
// savers emit one canonical byte form, so saving a loaded canonical file
// reproduces it exactly. Malformed input raises Error naming file and
// line. Words and relation labels may not contain whitespace or the
// reserved punctuation , ; ( ) > used by the serializations.

// Treebank records: one `index<TAB>word<TAB>head_index<TAB>relation` line
// per token, records separated by a blank line. head_index 0 marks the
// root, whose relation field is the head marker. Line order is surface
// order; every record must be a projective tree.
std::vector<TreebankRecord> load_corpus(const std::string& path);
std::vector<TreebankRecord> parse_corpus(const std::string& text,
                                         const std::string& name);
std::string format_corpus(const std::vector<TreebankRecord>& records);
void save_corpus(const std::string& path,
                 const std::vector<TreebankRecord>& records);

// Bitext records: a source block, `---`, a target block, `===`, then
// `target_index<TAB>source_index` alignment lines; blank line between
// records. The alignment must be total on the target tokens.
std::vector<BitextRecord> load_bitext(const std::string& path);
std::vector<BitextRecord> parse_bitext(const std::string& text,
                                       const std::string& name);
std::string format_bitext(const std::vector<BitextRecord>& records);
void save_bitext(const std::string& path, const std::vector<BitextRecord>& records);

// Model files hold typed lines (TOP, DEP, DET, SEQ, LEX, RULE) in a
// canonical order; probabilities carry 12 significant digits.
MonolingualModel load_monolingual_model(const std::string& path);
TransferModel load_transfer_model(const std::string& path);
std::string format_model(const MonolingualModel* lm, const TransferModel* tm);
void save_model(const std::string& path, const MonolingualModel* lm,
                const TransferModel* tm);

// N-best lists: one `log_acoustic_score<TAB>w1 w2 ... wn` line per
// hypothesis.
std::vector<RecognitionHypothesis> load_nbest(const std::string& path);
std::vector<RecognitionHypothesis> parse_nbest(const std::string& text,
                                               const std::string& name);

std::string format_probability(double p);
std::vector<std::string> split_tokens(const std::string& line);

}  // namespace depmt

#endif  // DEPMT_FORMATS_HPP_
