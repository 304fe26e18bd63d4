#include "depmt/formats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace depmt {

namespace {

[[noreturn]] void malformed(const std::string& name, std::size_t line,
                            const std::string& message) {
  throw Error(ErrorKind::kMalformedInput,
              name + ":" + std::to_string(line) + ": " + message);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kMalformedInput, path + ": cannot open file");
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kMalformedInput, path + ": cannot open file for writing");
  }
  out << text;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == '\t') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

bool clean_token(const std::string& token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (c == ' ' || c == '\t' || c == ',' || c == ';' || c == '(' || c == ')' ||
        c == '>') {
      return false;
    }
  }
  return true;
}

int parse_int(const std::string& text, const std::string& name, std::size_t line) {
  if (text.empty()) malformed(name, line, "empty integer field");
  char* end = nullptr;
  long value = std::strtol(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size()) {
    malformed(name, line, "not an integer: \"" + text + "\"");
  }
  return static_cast<int>(value);
}

double parse_real(const std::string& text, const std::string& name,
                  std::size_t line) {
  if (text.empty()) malformed(name, line, "empty numeric field");
  char* end = nullptr;
  double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    malformed(name, line, "not a number: \"" + text + "\"");
  }
  return value;
}

double parse_probability(const std::string& text, const std::string& name,
                         std::size_t line) {
  double p = parse_real(text, name, line);
  if (!(p >= 0.0) || !std::isfinite(p)) {
    malformed(name, line, "probability out of range: \"" + text + "\"");
  }
  return p;
}

struct RawRecordLine {
  std::size_t line_number;
  int index;
  std::string word;
  int head_index;
  std::string relation;
};

TreebankRecord build_record(const std::vector<RawRecordLine>& lines,
                            std::size_t record_number, const std::string& name) {
  std::vector<WordOccurrence> words;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const RawRecordLine& raw = lines[i];
    if (raw.index != static_cast<int>(i) + 1) {
      malformed(name, raw.line_number,
                "token index " + std::to_string(raw.index) +
                    " does not match surface position " + std::to_string(i + 1));
    }
    words.push_back({raw.word, raw.index});
  }
  std::vector<RelationEdge> edges;
  int roots = 0;
  for (const RawRecordLine& raw : lines) {
    if (raw.head_index == 0) {
      ++roots;
      if (raw.relation != kHeadMarker) {
        malformed(name, raw.line_number,
                  "root line must use relation \"" + kHeadMarker + "\"");
      }
      continue;
    }
    if (raw.relation == kHeadMarker) {
      malformed(name, raw.line_number,
                "relation \"" + kHeadMarker + "\" is reserved for the root line");
    }
    if (raw.head_index < 1 || raw.head_index > static_cast<int>(lines.size())) {
      malformed(name, raw.line_number,
                "head index " + std::to_string(raw.head_index) + " out of range");
    }
    edges.push_back({raw.relation, words[raw.head_index - 1], words[raw.index - 1]});
  }
  if (roots != 1) {
    malformed(name, lines.front().line_number,
              "record " + std::to_string(record_number) + " has " +
                  std::to_string(roots) + " root lines");
  }
  TreebankRecord record;
  try {
    record.tree = validate_tree(words, edges);
    induced_sequences(words, record.tree);
  } catch (const Error& e) {
    throw Error(e.kind(), name + ": record " + std::to_string(record_number) +
                              ": " + e.what());
  }
  record.words = std::move(words);
  return record;
}

std::vector<RawRecordLine> parse_record_line_block(
    const std::vector<std::string>& lines, std::size_t first_line,
    const std::string& name) {
  std::vector<RawRecordLine> raw;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_number = first_line + i;
    auto fields = split_fields(lines[i]);
    if (fields.size() != 4) {
      malformed(name, line_number,
                "expected 4 tab-separated fields, found " +
                    std::to_string(fields.size()));
    }
    if (!clean_token(fields[1])) {
      malformed(name, line_number, "invalid word token \"" + fields[1] + "\"");
    }
    if (!clean_token(fields[3])) {
      malformed(name, line_number, "invalid relation label \"" + fields[3] + "\"");
    }
    raw.push_back({line_number, parse_int(fields[0], name, line_number), fields[1],
                   parse_int(fields[2], name, line_number), fields[3]});
  }
  return raw;
}

}  // namespace

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : line) {
    if (c == ' ' || c == '\t') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<TreebankRecord> parse_corpus(const std::string& text,
                                         const std::string& name) {
  std::vector<TreebankRecord> records;
  auto lines = split_lines(text);
  std::vector<std::string> block;
  std::size_t block_start = 1;
  auto flush = [&](std::size_t end_line) {
    if (block.empty()) return;
    records.push_back(build_record(
        parse_record_line_block(block, block_start, name), records.size() + 1,
        name));
    block.clear();
    (void)end_line;
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      flush(i + 1);
    } else {
      if (block.empty()) block_start = i + 1;
      block.push_back(lines[i]);
    }
  }
  flush(lines.size());
  return records;
}

std::vector<TreebankRecord> load_corpus(const std::string& path) {
  return parse_corpus(read_file(path), path);
}

namespace {

std::string format_record(const TreebankRecord& record) {
  std::map<WordOccurrence, std::pair<int, std::string>> head_of;
  for (const auto& edge : record.tree.edges()) {
    head_of[edge.dependent] = {edge.head.index, edge.relation};
  }
  std::string out;
  for (std::size_t i = 0; i < record.words.size(); ++i) {
    const WordOccurrence& occ = record.words[i];
    auto it = head_of.find(occ);
    int head_index = it == head_of.end() ? 0 : it->second.first;
    const std::string& relation =
        it == head_of.end() ? kHeadMarker : it->second.second;
    out += std::to_string(i + 1) + "\t" + occ.word + "\t" +
           std::to_string(head_index) + "\t" + relation + "\n";
  }
  return out;
}

}  // namespace

std::string format_corpus(const std::vector<TreebankRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += "\n";
    out += format_record(records[i]);
  }
  return out;
}

void save_corpus(const std::string& path,
                 const std::vector<TreebankRecord>& records) {
  write_file(path, format_corpus(records));
}

std::vector<BitextRecord> parse_bitext(const std::string& text,
                                       const std::string& name) {
  std::vector<BitextRecord> records;
  auto lines = split_lines(text);

  enum class Section { kSource, kTarget, kAlignment };
  Section section = Section::kSource;
  std::vector<std::string> source_block, target_block;
  std::size_t source_start = 1, target_start = 1;
  std::vector<std::tuple<std::size_t, int, int>> alignment_lines;
  bool any_content = false;

  auto flush = [&](std::size_t end_line) {
    if (!any_content) return;
    if (section != Section::kAlignment) {
      malformed(name, end_line, "incomplete bitext record");
    }
    std::size_t record_number = records.size() + 1;
    BitextRecord record;
    record.source = build_record(
        parse_record_line_block(source_block, source_start, name), record_number,
        name);
    record.target = build_record(
        parse_record_line_block(target_block, target_start, name), record_number,
        name);
    std::set<int> seen;
    for (const auto& [line_number, t, s] : alignment_lines) {
      if (t < 1 || t > static_cast<int>(record.target.words.size())) {
        malformed(name, line_number, "target index " + std::to_string(t) +
                                         " out of range");
      }
      if (s < 1 || s > static_cast<int>(record.source.words.size())) {
        malformed(name, line_number, "source index " + std::to_string(s) +
                                         " out of range");
      }
      if (!seen.insert(t).second) {
        malformed(name, line_number,
                  "target index " + std::to_string(t) + " aligned twice");
      }
      record.alignment.set(record.target.words[t - 1], record.source.words[s - 1]);
    }
    if (seen.size() != record.target.words.size()) {
      malformed(name, end_line,
                "record " + std::to_string(record_number) +
                    ": alignment is not total on the target tokens");
    }
    records.push_back(std::move(record));
    source_block.clear();
    target_block.clear();
    alignment_lines.clear();
    section = Section::kSource;
    any_content = false;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    std::size_t line_number = i + 1;
    if (line.empty()) {
      if (any_content) flush(line_number);
      continue;
    }
    if (line == "---") {
      if (section != Section::kSource) {
        malformed(name, line_number, "unexpected --- separator");
      }
      section = Section::kTarget;
      continue;
    }
    if (line == "===") {
      if (section != Section::kTarget) {
        malformed(name, line_number, "unexpected === separator");
      }
      section = Section::kAlignment;
      continue;
    }
    any_content = true;
    switch (section) {
      case Section::kSource:
        if (source_block.empty()) source_start = line_number;
        source_block.push_back(line);
        break;
      case Section::kTarget:
        if (target_block.empty()) target_start = line_number;
        target_block.push_back(line);
        break;
      case Section::kAlignment: {
        auto fields = split_fields(line);
        if (fields.size() != 2) {
          malformed(name, line_number, "expected target<TAB>source indices");
        }
        alignment_lines.push_back({line_number,
                                   parse_int(fields[0], name, line_number),
                                   parse_int(fields[1], name, line_number)});
        break;
      }
    }
  }
  flush(lines.size());
  return records;
}

std::vector<BitextRecord> load_bitext(const std::string& path) {
  return parse_bitext(read_file(path), path);
}

std::string format_bitext(const std::vector<BitextRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += "\n";
    out += format_record(records[i].source);
    out += "---\n";
    out += format_record(records[i].target);
    out += "===\n";
    for (const auto& [target, source] : records[i].alignment.pairs()) {
      out += std::to_string(target.index) + "\t" + std::to_string(source.index) +
             "\n";
    }
  }
  return out;
}

void save_bitext(const std::string& path,
                 const std::vector<BitextRecord>& records) {
  write_file(path, format_bitext(records));
}

std::string format_probability(double p) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", p);
  return buffer;
}

namespace {

std::string format_multiset(const std::vector<std::string>& words) {
  if (words.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ",";
    out += words[i];
  }
  return out;
}

std::string format_shape(const UnlabeledGraph& shape) {
  return to_string(shape);  // already "-" when empty
}

std::string format_rule_alignment(const StructuralRule& rule) {
  if (rule.node_alignment.empty()) return "-";
  std::string out;
  bool first = true;
  for (const auto& [t, s] : rule.node_alignment) {
    if (!first) out += ",";
    first = false;
    out += t + ">" + s;
  }
  return out;
}

UnlabeledGraph parse_shape(const std::string& text, const std::string& name,
                           std::size_t line) {
  std::vector<std::string> nodes;
  std::vector<UnlabeledEdge> edges;
  if (text == "-") return UnlabeledGraph();
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t open = text.find('(', at);
    std::size_t comma = text.find(',', open);
    std::size_t close = text.find(')', comma);
    if (open == std::string::npos || comma == std::string::npos ||
        close == std::string::npos) {
      malformed(name, line, "bad shape edge syntax in \"" + text + "\"");
    }
    std::string rel = text.substr(at, open - at);
    std::string from = text.substr(open + 1, comma - open - 1);
    std::string to = text.substr(comma + 1, close - comma - 1);
    if (rel.empty() || from.empty() || to.empty()) {
      malformed(name, line, "bad shape edge syntax in \"" + text + "\"");
    }
    edges.push_back({rel, from, to});
    nodes.push_back(from);
    nodes.push_back(to);
    at = close + 1;
    if (at < text.size()) {
      if (text[at] != ';') malformed(name, line, "expected ; between shape edges");
      ++at;
    }
  }
  try {
    return UnlabeledGraph(std::move(nodes), std::move(edges));
  } catch (const Error& e) {
    malformed(name, line, e.what());
  }
}

struct ParsedModelFile {
  MonolingualTables lm;
  bool has_lm = false;
  TransferTables tm;
  bool has_tm = false;
};

ParsedModelFile parse_model_file(const std::string& text, const std::string& name) {
  ParsedModelFile out;
  auto lines = split_lines(text);
  int max_detail_n = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_number = i + 1;
    if (lines[i].empty()) continue;
    auto fields = split_fields(lines[i]);
    const std::string& type = fields[0];
    auto need = [&](std::size_t count) {
      if (fields.size() != count) {
        malformed(name, line_number,
                  type + " line needs " + std::to_string(count - 1) + " fields");
      }
    };
    if (type == "TOP") {
      need(3);
      out.lm.top[fields[1]] = parse_probability(fields[2], name, line_number);
      out.has_lm = true;
    } else if (type == "DEP") {
      need(5);
      out.lm.dependency[{fields[1], fields[2], fields[3]}] =
          parse_probability(fields[4], name, line_number);
      out.has_lm = true;
    } else if (type == "DET") {
      need(5);
      int n = parse_int(fields[3], name, line_number);
      if (n < 0) malformed(name, line_number, "negative dependent count");
      max_detail_n = std::max(max_detail_n, n);
      out.lm.detail[{fields[1], fields[2], n}] =
          parse_probability(fields[4], name, line_number);
      out.has_lm = true;
    } else if (type == "SEQ") {
      need(3);
      std::vector<std::string> sequence;
      std::string current;
      for (char c : fields[1] + ",") {
        if (c == ',') {
          if (current.empty()) {
            malformed(name, line_number, "empty label in sequence");
          }
          sequence.push_back(std::move(current));
          current.clear();
        } else {
          current.push_back(c);
        }
      }
      try {
        sequence_multiset(sequence);
      } catch (const Error& e) {
        malformed(name, line_number, e.what());
      }
      out.lm.sequencing[sequence] = parse_probability(fields[2], name, line_number);
      out.has_lm = true;
    } else if (type == "LEX") {
      need(4);
      std::vector<std::string> multiset;
      if (fields[2] != "-") {
        std::string current;
        for (char c : fields[2] + ",") {
          if (c == ',') {
            if (current.empty()) {
              malformed(name, line_number, "empty word in multiset");
            }
            multiset.push_back(std::move(current));
            current.clear();
          } else {
            current.push_back(c);
          }
        }
      }
      std::sort(multiset.begin(), multiset.end());
      out.tm.lexical[{fields[1], multiset}] =
          parse_probability(fields[3], name, line_number);
      out.has_tm = true;
    } else if (type == "RULE") {
      need(6);
      StructuralRule rule;
      rule.source_shape = parse_shape(fields[2], name, line_number);
      rule.target_shape = parse_shape(fields[3], name, line_number);
      if (fields[4] != "-") {
        std::string pair;
        for (char c : fields[4] + ",") {
          if (c != ',') {
            pair.push_back(c);
            continue;
          }
          std::size_t sep = pair.find('>');
          if (sep == std::string::npos || sep == 0 || sep == pair.size() - 1) {
            malformed(name, line_number, "bad alignment pair \"" + pair + "\"");
          }
          rule.node_alignment[pair.substr(0, sep)] = pair.substr(sep + 1);
          pair.clear();
        }
      }
      rule.probability = parse_probability(fields[5], name, line_number);
      try {
        rule = canonicalize_rule(rule);
      } catch (const Error& e) {
        malformed(name, line_number, e.what());
      }
      out.tm.rules.push_back(std::move(rule));
      out.has_tm = true;
    } else {
      malformed(name, line_number, "unknown line type \"" + type + "\"");
    }
  }
  out.lm.n_max = std::max(max_detail_n, 1);
  return out;
}

}  // namespace

MonolingualModel load_monolingual_model(const std::string& path) {
  auto parsed = parse_model_file(read_file(path), path);
  return MonolingualModel(std::move(parsed.lm));
}

TransferModel load_transfer_model(const std::string& path) {
  auto parsed = parse_model_file(read_file(path), path);
  return TransferModel(std::move(parsed.tm));
}

std::string format_model(const MonolingualModel* lm, const TransferModel* tm) {
  std::string out;
  if (lm != nullptr) {
    for (const auto& [word, p] : lm->tables().top) {
      out += "TOP\t" + word + "\t" + format_probability(p) + "\n";
    }
    for (const auto& [key, p] : lm->tables().dependency) {
      out += "DEP\t" + std::get<0>(key) + "\t" + std::get<1>(key) + "\t" +
             std::get<2>(key) + "\t" + format_probability(p) + "\n";
    }
    for (const auto& [key, p] : lm->tables().detail) {
      out += "DET\t" + std::get<0>(key) + "\t" + std::get<1>(key) + "\t" +
             std::to_string(std::get<2>(key)) + "\t" + format_probability(p) +
             "\n";
    }
    for (const auto& [seq, p] : lm->tables().sequencing) {
      std::string joined;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) joined += ",";
        joined += seq[i];
      }
      out += "SEQ\t" + joined + "\t" + format_probability(p) + "\n";
    }
  }
  if (tm != nullptr) {
    for (const auto& [key, p] : tm->lexical()) {
      out += "LEX\t" + key.first + "\t" + format_multiset(key.second) + "\t" +
             format_probability(p) + "\n";
    }
    for (std::size_t i = 0; i < tm->rules().size(); ++i) {
      const StructuralRule& rule = tm->rules()[i];
      out += "RULE\t" + std::to_string(i) + "\t" +
             format_shape(rule.source_shape) + "\t" +
             format_shape(rule.target_shape) + "\t" +
             format_rule_alignment(rule) + "\t" +
             format_probability(rule.probability) + "\n";
    }
  }
  return out;
}

void save_model(const std::string& path, const MonolingualModel* lm,
                const TransferModel* tm) {
  write_file(path, format_model(lm, tm));
}

std::vector<RecognitionHypothesis> parse_nbest(const std::string& text,
                                               const std::string& name) {
  std::vector<RecognitionHypothesis> hyps;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::size_t line_number = i + 1;
    auto fields = split_fields(lines[i]);
    if (fields.size() != 2) {
      malformed(name, line_number, "expected log_score<TAB>words");
    }
    double score = parse_real(fields[0], name, line_number);
    if (!std::isfinite(score)) {
      malformed(name, line_number, "acoustic score must be finite");
    }
    auto words = split_tokens(fields[1]);
    if (words.empty()) {
      malformed(name, line_number, "hypothesis has no words");
    }
    for (const auto& word : words) {
      if (!clean_token(word)) {
        malformed(name, line_number, "invalid word token \"" + word + "\"");
      }
    }
    hyps.push_back({std::move(words), score});
  }
  return hyps;
}

std::vector<RecognitionHypothesis> load_nbest(const std::string& path) {
  return parse_nbest(read_file(path), path);
}

}  // namespace depmt
