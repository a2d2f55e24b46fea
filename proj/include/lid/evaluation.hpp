#ifndef LID_EVALUATION_HPP_
#define LID_EVALUATION_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "lid/lexicon.hpp"
#include "lid/scorer.hpp"
#include "lid/text_normalizer.hpp"

namespace lid {

struct LabeledDocument {
  LanguageId gold;
  std::string text;
  /// Position within the corpus, counting only accepted documents.
  std::size_t id = 0;
};

enum class CorpusFormat { tsv, jsonl };

inline std::optional<CorpusFormat> parse_corpus_format(std::string_view s) {
  if (s == "tsv") return CorpusFormat::tsv;
  if (s == "jsonl") return CorpusFormat::jsonl;
  return std::nullopt;
}

struct CorpusIssue {
  std::size_t line = 0;
  std::string message;
};

struct Corpus {
  std::vector<LabeledDocument> documents;
  /// Lines that could not be parsed; they are skipped.
  std::vector<CorpusIssue> malformed;
  /// Parsed lines with an empty label or empty text; also skipped.
  std::size_t skipped_empty = 0;
  /// Non-blank lines seen.
  std::size_t lines = 0;
};

class CorpusError : public std::runtime_error {
 public:
  enum class Kind { io, too_many_malformed };

  CorpusError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Maximum share of malformed lines tolerated before loading aborts.
inline constexpr double kMaxMalformedShare = 0.10;

/// Reads `label<TAB>text` (later tabs stay inside the text) or JSON lines with
/// string fields `label` and `text`. Blank lines are ignored.
inline Corpus parse_corpus(std::istream& in, CorpusFormat format, const std::string& source = "<corpus>") {
  Corpus corpus;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++corpus.lines;

    std::string label;
    std::string text;
    if (!utf8::is_valid(line)) {
      corpus.malformed.push_back({number, "invalid UTF-8"});
      continue;
    }
    if (format == CorpusFormat::tsv) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        corpus.malformed.push_back({number, "no tab separator"});
        continue;
      }
      label = detail::trim(std::string_view(line).substr(0, tab));
      text = line.substr(tab + 1);
    } else {
      const auto object = nlohmann::json::parse(line, nullptr, false);
      if (object.is_discarded() || !object.is_object() || !object.contains("label") || !object.contains("text") ||
          !object["label"].is_string() || !object["text"].is_string()) {
        corpus.malformed.push_back({number, "expected an object with string fields 'label' and 'text'"});
        continue;
      }
      label = detail::trim(object["label"].get<std::string>());
      text = object["text"].get<std::string>();
    }
    if (label.empty() || text.empty()) {
      ++corpus.skipped_empty;
      continue;
    }
    corpus.documents.push_back({LanguageId(std::move(label)), std::move(text), corpus.documents.size()});
  }
  if (in.bad()) throw CorpusError(CorpusError::Kind::io, source + ": read error");

  const auto limit = kMaxMalformedShare * static_cast<double>(corpus.lines);
  if (static_cast<double>(corpus.malformed.size()) > limit) {
    std::ostringstream msg;
    msg << source << ": " << corpus.malformed.size() << " of " << corpus.lines
        << " lines are malformed (first at line " << corpus.malformed.front().line << ": "
        << corpus.malformed.front().message << ")";
    throw CorpusError(CorpusError::Kind::too_many_malformed, msg.str());
  }
  return corpus;
}

inline Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(CorpusError::Kind::io, path.string() + ": cannot open corpus");
  return parse_corpus(in, format, path.string());
}

/// Gold-major counts; column N holds unclassified documents.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<LanguageId> languages)
      : languages_(std::move(languages)),
        counts_(languages_.size(), std::vector<std::size_t>(languages_.size() + 1, 0)) {}

  const std::vector<LanguageId>& languages() const { return languages_; }
  std::size_t unclassified_column() const { return languages_.size(); }

  void add(std::size_t gold, std::optional<std::size_t> predicted) {
    ++counts_.at(gold).at(predicted.value_or(unclassified_column()));
  }

  std::size_t count(std::size_t gold, std::size_t predicted) const { return counts_.at(gold).at(predicted); }
  std::size_t unclassified(std::size_t gold) const { return counts_.at(gold).back(); }

  std::size_t row_total(std::size_t gold) const {
    std::size_t sum = 0;
    for (std::size_t c : counts_.at(gold)) sum += c;
    return sum;
  }

  std::size_t total() const {
    std::size_t sum = 0;
    for (std::size_t g = 0; g < counts_.size(); ++g) sum += row_total(g);
    return sum;
  }

  std::size_t trace() const {
    std::size_t sum = 0;
    for (std::size_t g = 0; g < counts_.size(); ++g) sum += counts_[g][g];
    return sum;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<LanguageId> languages_;
  std::vector<std::vector<std::size_t>> counts_;
};

struct LanguageStats {
  LanguageId language;
  std::size_t documents = 0;
  std::size_t correct = 0;
  std::size_t misclassified = 0;
  std::size_t unclassified = 0;
  std::size_t no_evidence = 0;
  std::size_t tie = 0;
  double accuracy = 0.0;
  double misclassified_rate = 0.0;
  double unclassified_rate = 0.0;
};

struct EvaluationReport {
  ScoringConfig config;
  std::string lexicon_fingerprint;
  ConfusionMatrix matrix;
  /// Gold languages that have at least one document, in lexicon order.
  std::vector<LanguageStats> per_language;
  std::size_t documents = 0;
  double overall_accuracy = 0.0;

  const LanguageStats* stats(const LanguageId& id) const {
    for (const auto& s : per_language)
      if (s.language == id) return &s;
    return nullptr;
  }
};

/// Derives per-language rates from a filled matrix. `no_evidence` and `ties`
/// split each gold row's unclassified count by reason; empty means unknown.
inline EvaluationReport summarize(ConfusionMatrix matrix, const ScoringConfig& cfg, std::string fingerprint,
                                  const std::vector<std::size_t>& no_evidence = {},
                                  const std::vector<std::size_t>& ties = {}) {
  EvaluationReport report;
  report.config = cfg;
  report.lexicon_fingerprint = std::move(fingerprint);
  report.matrix = std::move(matrix);
  const auto& ids = report.matrix.languages();
  for (std::size_t g = 0; g < ids.size(); ++g) {
    const std::size_t total = report.matrix.row_total(g);
    if (total == 0) continue;
    LanguageStats s;
    s.language = ids[g];
    s.documents = total;
    s.correct = report.matrix.count(g, g);
    s.unclassified = report.matrix.unclassified(g);
    s.misclassified = total - s.correct - s.unclassified;
    s.no_evidence = g < no_evidence.size() ? no_evidence[g] : 0;
    s.tie = g < ties.size() ? ties[g] : 0;
    const auto denom = static_cast<double>(total);
    s.accuracy = static_cast<double>(s.correct) / denom;
    s.unclassified_rate = static_cast<double>(s.unclassified) / denom;
    s.misclassified_rate = static_cast<double>(s.misclassified) / denom;
    report.per_language.push_back(std::move(s));
  }
  report.documents = report.matrix.total();
  report.overall_accuracy =
      report.documents == 0 ? 0.0 : static_cast<double>(report.matrix.trace()) / static_cast<double>(report.documents);
  return report;
}

namespace detail {

struct Outcome {
  std::optional<std::size_t> predicted;
  UnclassifiedReason reason = UnclassifiedReason::no_evidence;
};

inline Outcome classify_one(const std::string& text, const LexiconSet& lex, const ScoringConfig& cfg) {
  const Verdict v = decide(score_all(normalize_text(text), lex, cfg));
  if (v.is_classified()) return {lex.index_of(*v.language), v.reason};
  return {std::nullopt, v.reason};
}

}  // namespace detail

/// Classifies every document and aggregates in document order, so the report
/// does not depend on `parallelism`.
inline EvaluationReport evaluate(const std::vector<LabeledDocument>& corpus, const LexiconSet& lex,
                                 const ScoringConfig& cfg, std::size_t parallelism = 1) {
  if (parallelism == 0) throw std::invalid_argument("parallelism must be at least 1");
  detail::require_classifiable(lex);
  cfg.validate();

  std::vector<std::size_t> gold(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto index = lex.find(corpus[i].gold);
    if (!index)
      throw std::invalid_argument("document " + std::to_string(corpus[i].id) + " has gold label '" +
                                  corpus[i].gold.code + "' which is not in the lexicon");
    gold[i] = *index;
  }

  std::vector<detail::Outcome> outcomes(corpus.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(parallelism, corpus.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) outcomes[i] = detail::classify_one(corpus[i].text, lex, cfg);
  } else {
    const std::size_t chunk = (corpus.size() + workers - 1) / workers;
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::size_t end = std::min(corpus.size(), (w + 1) * chunk);
          for (std::size_t i = w * chunk; i < end; ++i) outcomes[i] = detail::classify_one(corpus[i].text, lex, cfg);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  ConfusionMatrix matrix(lex.ids());
  std::vector<std::size_t> no_evidence(lex.size(), 0);
  std::vector<std::size_t> ties(lex.size(), 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    matrix.add(gold[i], outcomes[i].predicted);
    if (!outcomes[i].predicted) ++(outcomes[i].reason == UnclassifiedReason::tie ? ties : no_evidence)[gold[i]];
  }
  return summarize(std::move(matrix), cfg, lex.fingerprint(), no_evidence, ties);
}

}  // namespace lid

#endif  // LID_EVALUATION_HPP_
