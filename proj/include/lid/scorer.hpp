#ifndef LID_SCORER_HPP_
#define LID_SCORER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lid/lexicon.hpp"
#include "lid/text_normalizer.hpp"

namespace lid {

/// Term-frequency branch: raw count, or ln(1 + count).
enum class TfMode { raw, log };

/// Term-weight branch: 1, N/n, or ln(1 + N/n), where N is the number of
/// languages and n the number of languages listing the term.
enum class WeightMode { unit, ratio, log_ratio };

inline std::string_view to_string(TfMode m) { return m == TfMode::raw ? "raw" : "log"; }

inline std::string_view to_string(WeightMode m) {
  switch (m) {
    case WeightMode::unit: return "unit";
    case WeightMode::ratio: return "ratio";
    case WeightMode::log_ratio: return "log_ratio";
  }
  return "?";
}

inline std::optional<TfMode> parse_tf_mode(std::string_view s) {
  if (s == "raw") return TfMode::raw;
  if (s == "log") return TfMode::log;
  return std::nullopt;
}

inline std::optional<WeightMode> parse_weight_mode(std::string_view s) {
  if (s == "unit") return WeightMode::unit;
  if (s == "ratio") return WeightMode::ratio;
  if (s == "log_ratio") return WeightMode::log_ratio;
  return std::nullopt;
}

struct ScoringConfig {
  /// Stop-word coefficient; diacritics get 1 - p.
  double p = 1.0 / 3.0;
  TfMode tf = TfMode::log;
  WeightMode weight = WeightMode::log_ratio;
  /// Score diacritic-free texts with p = 1.
  bool stopword_fallback = true;

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  }

  friend bool operator==(const ScoringConfig&, const ScoringConfig&) = default;
};

inline constexpr std::array<std::string_view, 9> kPresetNames{"test1", "test2", "test3", "test4", "test5",
                                                              "test6", "test7", "test8", "test9"};

/// The nine experimental configurations. test1/test2 score diacritics only and
/// keep the stop-word fallback off; every other preset enables it.
inline ScoringConfig preset_config(std::string_view name) {
  constexpr double half = 1.0 / 2.0;
  constexpr double third = 1.0 / 3.0;
  if (name == "test1") return {0.0, TfMode::raw, WeightMode::unit, false};
  if (name == "test2") return {0.0, TfMode::raw, WeightMode::ratio, false};
  if (name == "test3") return {1.0, TfMode::raw, WeightMode::unit, true};
  if (name == "test4") return {1.0, TfMode::raw, WeightMode::ratio, true};
  if (name == "test5") return {half, TfMode::raw, WeightMode::unit, true};
  if (name == "test6") return {third, TfMode::raw, WeightMode::unit, true};
  if (name == "test7") return {half, TfMode::raw, WeightMode::ratio, true};
  if (name == "test8") return {third, TfMode::raw, WeightMode::ratio, true};
  if (name == "test9") return {third, TfMode::log, WeightMode::log_ratio, true};
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

inline double tf(std::size_t count, TfMode mode) {
  const auto c = static_cast<double>(count);
  return mode == TfMode::raw ? c : std::log1p(c);
}

/// Weight of a term listed by `spread` of `languages` languages.
inline double weight_for_spread(std::size_t languages, std::size_t spread, WeightMode mode) {
  if (mode == WeightMode::unit) return 1.0;
  const double ratio = static_cast<double>(languages) / static_cast<double>(spread);
  return mode == WeightMode::ratio ? ratio : std::log1p(ratio);
}

/// Throws std::invalid_argument unless `term` is in `lang`'s dictionary of
/// the given kind.
inline double weight(TermKind kind, std::string_view term, const LanguageId& lang, const LexiconSet& lex,
                     WeightMode mode) {
  const LanguageLexicon& dict = lex.lexicon(lex.index_of(lang));
  bool member = false;
  if (kind == TermKind::stopword) {
    member = dict.stopwords.contains(std::string(term));
  } else {
    const std::u32string cps = utf8::decode(term);
    member = cps.size() == 1 && dict.diacritics.contains(cps[0]);
  }
  if (!member) throw std::invalid_argument("term '" + std::string(term) + "' is not in the dictionary of '" + lang.code + "'");
  return weight_for_spread(lex.size(), term_language_count(lex, kind, term), mode);
}

/// Per-language scores in lexicon order.
struct ScoreVector {
  std::vector<LanguageId> languages;
  std::vector<double> scores;

  double at(const LanguageId& id) const {
    for (std::size_t i = 0; i < languages.size(); ++i)
      if (languages[i] == id) return scores[i];
    throw std::invalid_argument("unknown language '" + id.code + "'");
  }
};

enum class UnclassifiedReason { no_evidence, tie };

inline std::string_view to_string(UnclassifiedReason r) { return r == UnclassifiedReason::tie ? "tie" : "no_evidence"; }

struct Verdict {
  std::optional<LanguageId> language;
  UnclassifiedReason reason = UnclassifiedReason::no_evidence;

  static Verdict classified(LanguageId id) { return {std::move(id), UnclassifiedReason::no_evidence}; }
  static Verdict unclassified(UnclassifiedReason why) { return {std::nullopt, why}; }

  bool is_classified() const { return language.has_value(); }

  friend bool operator==(const Verdict& a, const Verdict& b) {
    if (a.is_classified() != b.is_classified()) return false;
    return a.is_classified() ? *a.language == *b.language : a.reason == b.reason;
  }
};

/// Relative tolerance under which two top scores count as tied.
inline constexpr double kTieTolerance = 1e-12;

namespace detail {

inline void require_classifiable(const LexiconSet& lex) {
  if (lex.size() < 2)
    throw std::invalid_argument("classification needs at least 2 languages, lexicon has " + std::to_string(lex.size()));
}

inline double score_at(const NormalizedText& nt, std::size_t lang, const LexiconSet& lex, const ScoringConfig& cfg) {
  const std::size_t languages = lex.size();
  double words = 0.0;
  if (cfg.p > 0.0) {
    for (const auto& [term, spread] : lex.spread_words(lang)) {
      const std::size_t count = nt.token_count(term);
      if (count != 0) words += tf(count, cfg.tf) * weight_for_spread(languages, spread, cfg.weight);
    }
  }
  double marks = 0.0;
  if (cfg.p < 1.0) {
    for (const auto& [mark, spread] : lex.spread_marks(lang)) {
      const std::size_t count = nt.char_count(mark);
      if (count != 0) marks += tf(count, cfg.tf) * weight_for_spread(languages, spread, cfg.weight);
    }
  }
  return cfg.p * words + (1.0 - cfg.p) * marks;
}

}  // namespace detail

/// Scores one language with `cfg.p` exactly as given; the fallback rule is
/// applied by score_all. Cost is linear in that language's dictionary size.
inline double score_language(const NormalizedText& nt, const LanguageId& lang, const LexiconSet& lex,
                             const ScoringConfig& cfg) {
  cfg.validate();
  return detail::score_at(nt, lex.index_of(lang), lex, cfg);
}

/// p after the fallback rule: 1 when fallback is on and the text contains no
/// character from any language's diacritic set.
inline double effective_p(const NormalizedText& nt, const LexiconSet& lex, const ScoringConfig& cfg) {
  if (!cfg.stopword_fallback) return cfg.p;
  for (const auto& [c, count] : nt.char_freq())
    if (lex.is_known_mark(c)) return cfg.p;
  return 1.0;
}

inline ScoreVector score_all(const NormalizedText& nt, const LexiconSet& lex, const ScoringConfig& cfg) {
  detail::require_classifiable(lex);
  cfg.validate();
  ScoringConfig effective = cfg;
  effective.p = effective_p(nt, lex, cfg);
  ScoreVector out;
  out.languages = lex.ids();
  out.scores.reserve(lex.size());
  for (std::size_t i = 0; i < lex.size(); ++i) out.scores.push_back(detail::score_at(nt, i, lex, effective));
  return out;
}

/// Classified only for a unique, strictly positive maximum.
inline Verdict decide(const ScoreVector& sv) {
  if (sv.scores.empty()) return Verdict::unclassified(UnclassifiedReason::no_evidence);
  const auto best = std::max_element(sv.scores.begin(), sv.scores.end());
  if (!(*best > 0.0)) return Verdict::unclassified(UnclassifiedReason::no_evidence);
  const double floor = *best - kTieTolerance * *best;
  const auto at_top = std::count_if(sv.scores.begin(), sv.scores.end(), [floor](double s) { return s >= floor; });
  if (at_top > 1) return Verdict::unclassified(UnclassifiedReason::tie);
  return Verdict::classified(sv.languages[static_cast<std::size_t>(best - sv.scores.begin())]);
}

inline std::pair<Verdict, ScoreVector> classify(const NormalizedText& nt, const LexiconSet& lex,
                                                const ScoringConfig& cfg) {
  ScoreVector sv = score_all(nt, lex, cfg);
  Verdict v = decide(sv);
  return {std::move(v), std::move(sv)};
}

}  // namespace lid

#endif  // LID_SCORER_HPP_
