// Classifies a few short texts against the built-in diacritic tables plus a
// handful of stop words, printing the score vector for each.

#include <cstdio>
#include <string>
#include <vector>

#include "lid/lid.hpp"

int main() {
  std::vector<lid::LanguageEntry> entries = lid::builtin_lexicon().entries();
  const std::vector<std::vector<std::string>> stopwords = {
      {"le", "la", "les", "et", "est", "votre"},
      {"il", "la", "e", "che", "di", "non"},
      {"o", "a", "os", "que", "não", "com"},
      {"și", "în", "la", "cu", "nu", "este"},
      {"el", "la", "los", "y", "que", "con"},
  };
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries[i].lexicon.stopwords.insert(stopwords[i].begin(), stopwords[i].end());
  const lid::LexiconSet lex = lid::augment_with_stripped_variants(lid::LexiconSet(std::move(entries)));
  const lid::ScoringConfig cfg = lid::preset_config("test9");

  for (const char* text : {"Votre café est prêt", "Il ragazzo non è qui", "Eu não sei o que fazer",
                           "Mergem în parc și apoi acasă", "allí estaré"}) {
    const auto [verdict, scores] = lid::classify(lid::normalize_text(text), lex, cfg);
    std::printf("%-32s -> %s", text,
                verdict.is_classified() ? verdict.language->code.c_str() : std::string(lid::to_string(verdict.reason)).c_str());
    for (std::size_t i = 0; i < scores.scores.size(); ++i)
      std::printf("  %s=%.4f", scores.languages[i].code.c_str(), scores.scores[i]);
    std::printf("\n");
  }
}
