#ifndef LID_LEXICON_HPP_
#define LID_LEXICON_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lid/text_normalizer.hpp"
#include "lid/utf8.hpp"

namespace lid {

/// Short lowercase language code such as "fr" or "ro".
struct LanguageId {
  std::string code;

  LanguageId() = default;
  explicit LanguageId(std::string c) : code(std::move(c)) {}

  friend auto operator<=>(const LanguageId&, const LanguageId&) = default;
};

inline bool is_valid_language_code(std::string_view code) {
  if (code.empty()) return false;
  return std::all_of(code.begin(), code.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

/// Stop words and diacritics are separate namespaces: the stop word "y" and a
/// diacritic never share an entry in the term index.
enum class TermKind { stopword, diacritic };

struct LanguageLexicon {
  std::set<std::string> stopwords;
  std::set<char32_t> diacritics;

  friend bool operator==(const LanguageLexicon&, const LanguageLexicon&) = default;
};

struct LanguageEntry {
  LanguageId id;
  LanguageLexicon lexicon;

  friend bool operator==(const LanguageEntry&, const LanguageEntry&) = default;
};

struct Finding {
  enum class Severity { info, warning, error };
  Severity severity = Severity::warning;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

inline std::string_view to_string(Finding::Severity s) {
  switch (s) {
    case Finding::Severity::info: return "info";
    case Finding::Severity::warning: return "warning";
    case Finding::Severity::error: return "error";
  }
  return "?";
}

/// For each term, the indices of the languages whose dictionary lists it.
/// Index vectors are ascending.
struct TermIndex {
  std::unordered_map<std::string, std::vector<std::size_t>> words;
  std::unordered_map<char32_t, std::vector<std::size_t>> marks;

  friend bool operator==(const TermIndex&, const TermIndex&) = default;
};

inline TermIndex build_term_index(const std::vector<LanguageEntry>& entries) {
  TermIndex index;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (const auto& w : entries[i].lexicon.stopwords) index.words[w].push_back(i);
    for (char32_t d : entries[i].lexicon.diacritics) index.marks[d].push_back(i);
  }
  return index;
}

class LexiconError : public std::runtime_error {
 public:
  LexiconError(std::filesystem::path path, std::size_t line, const std::string& what)
      : std::runtime_error(format(path, line, what)), path_(std::move(path)), line_(line) {}

  const std::filesystem::path& path() const { return path_; }
  /// 1-based; 0 when the problem concerns the file as a whole.
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::filesystem::path& path, std::size_t line, const std::string& what) {
    std::string out = path.string();
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + what;
  }

  std::filesystem::path path_;
  std::size_t line_;
};

/// An ordered, immutable set of language dictionaries with the cross-language
/// term index that yields each term's spread (the number of languages that
/// list it).
class LexiconSet {
 public:
  struct SpreadWord {
    std::string term;
    std::size_t spread;
  };
  struct SpreadMark {
    char32_t mark;
    std::size_t spread;
  };

  LexiconSet() = default;

  /// Throws std::invalid_argument on an invalid or duplicate language code.
  explicit LexiconSet(std::vector<LanguageEntry> entries, std::vector<Finding> load_notes = {})
      : entries_(std::move(entries)), load_notes_(std::move(load_notes)) {
    std::set<std::string> seen;
    for (const auto& e : entries_) {
      if (!is_valid_language_code(e.id.code))
        throw std::invalid_argument("invalid language code '" + e.id.code + "'");
      if (!seen.insert(e.id.code).second) throw std::invalid_argument("duplicate language code '" + e.id.code + "'");
    }
    index_ = build_term_index(entries_);
    words_.resize(entries_.size());
    marks_.resize(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      for (const auto& w : entries_[i].lexicon.stopwords) words_[i].push_back({w, index_.words.at(w).size()});
      for (char32_t d : entries_[i].lexicon.diacritics) marks_[i].push_back({d, index_.marks.at(d).size()});
    }
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<LanguageEntry>& entries() const { return entries_; }
  const LanguageId& id(std::size_t index) const { return entries_.at(index).id; }
  const LanguageLexicon& lexicon(std::size_t index) const { return entries_.at(index).lexicon; }

  std::optional<std::size_t> find(const LanguageId& id) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].id == id) return i;
    return std::nullopt;
  }

  std::size_t index_of(const LanguageId& id) const {
    if (auto i = find(id)) return *i;
    throw std::invalid_argument("unknown language '" + id.code + "'");
  }

  std::vector<LanguageId> ids() const {
    std::vector<LanguageId> out;
    for (const auto& e : entries_) out.push_back(e.id);
    return out;
  }

  const TermIndex& term_index() const { return index_; }

  std::size_t word_spread(const std::string& word) const {
    auto it = index_.words.find(word);
    return it == index_.words.end() ? 0 : it->second.size();
  }

  std::size_t mark_spread(char32_t mark) const {
    auto it = index_.marks.find(mark);
    return it == index_.marks.end() ? 0 : it->second.size();
  }

  /// True if any language lists `c` as a diacritic.
  bool is_known_mark(char32_t c) const { return index_.marks.contains(c); }

  const std::vector<SpreadWord>& spread_words(std::size_t index) const { return words_.at(index); }
  const std::vector<SpreadMark>& spread_marks(std::size_t index) const { return marks_.at(index); }

  /// Normalization changes the loader had to make.
  const std::vector<Finding>& load_notes() const { return load_notes_; }

  /// 64-bit FNV-1a over a canonical dump of every language, rendered as hex.
  std::string fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::string_view s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
    };
    for (const auto& e : entries_) {
      mix("[" + e.id.code + "]\n");
      for (const auto& w : e.lexicon.stopwords) mix("w " + w + "\n");
      for (char32_t d : e.lexicon.diacritics) mix("d " + utf8::encode(d) + "\n");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out = "fnv1a64:";
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(kHex[(h >> shift) & 0xF]);
    return out;
  }

  friend bool operator==(const LexiconSet& a, const LexiconSet& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<LanguageEntry> entries_;
  std::vector<Finding> load_notes_;
  TermIndex index_;
  std::vector<std::vector<SpreadWord>> words_;
  std::vector<std::vector<SpreadMark>> marks_;
};

inline std::size_t term_language_count(const LexiconSet& lex, TermKind kind, std::string_view term) {
  if (kind == TermKind::stopword) return lex.word_spread(std::string(term));
  const std::u32string cps = utf8::decode(term);
  return cps.size() == 1 ? lex.mark_spread(cps[0]) : 0;
}

inline std::size_t term_language_count(const LexiconSet& lex, char32_t mark) { return lex.mark_spread(mark); }

// Built-in diacritic dictionaries, one row per language in the order
// French, Italian, Portuguese, Romanian, Spanish. Romanian lists both the
// comma-below letters and the cedilla forms that legacy encodings produce.
struct BuiltinDiacriticRow {
  std::string_view code;
  std::string_view letters;
};

inline constexpr std::array<BuiltinDiacriticRow, 5> kBuiltinDiacritics{{
    {"fr", "àâæçèéêëîïôœùûü"},
    {"it", "àáèéìíòóùú"},
    {"pt", "áâãàçéêíóôõú"},
    {"ro", "ăâîșşțţ"},
    {"es", "áéíóúñü"},
}};

inline std::map<LanguageId, std::set<char32_t>> builtin_diacritics() {
  std::map<LanguageId, std::set<char32_t>> out;
  for (const auto& row : kBuiltinDiacritics) {
    const std::u32string cps = utf8::decode(row.letters);
    out[LanguageId(std::string(row.code))] = std::set<char32_t>(cps.begin(), cps.end());
  }
  return out;
}

/// The five built-in diacritic dictionaries with empty stop-word lists.
inline LexiconSet builtin_lexicon() {
  const auto marks = builtin_diacritics();
  std::vector<LanguageEntry> entries;
  for (const auto& row : kBuiltinDiacritics) {
    LanguageId id{std::string(row.code)};
    entries.push_back({id, {{}, marks.at(id)}});
  }
  return LexiconSet(std::move(entries));
}

/// ASCII replacement for an accented letter, or empty when the letter is not
/// in the folding table.
inline std::string_view fold_letter(char32_t c) {
  switch (c) {
    case U'à': case U'â': case U'á': case U'ă': case U'ã': return "a";
    case U'æ': return "ae";
    case U'ç': return "c";
    case U'è': case U'é': case U'ê': case U'ë': return "e";
    case U'î': case U'ï': case U'ì': case U'í': return "i";
    case U'ô': case U'ò': case U'ó': case U'õ': return "o";
    case U'œ': return "oe";
    case U'ù': case U'û': case U'ü': case U'ú': return "u";
    case U'ñ': return "n";
    case U'ș': case U'ş': return "s";
    case U'ț': case U'ţ': return "t";
    default: return {};
  }
}

inline std::string strip_diacritics(std::string_view term) {
  std::string out;
  out.reserve(term.size());
  for (char32_t c : utf8::decode(term)) {
    const std::string_view folded = fold_letter(c);
    if (folded.empty())
      utf8::append(out, c);
    else
      out.append(folded);
  }
  return out;
}

/// Adds the diacritic-free spelling of every stop word to its own language.
inline LexiconSet augment_with_stripped_variants(const LexiconSet& lex) {
  std::vector<LanguageEntry> entries = lex.entries();
  for (auto& e : entries) {
    std::set<std::string> stripped;
    for (const auto& w : e.lexicon.stopwords) stripped.insert(strip_diacritics(w));
    e.lexicon.stopwords.merge(stripped);
  }
  return LexiconSet(std::move(entries), lex.load_notes());
}

namespace detail {

inline std::string codepoint_label(char32_t c) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string digits;
  for (auto v = static_cast<std::uint32_t>(c); v != 0 || digits.size() < 4; v >>= 4) digits.insert(digits.begin(), kHex[v & 0xF]);
  return "U+" + digits;
}

inline std::string trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

/// Non-blank, non-comment lines with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string>> read_entries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconError(path, 0, "cannot open file");
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string entry = trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    if (!utf8::is_valid(entry)) throw LexiconError(path, number, "invalid UTF-8");
    out.emplace_back(number, std::move(entry));
  }
  return out;
}

inline std::set<std::string> load_stopwords(const std::filesystem::path& path, std::vector<Finding>& notes) {
  std::set<std::string> out;
  for (const auto& [line, entry] : read_entries(path)) {
    const NormalizedText nt = normalize_text(entry);
    if (nt.tokens().empty())
      throw LexiconError(path, line, "stop word '" + entry + "' has no letters at line " + std::to_string(line));
    if (nt.tokens().size() > 1)
      throw LexiconError(path, line, "multi-token stop word '" + entry + "' at line " + std::to_string(line));
    const std::string& word = nt.tokens().front();
    if (word != entry)
      notes.push_back({Finding::Severity::warning, path.string() + ":" + std::to_string(line) + ": stop word '" +
                                                       entry + "' is not normalization-stable; loaded as '" + word +
                                                       "'"});
    out.insert(word);
  }
  return out;
}

inline std::set<char32_t> load_diacritics(const std::filesystem::path& path, std::vector<Finding>& notes) {
  std::set<char32_t> out;
  for (const auto& [line, entry] : read_entries(path)) {
    const NormalizedText nt = normalize_text(entry);
    if (nt.tokens().empty())
      throw LexiconError(path, line, "non-alphabetic diacritic '" + entry + "' at line " + std::to_string(line));
    const std::u32string cps = utf8::decode(nt.tokens().front());
    if (nt.tokens().size() > 1 || cps.size() != 1)
      throw LexiconError(path, line, "multi-character diacritic '" + entry + "' at line " + std::to_string(line));
    if (nt.tokens().front() != entry)
      notes.push_back({Finding::Severity::warning, path.string() + ":" + std::to_string(line) + ": diacritic '" +
                                                       entry + "' is not normalization-stable; loaded as '" +
                                                       nt.tokens().front() + "'"});
    out.insert(cps.front());
  }
  return out;
}

}  // namespace detail

/// Name of the optional file at the lexicon root fixing language order.
inline constexpr std::string_view kLanguageManifest = "languages.txt";

/// Loads `<root>/<lang>/{stopwords,diacritics}.txt`. Language order comes from
/// `<root>/languages.txt` when present, otherwise from sorted directory names.
inline LexiconSet load_lexicon(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw LexiconError(root, 0, "lexicon root is not a directory");

  std::vector<std::pair<std::string, std::size_t>> codes;
  const fs::path manifest = root / kLanguageManifest;
  if (fs::exists(manifest)) {
    std::set<std::string> seen;
    for (auto& [line, code] : detail::read_entries(manifest)) {
      if (!seen.insert(code).second) throw LexiconError(manifest, line, "duplicate language code '" + code + "'");
      codes.emplace_back(std::move(code), line);
    }
  } else {
    std::vector<std::string> dirs;
    for (const auto& item : fs::directory_iterator(root))
      if (item.is_directory()) dirs.push_back(item.path().filename().string());
    std::sort(dirs.begin(), dirs.end());
    for (auto& d : dirs) codes.emplace_back(std::move(d), 0);
  }
  if (codes.empty()) throw LexiconError(root, 0, "empty language set");

  std::vector<LanguageEntry> entries;
  std::vector<Finding> notes;
  for (const auto& [code, line] : codes) {
    if (!is_valid_language_code(code))
      throw LexiconError(line ? manifest : root / code, line, "invalid language code '" + code + "'");
    const fs::path dir = root / code;
    if (!fs::is_directory(dir)) throw LexiconError(dir, 0, "missing language directory");
    for (const char* name : {"stopwords.txt", "diacritics.txt"})
      if (!fs::is_regular_file(dir / name)) throw LexiconError(dir / name, 0, "missing file");
    LanguageLexicon lexicon;
    lexicon.stopwords = detail::load_stopwords(dir / "stopwords.txt", notes);
    lexicon.diacritics = detail::load_diacritics(dir / "diacritics.txt", notes);
    entries.push_back({LanguageId(code), std::move(lexicon)});
  }
  return LexiconSet(std::move(entries), std::move(notes));
}

/// Writes the directory layout read by load_lexicon, including the manifest.
inline void save_lexicon(const LexiconSet& lex, const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  fs::create_directories(root);
  auto open = [](const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw LexiconError(path, 0, "cannot write file");
    return out;
  };
  {
    auto manifest = open(root / kLanguageManifest);
    for (const auto& e : lex.entries()) manifest << e.id.code << '\n';
  }
  for (const auto& e : lex.entries()) {
    const fs::path dir = root / e.id.code;
    fs::create_directories(dir);
    auto words = open(dir / "stopwords.txt");
    for (const auto& w : e.lexicon.stopwords) words << w << '\n';
    auto marks = open(dir / "diacritics.txt");
    for (char32_t d : e.lexicon.diacritics) marks << utf8::encode(d) << '\n';
  }
}

/// Diagnostics for dictionary quality. Error-severity findings mean some part
/// of the lexicon can never contribute to a score.
inline std::vector<Finding> validate_lexicon(const LexiconSet& lex) {
  using Severity = Finding::Severity;
  std::vector<Finding> out = lex.load_notes();
  const std::size_t n_languages = lex.size();
  if (n_languages < 2)
    out.push_back({Severity::error, "lexicon has " + std::to_string(n_languages) +
                                        " language(s); classification needs at least 2"});

  for (std::size_t i = 0; i < n_languages; ++i) {
    const auto& code = lex.id(i).code;
    const auto& lexicon = lex.lexicon(i);
    if (lexicon.diacritics.empty()) out.push_back({Severity::warning, "language '" + code + "' has no diacritics"});
    if (lexicon.stopwords.empty() && lexicon.diacritics.empty())
      out.push_back({Severity::error, "language '" + code + "' has empty dictionaries and can never score"});
    for (char32_t d : lexicon.diacritics)
      if (!is_letter(d))
        out.push_back({Severity::error, "language '" + code + "': diacritic " + detail::codepoint_label(d) +
                                            " is not a letter"});
    for (const auto& w : lexicon.stopwords) {
      const NormalizedText nt = normalize_text(w);
      if (nt.tokens().size() != 1)
        out.push_back({Severity::error, "language '" + code + "': stop word '" + w +
                                            "' does not normalize to a single token and can never match"});
      else if (nt.tokens().front() != w)
        out.push_back({Severity::warning, "language '" + code + "': stop word '" + w +
                                              "' is not normalization-stable (normalizes to '" +
                                              nt.tokens().front() + "')"});
    }
  }

  // Shared stop words, reported once each in lexicon-then-alphabetical order.
  std::set<std::string> reported;
  for (std::size_t i = 0; i < n_languages; ++i) {
    for (const auto& w : lex.lexicon(i).stopwords) {
      const auto& holders = lex.term_index().words.at(w);
      if (holders.size() < 2 || !reported.insert(w).second) continue;
      std::string names;
      for (std::size_t h : holders) names += (names.empty() ? "" : ", ") + lex.id(h).code;
      std::string message = "stop word '" + w + "' shared by n=" + std::to_string(holders.size()) + " of " +
                            std::to_string(n_languages) + " languages (" + names + ")";
      if (holders.size() == n_languages) message += "; it carries no discriminative weight";
      out.push_back({Severity::warning, std::move(message)});
    }
  }

  // Accented letters used by stop words but absent from every diacritic set.
  std::set<char32_t> unlisted;
  for (const auto& e : lex.entries())
    for (const auto& w : e.lexicon.stopwords)
      for (char32_t c : utf8::decode(w))
        if (c > 0x7F && !lex.is_known_mark(c)) unlisted.insert(c);
  for (char32_t c : unlisted)
    out.push_back({Severity::info, "letter '" + utf8::encode(c) + "' occurs in stop words but is listed in no language's diacritics"});
  return out;
}

inline bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Finding::Severity::error; });
}

}  // namespace lid

#endif  // LID_LEXICON_HPP_
