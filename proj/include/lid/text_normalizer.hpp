#ifndef LID_TEXT_NORMALIZER_HPP_
#define LID_TEXT_NORMALIZER_HPP_

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lid/utf8.hpp"

namespace lid {

/// A document reduced to what scoring looks at: lowercase NFC word tokens made
/// of letters only, plus per-character counts over those tokens.
///
/// Token and character lookups are hash lookups, so scoring one language costs
/// one probe per dictionary term regardless of document length.
class NormalizedText {
 public:
  NormalizedText() = default;

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::unordered_map<char32_t, std::size_t>& char_freq() const { return char_freq_; }

  /// Code points in the original input. Diagnostic only; not part of equality.
  std::size_t raw_length() const { return raw_length_; }

  std::size_t token_count(const std::string& term) const {
    auto it = token_freq_.find(term);
    return it == token_freq_.end() ? 0 : it->second;
  }

  std::size_t char_count(char32_t c) const {
    auto it = char_freq_.find(c);
    return it == char_freq_.end() ? 0 : it->second;
  }

  std::size_t total_chars() const { return total_chars_; }
  bool empty() const { return tokens_.empty(); }

  friend bool operator==(const NormalizedText& a, const NormalizedText& b) {
    return a.tokens_ == b.tokens_ && a.char_freq_ == b.char_freq_;
  }

 private:
  friend NormalizedText normalize_text(std::string_view raw);

  void add_token(std::u32string_view token) {
    for (char32_t c : token) ++char_freq_[c];
    total_chars_ += token.size();
    auto encoded = utf8::encode(token);
    ++token_freq_[encoded];
    tokens_.push_back(std::move(encoded));
  }

  std::vector<std::string> tokens_;
  std::unordered_map<char32_t, std::size_t> char_freq_;
  std::unordered_map<std::string, std::size_t> token_freq_;
  std::size_t total_chars_ = 0;
  std::size_t raw_length_ = 0;
};

namespace detail {

inline const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr)
    throw std::runtime_error(std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
  return *instance;
}

inline icu::UnicodeString to_nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) throw std::runtime_error(std::string("NFC normalization failed: ") + u_errorName(status));
  return out;
}

inline std::u32string to_utf32(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) out.push_back(static_cast<char32_t>(s.char32At(i)));
  return out;
}

inline bool is_ascii_alnum(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
}

/// `scheme://...` or `www.` chunks, ignoring leading punctuation such as "(".
/// Expects lowercased input.
inline bool is_url_chunk(std::u32string_view chunk) {
  std::size_t start = 0;
  while (start < chunk.size() && !is_ascii_alnum(chunk[start])) ++start;
  chunk.remove_prefix(start);
  if (chunk.starts_with(U"www.")) return true;
  if (chunk.empty() || chunk[0] < U'a' || chunk[0] > U'z') return false;
  std::size_t i = 1;
  while (i < chunk.size() && (is_ascii_alnum(chunk[i]) || chunk[i] == U'+' || chunk[i] == U'.' || chunk[i] == U'-')) ++i;
  return chunk.substr(i).starts_with(U"://");
}

}  // namespace detail

/// NFC composition followed by full lowercase mapping. Lowercasing can emit
/// decomposed sequences, so the result is recomposed.
inline std::u32string canonical_lowercase(std::string_view raw) {
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text = detail::to_nfc(text);
  text.toLower(icu::Locale::getRoot());
  return detail::to_utf32(detail::to_nfc(text));
}

/// Only Unicode letters (general category L*) survive into tokens.
inline bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)) != 0; }

/// Tokenizes raw UTF-8 text. URL chunks are dropped whole; anything that is not
/// a letter separates tokens, which also strips '#' and '@' sigils.
inline NormalizedText normalize_text(std::string_view raw) {
  NormalizedText out;
  out.raw_length_ = utf8::length(raw);

  const std::u32string text = canonical_lowercase(raw);
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && u_isUWhiteSpace(static_cast<UChar32>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !u_isUWhiteSpace(static_cast<UChar32>(text[end]))) ++end;
    const std::u32string_view chunk(text.data() + pos, end - pos);
    pos = end;
    if (chunk.empty() || detail::is_url_chunk(chunk)) continue;

    std::size_t token_start = 0;
    for (std::size_t i = 0; i <= chunk.size(); ++i) {
      if (i < chunk.size() && is_letter(chunk[i])) continue;
      if (i > token_start) out.add_token(chunk.substr(token_start, i - token_start));
      token_start = i + 1;
    }
  }
  return out;
}

inline std::size_t diacritic_count(const NormalizedText& nt, char32_t c) { return nt.char_count(c); }

inline std::size_t token_count(const NormalizedText& nt, const std::string& term) { return nt.token_count(term); }

}  // namespace lid

#endif  // LID_TEXT_NORMALIZER_HPP_
