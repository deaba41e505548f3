#ifndef TEXMETA_UTF8_HPP
#define TEXMETA_UTF8_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace texmeta::utf8 {

/// Decodes the code point starting at `pos` and advances `pos`.
/// Returns nullopt (and leaves `pos` untouched) on a malformed sequence.
inline std::optional<char32_t> decode(std::string_view s, std::size_t& pos) {
  if (pos >= s.size()) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    ++pos;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return std::nullopt;
  }
  if (pos + len > s.size()) return std::nullopt;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  // overlong forms, surrogates, out of range
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return std::nullopt;
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
  pos += len;
  return cp;
}

/// Byte offset of the first invalid sequence, or nullopt if `s` is valid UTF-8.
inline std::optional<std::size_t> first_invalid(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (!decode(s, pos)) return pos;
  }
  return std::nullopt;
}

inline bool is_valid(std::string_view s) { return !first_invalid(s).has_value(); }

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

inline std::string encode(char32_t cp) {
  std::string out;
  append(out, cp);
  return out;
}

/// Length in bytes of the code point starting at `pos` (1 for invalid bytes).
inline std::size_t char_length(std::string_view s, std::size_t pos) {
  std::size_t p = pos;
  return decode(s, p) ? p - pos : 1;
}

namespace detail {
inline const icu::Normalizer2& instance(const char* which) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = (std::string_view(which) == "nfc") ? icu::Normalizer2::getNFCInstance(status)
                                                                  : icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw std::runtime_error("ICU normalizer unavailable");
  return *n;
}

inline std::string normalize_with(const icu::Normalizer2& n, std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  const icu::UnicodeString dst = n.normalize(src, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}
}  // namespace detail

/// Unicode Normalization Form C.
inline std::string nfc(std::string_view s) { return detail::normalize_with(detail::instance("nfc"), s); }

inline bool is_nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  return detail::instance("nfc").isNormalized(src, status) && U_SUCCESS(status);
}

/// Case-folded, diacritic-stripped form used for name comparisons.
inline std::string fold_for_compare(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.foldCase();
  const icu::UnicodeString decomposed = detail::instance("nfd").normalize(u, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");
  icu::UnicodeString stripped;
  for (int32_t i = 0; i < decomposed.length();) {
    const UChar32 c = decomposed.char32At(i);
    if (u_charType(c) != U_NON_SPACING_MARK) stripped.append(c);
    i += U16_LENGTH(c);
  }
  std::string out;
  stripped.toUTF8String(out);
  return out;
}

}  // namespace texmeta::utf8

#endif
