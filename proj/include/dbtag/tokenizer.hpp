#pragma once

#include <cstdint>
#include <string_view>

#include "dbtag/core.hpp"

namespace dbtag {

namespace detail {

struct Utf8Char {
  uint32_t cp = 0;
  size_t len = 1;
};

/// Decodes the code point starting at byte i. Invalid sequences decode as the
/// single raw byte so tokenization never fails on malformed input.
inline Utf8Char decode_utf8(std::string_view s, size_t i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  size_t len = 0;
  uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1};
  }
  if (i + len > s.size()) return {b0, 1};
  for (size_t k = 1; k < len; ++k) {
    unsigned char bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0) != 0x80) return {b0, 1};
    cp = (cp << 6) | (bk & 0x3F);
  }
  return {cp, len};
}

inline bool is_unicode_space(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

/// Word characters stay inside tokens; everything else peels at chunk edges.
/// ASCII letters/digits are words; non-ASCII code points count as words too,
/// except a small set of common punctuation.
inline bool is_word_char(uint32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
  }
  if (is_unicode_space(cp)) return false;
  if (cp >= 0x2010 && cp <= 0x2027) return false;  // dashes, quotes, daggers, ellipsis
  if (cp >= 0x2030 && cp <= 0x205E) return false;  // general punctuation
  switch (cp) {
    case 0xA1: case 0xAB: case 0xB7: case 0xBB: case 0xBF:
    case 0x3001: case 0x3002: case 0xFF01: case 0xFF0C:
    case 0xFF1A: case 0xFF1B: case 0xFF1F:
      return false;
    default:
      return true;
  }
}

}  // namespace detail

/// Splits a question into word and punctuation tokens with byte offsets.
/// Rules: split on Unicode whitespace; peel leading/trailing non-alphanumeric
/// characters of each chunk into single-character tokens; keep interior
/// characters (apostrophes, hyphens, decimal points) inside the token.
inline NlqDoc tokenize(std::string_view text) {
  NlqDoc doc;
  doc.raw.assign(text);

  auto push = [&](size_t start, size_t end) {
    doc.tokens.push_back(Token{std::string(text.substr(start, end - start)), start, end});
  };

  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    auto c = detail::decode_utf8(text, i);
    if (detail::is_unicode_space(c.cp)) {
      i += c.len;
      continue;
    }
    // Collect one whitespace-delimited chunk as (offset, length) code points.
    struct CpRef {
      size_t pos;
      size_t len;
      uint32_t cp;
    };
    std::vector<CpRef> cps;
    size_t j = i;
    while (j < n) {
      auto cj = detail::decode_utf8(text, j);
      if (detail::is_unicode_space(cj.cp)) break;
      cps.push_back({j, cj.len, cj.cp});
      j += cj.len;
    }
    size_t lo = 0, hi = cps.size();
    while (lo < hi && !detail::is_word_char(cps[lo].cp)) {
      push(cps[lo].pos, cps[lo].pos + cps[lo].len);
      ++lo;
    }
    size_t tail = hi;
    while (tail > lo && !detail::is_word_char(cps[tail - 1].cp)) --tail;
    if (lo < tail) push(cps[lo].pos, cps[tail - 1].pos + cps[tail - 1].len);
    for (size_t k = tail; k < hi; ++k) push(cps[k].pos, cps[k].pos + cps[k].len);
    i = j;
  }
  return doc;
}

}  // namespace dbtag
