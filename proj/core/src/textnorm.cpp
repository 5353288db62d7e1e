#include "lexiclass/textnorm.hpp"

#include <cstdint>

namespace lexiclass::textnorm {

namespace {

// Sentinel meaning "delete this code point entirely" (combining marks).
constexpr const char* kDrop = "";

// Maps a non-ASCII code point to its lowercase accent-free ASCII spelling,
// nullptr when the code point is not a letter (it becomes a space), or kDrop
// for combining marks. Latin-1 Supplement and Latin Extended-A are folded to
// base letters; ligatures expand (oe, ae, ss, ij).
const char* fold_codepoint(char32_t cp) {
  if (cp >= 0x0300 && cp <= 0x036F) return kDrop;  // combining diacritics

  switch (cp) {
    // Latin-1 Supplement, uppercase block
    case 0xC0: case 0xC1: case 0xC2: case 0xC3: case 0xC4: case 0xC5:
      return "a";
    case 0xC6: return "ae";
    case 0xC7: return "c";
    case 0xC8: case 0xC9: case 0xCA: case 0xCB: return "e";
    case 0xCC: case 0xCD: case 0xCE: case 0xCF: return "i";
    case 0xD0: return "d";
    case 0xD1: return "n";
    case 0xD2: case 0xD3: case 0xD4: case 0xD5: case 0xD6: case 0xD8:
      return "o";
    case 0xD9: case 0xDA: case 0xDB: case 0xDC: return "u";
    case 0xDD: return "y";
    case 0xDE: return "th";
    case 0xDF: return "ss";
    // Latin-1 Supplement, lowercase block
    case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5:
      return "a";
    case 0xE6: return "ae";
    case 0xE7: return "c";
    case 0xE8: case 0xE9: case 0xEA: case 0xEB: return "e";
    case 0xEC: case 0xED: case 0xEE: case 0xEF: return "i";
    case 0xF0: return "d";
    case 0xF1: return "n";
    case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6: case 0xF8:
      return "o";
    case 0xF9: case 0xFA: case 0xFB: case 0xFC: return "u";
    case 0xFD: case 0xFF: return "y";
    case 0xFE: return "th";
    default:
      break;
  }

  // Latin Extended-A
  if (cp >= 0x0100 && cp <= 0x017F) {
    if (cp <= 0x0105) return "a";
    if (cp <= 0x010D) return "c";
    if (cp <= 0x0111) return "d";
    if (cp <= 0x011B) return "e";
    if (cp <= 0x0123) return "g";
    if (cp <= 0x0127) return "h";
    if (cp <= 0x0131) return "i";
    if (cp <= 0x0133) return "ij";
    if (cp <= 0x0135) return "j";
    if (cp <= 0x0138) return "k";
    if (cp <= 0x0142) return "l";
    if (cp <= 0x014B) return "n";
    if (cp <= 0x0151) return "o";
    if (cp <= 0x0153) return "oe";
    if (cp <= 0x0159) return "r";
    if (cp <= 0x0161) return "s";
    if (cp <= 0x0167) return "t";
    if (cp <= 0x0173) return "u";
    if (cp <= 0x0175) return "w";
    if (cp <= 0x0178) return "y";
    if (cp <= 0x017E) return "z";
    return "s";  // 0x017F, long s
  }

  return nullptr;
}

// Decodes one UTF-8 code point at position i, advancing i. Malformed bytes
// decode as U+FFFD so they fall through to the separator path.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<std::uint8_t>(s[k]);
  };
  std::uint8_t b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
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
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    std::uint8_t b = byte(i + k);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  std::size_t i = 0;
  const auto emit = [&](char c) {
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
  };
  while (i < text.size()) {
    char32_t cp = decode_utf8(text, i);
    if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
        emit(c);
      } else if (!out.empty()) {
        pending_space = true;
      }
      continue;
    }
    const char* piece = fold_codepoint(cp);
    if (piece == nullptr) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    for (const char* p = piece; *p; ++p) emit(*p);  // empty piece: deleted mark
  }
  return out;
}

TokenSeq tokenize(std::string_view normalized) {
  TokenSeq tokens;
  std::size_t start = 0;
  while (start < normalized.size()) {
    std::size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) tokens.emplace_back(normalized.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

TokenSeq strip_digits(const TokenSeq& tokens) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    std::string kept;
    kept.reserve(tok.size());
    for (char c : tok) {
      if (c < '0' || c > '9') kept += c;
    }
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

}  // namespace lexiclass::textnorm
