#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ocrpost {

// Permissive UTF-8 decoding: malformed byte sequences decode to U+FFFD,
// one replacement per bad byte, so round trips never crash on dirty OCR text.
std::vector<char32_t> utf8_decode(std::string_view text);
std::string utf8_encode(const std::vector<char32_t>& codepoints);
void utf8_append(std::string& out, char32_t cp);

// Number of codepoints in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

// Canonical composition (NFC) over the Latin repertoire: combining marks
// U+0300..U+036F are reordered by combining class and composed with their
// base letters into the Latin-1 Supplement / Latin Extended-A precomposed
// forms. Codepoints outside that repertoire pass through untouched.
std::string nfc(std::string_view text);
std::vector<char32_t> nfc(const std::vector<char32_t>& codepoints);

// ASCII/Latin-1 lowercasing. Bytes outside those ranges are left as-is.
char32_t fold_lower(char32_t cp);
std::string fold_lower(std::string_view text);

bool is_ascii_letter(char32_t cp);
bool is_ascii_digit(char32_t cp);

}  // namespace ocrpost
