#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ocrpost/lexicon.hpp"

namespace ocrpost {

struct RespaceConfig {
    double oov_char_cost = 8.0;  // per-codepoint surcharge for unknown tokens
    int max_token_len = 24;      // hard cap on candidate length, in codepoints
};

struct TokenSpan {
    std::size_t start = 0;  // byte offsets into the despaced input
    std::size_t end = 0;
};

struct SegmentationResult {
    std::vector<std::string> tokens;  // original characters, original case
    double total_cost = 0.0;
    std::vector<TokenSpan> spans;

    std::string joined() const;  // tokens joined by single spaces
};

// Minimum-cost word segmentation by DP over Zipf costs. Existing whitespace
// is a hard boundary: each whitespace-free run is segmented independently
// and never merged. Known words cost ln(rank * ln N); an unknown candidate
// of k codepoints costs ln(N * ln N) + oov_char_cost * k. Ties break toward
// fewer tokens, then toward a longer final token. Requires lex.size() >= 2.
SegmentationResult respace(std::string_view text, const Lexicon& lex,
                           const RespaceConfig& cfg = {});

// All whitespace removed.
std::string despace(std::string_view text);

}  // namespace ocrpost
