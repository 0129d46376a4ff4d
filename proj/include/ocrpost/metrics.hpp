#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocrpost {

// Unit-cost Levenshtein distance (insert/delete/substitute), two-row DP
// over the shorter sequence.
template <typename T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
    if (a.size() < b.size()) return levenshtein(b, a);
    // b is now the shorter side.
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

template <typename T>
std::size_t levenshtein(const std::vector<T>& a, const std::vector<T>& b) {
    return levenshtein(std::span<const T>(a), std::span<const T>(b));
}

// Optimal string alignment distance: Damerau-Levenshtein restricted so a
// transposed pair is not edited again. Computed over codepoints.
// Returns max_dist + 1 when the distance exceeds max_dist.
std::size_t osa_distance(std::string_view a, std::string_view b,
                         std::size_t max_dist = std::numeric_limits<std::size_t>::max() - 1);

struct Transcript {
    std::string hypothesis;  // OCR / model output
    std::string reference;   // ground truth
};

struct MetricOptions {
    bool case_fold = false;
    bool macro_average = false;  // default micro: sum(dist) / sum(ref units)
};

// Character error rate: Levenshtein over NFC codepoints (spaces included)
// divided by the reference codepoint count. Throws on empty reference.
double cer(const Transcript& t, const MetricOptions& opts = {});

// Word error rate over whitespace tokens. Throws on whitespace-only reference.
double wer(const Transcript& t, const MetricOptions& opts = {});

struct ItemRates {
    std::string id;
    double cer = 0.0;
    double wer = 0.0;
};

struct EvalReport {
    std::vector<ItemRates> per_item;
    double aggregate_cer = 0.0;
    double aggregate_wer = 0.0;
};

EvalReport evaluate_corpus(std::span<const Transcript> pairs, const MetricOptions& opts = {},
                           std::span<const std::string> ids = {});

// Whitespace tokenization used by WER (maximal runs of non-whitespace).
std::vector<std::string> split_tokens(std::string_view text);

}  // namespace ocrpost
