#include "ocrpost/metrics.hpp"

#include <cctype>
#include <stdexcept>

#include "ocrpost/unicode.hpp"

namespace ocrpost {

namespace {

std::vector<char32_t> normalized_codepoints(std::string_view text, bool case_fold) {
    auto cps = nfc(utf8_decode(text));
    if (case_fold)
        for (auto& cp : cps) cp = fold_lower(cp);
    return cps;
}

struct Distances {
    std::size_t char_dist, ref_chars;
    std::size_t word_dist, ref_words;
};

Distances pair_distances(const Transcript& t, bool case_fold) {
    auto hyp = normalized_codepoints(t.hypothesis, case_fold);
    auto ref = normalized_codepoints(t.reference, case_fold);
    if (ref.empty())
        throw std::invalid_argument("CER is undefined for an empty reference");

    auto hyp_tokens = split_tokens(utf8_encode(hyp));
    auto ref_tokens = split_tokens(utf8_encode(ref));
    if (ref_tokens.empty())
        throw std::invalid_argument("WER is undefined for a whitespace-only reference");

    return Distances{
        levenshtein(hyp, ref), ref.size(),
        levenshtein(hyp_tokens, ref_tokens), ref_tokens.size(),
    };
}

}  // namespace

std::vector<std::string> split_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) tokens.emplace_back(text.substr(start, i - start));
    }
    return tokens;
}

std::size_t osa_distance(std::string_view a, std::string_view b, std::size_t max_dist) {
    auto ca = utf8_decode(a);
    auto cb = utf8_decode(b);
    std::size_t n = ca.size(), m = cb.size();
    max_dist = std::min(max_dist, std::max(n, m));  // keeps the +1 arithmetic safe
    std::size_t big = max_dist + 1;
    if (n > m + max_dist || m > n + max_dist) return big;

    // Three rolling rows: i-2, i-1, i.
    std::vector<std::size_t> r0(m + 1), r1(m + 1), r2(m + 1);
    for (std::size_t j = 0; j <= m; ++j) r1[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        r2[0] = i;
        std::size_t row_min = r2[0];
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t cost = ca[i - 1] == cb[j - 1] ? 0 : 1;
            std::size_t best = std::min({r1[j] + 1, r2[j - 1] + 1, r1[j - 1] + cost});
            if (i > 1 && j > 1 && ca[i - 1] == cb[j - 2] && ca[i - 2] == cb[j - 1])
                best = std::min(best, r0[j - 2] + 1);
            r2[j] = best;
            row_min = std::min(row_min, best);
        }
        if (row_min > max_dist) return big;
        std::swap(r0, r1);
        std::swap(r1, r2);
    }
    return std::min(r1[m], big);
}

double cer(const Transcript& t, const MetricOptions& opts) {
    auto d = pair_distances(t, opts.case_fold);
    return static_cast<double>(d.char_dist) / static_cast<double>(d.ref_chars);
}

double wer(const Transcript& t, const MetricOptions& opts) {
    auto d = pair_distances(t, opts.case_fold);
    return static_cast<double>(d.word_dist) / static_cast<double>(d.ref_words);
}

EvalReport evaluate_corpus(std::span<const Transcript> pairs, const MetricOptions& opts,
                           std::span<const std::string> ids) {
    if (pairs.empty())
        throw std::invalid_argument("evaluate_corpus requires at least one pair");

    EvalReport report;
    std::size_t char_dist = 0, ref_chars = 0, word_dist = 0, ref_words = 0;
    double cer_sum = 0, wer_sum = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto d = pair_distances(pairs[i], opts.case_fold);
        ItemRates item;
        item.id = i < ids.size() ? ids[i] : std::to_string(i);
        item.cer = static_cast<double>(d.char_dist) / static_cast<double>(d.ref_chars);
        item.wer = static_cast<double>(d.word_dist) / static_cast<double>(d.ref_words);
        report.per_item.push_back(std::move(item));
        char_dist += d.char_dist;
        ref_chars += d.ref_chars;
        word_dist += d.word_dist;
        ref_words += d.ref_words;
        cer_sum += report.per_item.back().cer;
        wer_sum += report.per_item.back().wer;
    }
    if (opts.macro_average) {
        report.aggregate_cer = cer_sum / static_cast<double>(pairs.size());
        report.aggregate_wer = wer_sum / static_cast<double>(pairs.size());
    } else {
        report.aggregate_cer = static_cast<double>(char_dist) / static_cast<double>(ref_chars);
        report.aggregate_wer = static_cast<double>(word_dist) / static_cast<double>(ref_words);
    }
    return report;
}

}  // namespace ocrpost
