#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ocrpost {

// Ranked word-frequency table. Ranks are 1-based, assigned by descending
// count with lexicographic tie-break; lookups are case-insensitive.
class Lexicon {
public:
    struct Entry {
        std::int64_t count = 0;
        int rank = 0;
    };

    // One entry per line: "word" (rank = line order, first occurrence wins)
    // or "word<TAB>count" (duplicate counts are summed). The two forms must
    // not be mixed within one file.
    static Lexicon load(const std::string& path);

    // Rank = position in `words`; synthetic counts keep ranking consistent.
    static Lexicon from_ranked_words(const std::vector<std::string>& words);
    static Lexicon from_counts(const std::vector<std::pair<std::string, std::int64_t>>& counted);

    std::optional<Entry> find(std::string_view word) const;
    bool contains(std::string_view word) const { return find(word).has_value(); }

    // Zipf word cost ln(rank * ln N) for known words, nullopt otherwise.
    // Requires N >= 2.
    std::optional<double> word_cost(std::string_view word) const;

    // Cost floor for unknown words: ln(N * ln N), the cost just past rank N.
    double oov_base_cost() const;

    int size() const { return static_cast<int>(by_rank_.size()); }
    int max_word_len() const { return max_word_len_; }  // in codepoints

    // Words in rank order (1-based rank r lives at index r-1), lowercase.
    const std::vector<std::string>& words_by_rank() const { return by_rank_; }
    const std::unordered_map<std::string, Entry>& entries() const { return entries_; }

private:
    std::unordered_map<std::string, Entry> entries_;
    std::vector<std::string> by_rank_;
    int max_word_len_ = 0;
    double log_n_ = 0.0;

    void finish();
};

}  // namespace ocrpost
