#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ocrpost/lexicon.hpp"

namespace ocrpost {

// Norvig-style tiered correction: the word itself, then edits1 matches,
// then edits2 matches, then the word unchanged. Edit alphabet is a-z;
// words with non-ASCII bytes skip edit generation.
std::string norvig_correct(std::string_view word, const Lexicon& lex);

// All single-edit variants (deletes, adjacent transposes, replaces, inserts).
std::unordered_set<std::string> norvig_edits1(std::string_view word);

struct Suggestion {
    std::string word;
    int distance = 0;      // optimal string alignment distance to the query
    std::int64_t count = 0;

    bool operator==(const Suggestion&) const = default;
};

// Symmetric-delete index: every lexicon word is reachable from the delete
// variants of its first prefix_length characters (plus the word itself).
class DeleteIndex {
public:
    DeleteIndex(const Lexicon& lex, int max_edit_distance = 2, int prefix_length = 7);

    // Candidates from shared delete variants, verified with OSA distance,
    // ranked by (distance asc, count desc, word asc).
    std::vector<Suggestion> lookup(std::string_view word) const;

    int max_edit_distance() const { return max_edit_distance_; }
    int prefix_length() const { return prefix_length_; }
    std::size_t variant_count() const { return map_.size(); }

    // Delete variants of the first prefix_length characters, plus the word.
    static std::vector<std::string> delete_variants(std::string_view word, int max_edit_distance,
                                                    int prefix_length);

private:
    int max_edit_distance_;
    int prefix_length_;
    std::vector<std::string> words_;
    std::vector<std::int64_t> counts_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> map_;
};

enum class CorrectorKind { Norvig, SymSpell };

// Token-level sentence correction: strips leading/trailing punctuation,
// corrects the lowercased core, restores the casing pattern, re-attaches
// punctuation. Tokens containing digits pass through unchanged.
std::string correct_sentence(std::string_view text, CorrectorKind kind, const Lexicon& lex,
                             const DeleteIndex* index = nullptr);

struct BenchReport {
    double symspell_median_us = 0.0;
    double norvig_median_us = 0.0;
    double speedup = 0.0;  // norvig / symspell
    int lexicon_words = 0;
    int runs = 0;
    int queries_per_run = 0;
};

// Timed comparison of symmetric-delete lookup against Norvig edits2
// correction on length-8 queries; median over `runs` passes per method.
BenchReport run_spellfix_benchmark(const Lexicon& lex, int runs = 30, int queries = 8,
                                   std::uint64_t seed = 0x5eed);

}  // namespace ocrpost
