#include "ocrpost/spellfix.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>

#include "ocrpost/metrics.hpp"
#include "ocrpost/noisegen.hpp"
#include "ocrpost/unicode.hpp"

namespace ocrpost {

namespace {

constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz";

bool has_non_ascii(std::string_view word) {
    for (char c : word)
        if (static_cast<unsigned char>(c) >= 0x80) return true;
    return false;
}

}  // namespace

std::unordered_set<std::string> norvig_edits1(std::string_view word) {
    std::unordered_set<std::string> out;
    const std::size_t n = word.size();
    std::string buf;
    // deletes
    for (std::size_t i = 0; i < n; ++i) {
        buf.assign(word.substr(0, i));
        buf.append(word.substr(i + 1));
        out.insert(buf);
    }
    // adjacent transposes
    for (std::size_t i = 0; i + 1 < n; ++i) {
        buf.assign(word);
        std::swap(buf[i], buf[i + 1]);
        out.insert(buf);
    }
    // replaces
    for (std::size_t i = 0; i < n; ++i) {
        buf.assign(word);
        for (char c : kAlphabet) {
            buf[i] = c;
            out.insert(buf);
        }
    }
    // inserts
    for (std::size_t i = 0; i <= n; ++i) {
        for (char c : kAlphabet) {
            buf.assign(word.substr(0, i));
            buf.push_back(c);
            buf.append(word.substr(i));
            out.insert(buf);
        }
    }
    return out;
}

std::string norvig_correct(std::string_view word, const Lexicon& lex) {
    std::string folded = fold_lower(word);
    if (lex.contains(folded)) return std::string(word);
    if (has_non_ascii(folded)) return std::string(word);

    auto best_of = [&](const std::unordered_set<std::string>& candidates) -> std::string {
        std::string best;
        std::int64_t best_count = -1;
        for (const auto& cand : candidates) {
            auto entry = lex.find(cand);
            if (!entry) continue;
            if (entry->count > best_count || (entry->count == best_count && cand < best)) {
                best = cand;
                best_count = entry->count;
            }
        }
        return best;
    };

    auto e1 = norvig_edits1(folded);
    if (std::string hit = best_of(e1); !hit.empty()) return hit;

    std::string best;
    std::int64_t best_count = -1;
    for (const auto& e : e1) {
        for (const auto& cand : norvig_edits1(e)) {
            auto entry = lex.find(cand);
            if (!entry) continue;
            if (entry->count > best_count || (entry->count == best_count && cand < best)) {
                best = cand;
                best_count = entry->count;
            }
        }
    }
    if (!best.empty()) return best;
    return std::string(word);
}

std::vector<std::string> DeleteIndex::delete_variants(std::string_view word, int max_edit_distance,
                                                      int prefix_length) {
    auto cps = utf8_decode(word);
    std::vector<char32_t> prefix = cps;
    if (prefix.size() > static_cast<std::size_t>(prefix_length))
        prefix.resize(static_cast<std::size_t>(prefix_length));

    std::unordered_set<std::string> seen;
    seen.insert(std::string(word));
    seen.insert(utf8_encode(prefix));

    // breadth-first deletions from the prefix
    std::vector<std::vector<char32_t>> frontier{prefix};
    for (int depth = 0; depth < max_edit_distance; ++depth) {
        std::vector<std::vector<char32_t>> next;
        for (const auto& cur : frontier) {
            if (cur.empty()) continue;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                std::vector<char32_t> shorter;
                shorter.reserve(cur.size() - 1);
                shorter.insert(shorter.end(), cur.begin(), cur.begin() + i);
                shorter.insert(shorter.end(), cur.begin() + i + 1, cur.end());
                if (seen.insert(utf8_encode(shorter)).second) next.push_back(std::move(shorter));
            }
        }
        frontier = std::move(next);
    }
    return std::vector<std::string>(seen.begin(), seen.end());
}

DeleteIndex::DeleteIndex(const Lexicon& lex, int max_edit_distance, int prefix_length)
    : max_edit_distance_(max_edit_distance), prefix_length_(prefix_length) {
    if (max_edit_distance < 1 || max_edit_distance > 3)
        throw std::invalid_argument("max_edit_distance must be in 1..3");
    if (prefix_length <= max_edit_distance)
        throw std::invalid_argument("prefix_length must exceed max_edit_distance");

    words_ = lex.words_by_rank();
    counts_.resize(words_.size());
    for (std::size_t id = 0; id < words_.size(); ++id) {
        counts_[id] = lex.find(words_[id])->count;
        for (auto& variant : delete_variants(words_[id], max_edit_distance_, prefix_length_))
            map_[std::move(variant)].push_back(static_cast<std::uint32_t>(id));
    }
}

std::vector<Suggestion> DeleteIndex::lookup(std::string_view word) const {
    std::string folded = fold_lower(word);
    std::size_t query_len = utf8_length(folded);

    std::vector<std::uint32_t> candidates;
    for (const auto& variant : delete_variants(folded, max_edit_distance_, prefix_length_)) {
        auto it = map_.find(variant);
        if (it == map_.end()) continue;
        candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<Suggestion> out;
    for (std::uint32_t id : candidates) {
        const std::string& cand = words_[id];
        std::size_t cand_len = utf8_length(cand);
        std::size_t diff = cand_len > query_len ? cand_len - query_len : query_len - cand_len;
        if (diff > static_cast<std::size_t>(max_edit_distance_)) continue;
        std::size_t dist = osa_distance(folded, cand, static_cast<std::size_t>(max_edit_distance_));
        if (dist > static_cast<std::size_t>(max_edit_distance_)) continue;
        out.push_back(Suggestion{cand, static_cast<int>(dist), counts_[id]});
    }
    std::sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.count != b.count) return a.count > b.count;
        return a.word < b.word;
    });
    return out;
}

namespace {

enum class CasePattern { Lower, AllCaps, InitialCap, Other };

CasePattern case_pattern(const std::vector<char32_t>& core) {
    bool any_letter = false, any_lower = false, any_upper = false;
    bool first_upper = false, rest_lower = true;
    for (std::size_t i = 0; i < core.size(); ++i) {
        char32_t cp = core[i];
        bool upper = cp >= U'A' && cp <= U'Z';
        bool lower = cp >= U'a' && cp <= U'z';
        if (upper || lower) {
            if (!any_letter && upper) first_upper = true;
            else if (any_letter && upper) rest_lower = false;
            any_letter = true;
            any_lower |= lower;
            any_upper |= upper;
        }
    }
    if (!any_letter) return CasePattern::Other;
    if (any_upper && !any_lower) return CasePattern::AllCaps;
    if (first_upper && rest_lower) return CasePattern::InitialCap;
    if (!any_upper) return CasePattern::Lower;
    return CasePattern::Other;
}

std::string apply_case(const std::string& word, CasePattern pattern) {
    auto cps = utf8_decode(word);
    switch (pattern) {
        case CasePattern::AllCaps:
            for (auto& cp : cps)
                if (cp >= U'a' && cp <= U'z') cp -= 0x20;
            break;
        case CasePattern::InitialCap:
            if (!cps.empty() && cps[0] >= U'a' && cps[0] <= U'z') cps[0] -= 0x20;
            break;
        default:
            break;
    }
    return utf8_encode(cps);
}

bool is_word_char(char32_t cp) {
    return is_ascii_letter(cp) || is_ascii_digit(cp) || cp >= 0x80;
}

std::string correct_token(const std::string& token, CorrectorKind kind, const Lexicon& lex,
                          const DeleteIndex* index) {
    auto cps = utf8_decode(token);
    std::size_t begin = 0, end = cps.size();
    while (begin < end && !is_word_char(cps[begin])) ++begin;
    while (end > begin && !is_word_char(cps[end - 1])) --end;
    if (begin == end) return token;

    std::vector<char32_t> core(cps.begin() + begin, cps.begin() + end);
    for (char32_t cp : core)
        if (is_ascii_digit(cp)) return token;  // digit tokens pass through

    std::string core_str = utf8_encode(core);
    std::string folded = fold_lower(core_str);

    std::string corrected;
    if (kind == CorrectorKind::Norvig) {
        corrected = norvig_correct(folded, lex);
    } else {
        auto suggestions = index->lookup(folded);
        corrected = suggestions.empty() ? folded : suggestions[0].word;
    }
    if (corrected == folded && !lex.contains(folded)) return token;  // no suggestion: keep as-is

    std::string recased = apply_case(corrected, case_pattern(core));
    std::string out;
    for (std::size_t i = 0; i < begin; ++i) utf8_append(out, cps[i]);
    out += recased;
    for (std::size_t i = end; i < cps.size(); ++i) utf8_append(out, cps[i]);
    return out;
}

}  // namespace

std::string correct_sentence(std::string_view text, CorrectorKind kind, const Lexicon& lex,
                             const DeleteIndex* index) {
    if (kind == CorrectorKind::SymSpell && !index)
        throw std::invalid_argument("symspell correction requires a DeleteIndex");

    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            out.push_back(text[i]);
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string token(text.substr(start, i - start));
        out += correct_token(token, kind, lex, index);
    }
    return out;
}

BenchReport run_spellfix_benchmark(const Lexicon& lex, int runs, int queries, std::uint64_t seed) {
    if (runs < 1 || queries < 1) throw std::invalid_argument("runs and queries must be >= 1");

    SplitMix64 rng(seed);

    // Length-8 queries: lexicon words with two random substitutions, so the
    // Norvig path has to reach the edits2 tier.
    std::vector<std::string> length8;
    for (const auto& w : lex.words_by_rank())
        if (w.size() == 8 && !has_non_ascii(w)) length8.push_back(w);

    std::vector<std::string> query_set;
    for (int q = 0; q < queries; ++q) {
        std::string base;
        if (!length8.empty()) {
            base = length8[static_cast<std::size_t>(rng.next_below(length8.size()))];
        } else {
            for (int k = 0; k < 8; ++k)
                base.push_back(kAlphabet[static_cast<std::size_t>(rng.next_below(26))]);
        }
        for (int m = 0; m < 2; ++m) {
            std::size_t pos = static_cast<std::size_t>(rng.next_below(base.size()));
            char repl = kAlphabet[static_cast<std::size_t>(rng.next_below(26))];
            while (repl == base[pos]) repl = kAlphabet[static_cast<std::size_t>(rng.next_below(26))];
            base[pos] = repl;
        }
        query_set.push_back(std::move(base));
    }

    DeleteIndex index(lex);

    auto time_runs = [&](auto&& per_query) {
        std::vector<double> per_run_us;
        for (int r = 0; r < runs; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            for (const auto& q : query_set) per_query(q);
            auto t1 = std::chrono::steady_clock::now();
            double us = std::chrono::duration<double, std::micro>(t1 - t0).count();
            per_run_us.push_back(us / static_cast<double>(query_set.size()));
        }
        std::sort(per_run_us.begin(), per_run_us.end());
        std::size_t mid = per_run_us.size() / 2;
        return per_run_us.size() % 2 ? per_run_us[mid]
                                     : 0.5 * (per_run_us[mid - 1] + per_run_us[mid]);
    };

    // keep the optimizer from discarding the timed work
    volatile std::size_t sink = 0;
    BenchReport report;
    report.symspell_median_us =
        time_runs([&](const std::string& q) { sink = sink + index.lookup(q).size(); });
    report.norvig_median_us =
        time_runs([&](const std::string& q) { sink = sink + norvig_correct(q, lex).size(); });
    report.speedup = report.norvig_median_us / report.symspell_median_us;
    report.lexicon_words = lex.size();
    report.runs = runs;
    report.queries_per_run = queries;
    return report;
}

}  // namespace ocrpost
