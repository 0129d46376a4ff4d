#include "ocrpost/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ocrpost/unicode.hpp"

namespace ocrpost {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon file " + path);

    std::vector<std::string> ranked;
    std::vector<std::pair<std::string, std::int64_t>> counted;
    bool counted_mode = false, mode_known = false;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = strip_cr(std::move(raw));
        if (line.empty()) continue;
        auto tab = line.find('\t');
        bool has_count = tab != std::string::npos;
        if (!mode_known) {
            counted_mode = has_count;
            mode_known = true;
        } else if (has_count != counted_mode) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": mixed lexicon formats (word vs word<TAB>count)");
        }
        if (has_count) {
            std::string word = line.substr(0, tab);
            std::string count_str = line.substr(tab + 1);
            try {
                std::size_t used = 0;
                long long count = std::stoll(count_str, &used);
                if (used != count_str.size() || count < 1) throw std::invalid_argument("");
                counted.emplace_back(std::move(word), count);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": malformed count '" + count_str + "'");
            }
        } else {
            ranked.push_back(std::move(line));
        }
    }
    if (!mode_known) throw std::runtime_error("empty lexicon file " + path);
    return counted_mode ? from_counts(counted) : from_ranked_words(ranked);
}

Lexicon Lexicon::from_ranked_words(const std::vector<std::string>& words) {
    Lexicon lex;
    for (const auto& raw : words) {
        std::string word = fold_lower(raw);
        if (word.empty()) continue;
        if (lex.entries_.contains(word)) continue;  // first occurrence wins
        lex.entries_.emplace(word, Entry{0, static_cast<int>(lex.by_rank_.size()) + 1});
        lex.by_rank_.push_back(word);
    }
    // Synthetic counts, strictly decreasing so count order matches rank order.
    std::int64_t n = static_cast<std::int64_t>(lex.by_rank_.size());
    for (auto& [word, entry] : lex.entries_) entry.count = n - entry.rank + 1;
    lex.finish();
    return lex;
}

Lexicon Lexicon::from_counts(const std::vector<std::pair<std::string, std::int64_t>>& counted) {
    std::unordered_map<std::string, std::int64_t> sums;
    for (const auto& [raw, count] : counted) {
        std::string word = fold_lower(raw);
        if (word.empty()) continue;
        sums[word] += count;
    }
    std::vector<std::pair<std::string, std::int64_t>> order(sums.begin(), sums.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    Lexicon lex;
    for (std::size_t i = 0; i < order.size(); ++i) {
        lex.entries_.emplace(order[i].first, Entry{order[i].second, static_cast<int>(i) + 1});
        lex.by_rank_.push_back(order[i].first);
    }
    lex.finish();
    return lex;
}

void Lexicon::finish() {
    if (by_rank_.empty()) throw std::runtime_error("lexicon has no entries");
    max_word_len_ = 0;
    for (const auto& w : by_rank_)
        max_word_len_ = std::max(max_word_len_, static_cast<int>(utf8_length(w)));
    log_n_ = by_rank_.size() >= 2 ? std::log(static_cast<double>(by_rank_.size())) : 0.0;
}

std::optional<Lexicon::Entry> Lexicon::find(std::string_view word) const {
    auto it = entries_.find(fold_lower(word));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> Lexicon::word_cost(std::string_view word) const {
    if (size() < 2)
        throw std::logic_error("word_cost requires a lexicon with at least 2 words");
    auto entry = find(word);
    if (!entry) return std::nullopt;
    return std::log(static_cast<double>(entry->rank) * log_n_);
}

double Lexicon::oov_base_cost() const {
    if (size() < 2)
        throw std::logic_error("oov_base_cost requires a lexicon with at least 2 words");
    return std::log(static_cast<double>(size()) * log_n_);
}

}  // namespace ocrpost
