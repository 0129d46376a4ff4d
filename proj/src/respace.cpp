#include "ocrpost/respace.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

#include "ocrpost/unicode.hpp"

namespace ocrpost {

namespace {

struct Cell {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t tokens = 0;
    std::size_t last_len = 0;  // codepoints in the final token
    std::size_t back = 0;      // start position of the final token

    // Lexicographic: cost, then fewer tokens, then longer final token.
    bool better_than(const Cell& other) const {
        if (cost != other.cost) return cost < other.cost;
        if (tokens != other.tokens) return tokens < other.tokens;
        return last_len > other.last_len;
    }
};

// Segments one whitespace-free run, appending tokens/spans to the result.
// `cps` are the run's codepoints, `byte_of[i]` the byte offset of cps[i]
// within the despaced input (byte_of[len] = one past the run).
void segment_run(const std::vector<char32_t>& cps, const std::vector<std::size_t>& byte_of,
                 const Lexicon& lex, const RespaceConfig& cfg, SegmentationResult& out) {
    const std::size_t len = cps.size();
    if (len == 0) return;

    const double oov_base = lex.oov_base_cost();
    const std::size_t cap = std::min<std::size_t>(
        {len, static_cast<std::size_t>(lex.max_word_len()),
         static_cast<std::size_t>(cfg.max_token_len)});

    std::vector<Cell> best(len + 1);
    best[0] = Cell{0.0, 0, 0, 0};

    std::string candidate;
    for (std::size_t end = 1; end <= len; ++end) {
        for (std::size_t k = 1; k <= cap && k <= end; ++k) {
            std::size_t start = end - k;
            if (best[start].cost == std::numeric_limits<double>::infinity()) continue;
            candidate.clear();
            for (std::size_t i = start; i < end; ++i)
                utf8_append(candidate, fold_lower(cps[i]));
            auto known = lex.word_cost(candidate);
            double word_cost =
                known ? *known : oov_base + cfg.oov_char_cost * static_cast<double>(k);
            Cell next{best[start].cost + word_cost, best[start].tokens + 1, k, start};
            if (next.better_than(best[end])) best[end] = next;
        }
    }

    // Recover token boundaries.
    std::vector<std::size_t> cuts;  // positions, reversed
    for (std::size_t pos = len; pos > 0; pos = best[pos].back) cuts.push_back(pos);
    cuts.push_back(0);

    for (std::size_t i = cuts.size() - 1; i > 0; --i) {
        std::size_t from = cuts[i], to = cuts[i - 1];
        std::string token;
        for (std::size_t j = from; j < to; ++j) utf8_append(token, cps[j]);
        out.tokens.push_back(std::move(token));
        out.spans.push_back(TokenSpan{byte_of[from], byte_of[to]});
    }
    out.total_cost += best[len].cost;
}

}  // namespace

std::string SegmentationResult::joined() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

std::string despace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

SegmentationResult respace(std::string_view text, const Lexicon& lex, const RespaceConfig& cfg) {
    if (lex.size() < 2)
        throw std::invalid_argument("respace requires a lexicon with at least 2 words");
    if (cfg.max_token_len < 1)
        throw std::invalid_argument("max_token_len must be >= 1");

    SegmentationResult result;
    auto cps = utf8_decode(text);

    std::vector<char32_t> run;
    std::vector<std::size_t> byte_of;
    std::size_t despaced_bytes = 0;

    auto flush = [&]() {
        byte_of.push_back(despaced_bytes);
        segment_run(run, byte_of, lex, cfg, result);
        run.clear();
        byte_of.clear();
    };

    for (char32_t cp : cps) {
        bool space = cp < 0x80 && std::isspace(static_cast<int>(cp));
        if (space) {
            if (!run.empty()) flush();
            continue;
        }
        byte_of.push_back(despaced_bytes);
        run.push_back(cp);
        despaced_bytes += cp < 0x80 ? 1 : cp < 0x800 ? 2 : cp < 0x10000 ? 3 : 4;
    }
    if (!run.empty()) flush();
    return result;
}

}  // namespace ocrpost
