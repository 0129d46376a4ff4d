#include "ocrpost/noisegen.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

#include "ocrpost/unicode.hpp"

namespace ocrpost {

ConfusionTable default_confusions() {
    return ConfusionTable{
        {U'o', {U'0'}},       {U'0', {U'o'}},
        {U'l', {U'1'}},       {U'1', {U'l'}},
        {U'i', {U'1', U'l'}}, {U's', {U'5'}},
        {U'5', {U's'}},       {U'b', {U'6', U'8'}},
        {U'g', {U'9'}},       {U'z', {U'2'}},
        {U'e', {U'c'}},       {U'a', {U'o'}},
        {U'O', {U'0'}},       {U'I', {U'1', U'l'}},
        {U'L', {U'1'}},       {U'S', {U'5'}},
        {U'B', {U'8'}},       {U'G', {U'9'}},
        {U'Z', {U'2'}},       {U'E', {U'C'}},
        {U'A', {U'O'}},
    };
}

ConfusionTable load_confusions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open confusion table " + path);
    ConfusionTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected <char>TAB<replacements>");
        auto key_cps = utf8_decode(line.substr(0, tab));
        auto repl_cps = utf8_decode(line.substr(tab + 1));
        if (key_cps.size() != 1 || repl_cps.empty())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": key must be one character with non-empty replacements");
        for (char32_t r : repl_cps)
            if (r == key_cps[0])
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": character may not map to itself");
        table[key_cps[0]] = repl_cps;
    }
    if (table.empty()) throw std::runtime_error("empty confusion table " + path);
    return table;
}

void NoiseConfig::validate() const {
    if (word_aug_probability < 0.0 || word_aug_probability > 1.0 ||
        char_aug_probability < 0.0 || char_aug_probability > 1.0)
        throw std::invalid_argument("augmentation probabilities must be in [0,1]");
    for (const auto& [key, repl] : confusions) {
        if (repl.empty()) throw std::invalid_argument("confusion entry with no replacements");
        for (char32_t r : repl)
            if (r == key) throw std::invalid_argument("character may not map to itself");
    }
}

std::string degrade_word(std::string_view word, const NoiseConfig& cfg, SplitMix64& rng) {
    auto cps = utf8_decode(word);

    std::vector<std::size_t> mappable;
    for (std::size_t i = 0; i < cps.size(); ++i)
        if (cfg.confusions.contains(cps[i])) mappable.push_back(i);
    if (mappable.empty()) return std::string(word);

    bool flipped = false;
    for (std::size_t pos : mappable) {
        if (rng.next_double() < cfg.char_aug_probability) {
            const auto& repl = cfg.confusions.at(cps[pos]);
            cps[pos] = repl[rng.next_below(repl.size())];
            flipped = true;
        }
    }
    if (!flipped) {
        // selected-word guarantee: force one flip
        std::size_t pos = mappable[rng.next_below(mappable.size())];
        const auto& repl = cfg.confusions.at(cps[pos]);
        cps[pos] = repl[rng.next_below(repl.size())];
    }
    return utf8_encode(cps);
}

DegradeResult degrade_text(std::string_view text, const NoiseConfig& cfg, SplitMix64& rng) {
    cfg.validate();
    DegradeResult result;
    result.text.reserve(text.size());

    std::size_t i = 0, word_index = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            result.text.push_back(text[i]);
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string token(text.substr(start, i - start));
        if (rng.next_double() < cfg.word_aug_probability) {
            std::string degraded = degrade_word(token, cfg, rng);
            if (degraded != token)
                result.log.push_back(DegradedToken{word_index, token, degraded});
            result.text += degraded;
        } else {
            result.text += token;
        }
        ++word_index;
    }
    return result;
}

DegradeResult degrade_text(std::string_view text, const NoiseConfig& cfg) {
    SplitMix64 rng(cfg.seed);
    return degrade_text(text, cfg, rng);
}

std::string drop_spaces(std::string_view text, double p, SplitMix64& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("drop probability must be in [0,1]");
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    bool seen_token = false;
    while (i < text.size()) {
        if (!std::isspace(static_cast<unsigned char>(text[i]))) {
            out.push_back(text[i]);
            seen_token = true;
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        bool interior = seen_token && i < text.size();
        if (interior && rng.next_double() < p) continue;  // gap removed
        out.append(text.substr(start, i - start));
    }
    return out;
}

}  // namespace ocrpost
