#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ocrpost {

// SplitMix64, pinned bit-exactly so generated corpora reproduce anywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

using ConfusionTable = std::map<char32_t, std::vector<char32_t>>;

// Classic OCR look-alike substitutions (o<->0, l<->1, s<->5, ...).
ConfusionTable default_confusions();

// Two-column TSV: character TAB string-of-replacement-characters.
ConfusionTable load_confusions(const std::string& path);

struct NoiseConfig {
    double word_aug_probability = 0.8;
    double char_aug_probability = 0.7;
    ConfusionTable confusions = default_confusions();
    std::uint64_t seed = 0;

    void validate() const;
};

// Each mappable character flips with char_aug_probability; if the word has
// mappable characters and none flipped, exactly one (uniformly chosen) is
// forced. Draw order is part of the contract: one uniform per mappable
// character left to right, then one replacement choice per flip; the forced
// flip draws position then replacement.
std::string degrade_word(std::string_view word, const NoiseConfig& cfg, SplitMix64& rng);

struct DegradedToken {
    std::size_t word_index = 0;
    std::string original;
    std::string degraded;
};

struct DegradeResult {
    std::string text;
    std::vector<DegradedToken> log;
};

// Selects each whitespace token with word_aug_probability (one uniform per
// token, in order) and degrades the selected ones. Whitespace layout and
// token order are preserved exactly.
DegradeResult degrade_text(std::string_view text, const NoiseConfig& cfg);
DegradeResult degrade_text(std::string_view text, const NoiseConfig& cfg, SplitMix64& rng);

// Removes each inter-token whitespace gap with probability p (one uniform
// per gap, in order). Exercises the re-spacer downstream.
std::string drop_spaces(std::string_view text, double p, SplitMix64& rng);

}  // namespace ocrpost
