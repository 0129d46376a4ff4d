#include "ocrpost/unicode.hpp"

#include <algorithm>
#include <array>

namespace ocrpost {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Canonical combining class for the Combining Diacritical Marks block.
// Everything else in scope is a starter (class 0).
int combining_class(char32_t cp) {
    if (cp < 0x0300 || cp > 0x036F) return 0;
    if (cp >= 0x0316 && cp <= 0x0319) return 220;
    if (cp >= 0x031C && cp <= 0x0320) return 220;
    if (cp == 0x0321 || cp == 0x0322) return 202;
    if (cp >= 0x0323 && cp <= 0x0326) return 220;
    if (cp == 0x0327 || cp == 0x0328) return 202;
    if (cp >= 0x0329 && cp <= 0x0333) return 220;
    if (cp >= 0x0334 && cp <= 0x0338) return 1;
    if (cp >= 0x0339 && cp <= 0x033C) return 220;
    if (cp == 0x0345) return 240;
    if (cp >= 0x0347 && cp <= 0x0349) return 220;
    if (cp == 0x034D || cp == 0x034E) return 220;
    if (cp >= 0x0353 && cp <= 0x0356) return 220;
    if (cp == 0x0359 || cp == 0x035A) return 220;
    return 230;
}

struct Composition {
    char32_t base;
    char32_t mark;
    char32_t composed;
};

// base + combining mark -> precomposed, Latin-1 Supplement and Latin
// Extended-A. Sorted by (base, mark) for binary search.
constexpr std::array<Composition, 161> kCompositions = {{
    {U'A', 0x0300, 0x00C0}, {U'A', 0x0301, 0x00C1}, {U'A', 0x0302, 0x00C2},
    {U'A', 0x0303, 0x00C3}, {U'A', 0x0304, 0x0100}, {U'A', 0x0306, 0x0102},
    {U'A', 0x0308, 0x00C4}, {U'A', 0x030A, 0x00C5}, {U'A', 0x0328, 0x0104},
    {U'C', 0x0301, 0x0106}, {U'C', 0x0302, 0x0108}, {U'C', 0x0307, 0x010A},
    {U'C', 0x030C, 0x010C}, {U'C', 0x0327, 0x00C7},
    {U'D', 0x030C, 0x010E},
    {U'E', 0x0300, 0x00C8}, {U'E', 0x0301, 0x00C9}, {U'E', 0x0302, 0x00CA},
    {U'E', 0x0304, 0x0112}, {U'E', 0x0306, 0x0114}, {U'E', 0x0307, 0x0116},
    {U'E', 0x0308, 0x00CB}, {U'E', 0x030C, 0x011A}, {U'E', 0x0328, 0x0118},
    {U'G', 0x0302, 0x011C}, {U'G', 0x0306, 0x011E}, {U'G', 0x0307, 0x0120},
    {U'G', 0x0327, 0x0122},
    {U'H', 0x0302, 0x0124},
    {U'I', 0x0300, 0x00CC}, {U'I', 0x0301, 0x00CD}, {U'I', 0x0302, 0x00CE},
    {U'I', 0x0303, 0x0128}, {U'I', 0x0304, 0x012A}, {U'I', 0x0306, 0x012C},
    {U'I', 0x0307, 0x0130}, {U'I', 0x0308, 0x00CF}, {U'I', 0x0328, 0x012E},
    {U'J', 0x0302, 0x0134},
    {U'K', 0x0327, 0x0136},
    {U'L', 0x0301, 0x0139}, {U'L', 0x0327, 0x013B}, {U'L', 0x030C, 0x013D},
    {U'N', 0x0301, 0x0143}, {U'N', 0x0303, 0x00D1}, {U'N', 0x0327, 0x0145},
    {U'N', 0x030C, 0x0147},
    {U'O', 0x0300, 0x00D2}, {U'O', 0x0301, 0x00D3}, {U'O', 0x0302, 0x00D4},
    {U'O', 0x0303, 0x00D5}, {U'O', 0x0304, 0x014C}, {U'O', 0x0306, 0x014E},
    {U'O', 0x0308, 0x00D6}, {U'O', 0x030B, 0x0150},
    {U'R', 0x0301, 0x0154}, {U'R', 0x0327, 0x0156}, {U'R', 0x030C, 0x0158},
    {U'S', 0x0301, 0x015A}, {U'S', 0x0302, 0x015C}, {U'S', 0x0327, 0x015E},
    {U'S', 0x030C, 0x0160},
    {U'T', 0x0327, 0x0162}, {U'T', 0x030C, 0x0164},
    {U'U', 0x0300, 0x00D9}, {U'U', 0x0301, 0x00DA}, {U'U', 0x0302, 0x00DB},
    {U'U', 0x0303, 0x0168}, {U'U', 0x0304, 0x016A}, {U'U', 0x0306, 0x016C},
    {U'U', 0x0308, 0x00DC}, {U'U', 0x030A, 0x016E}, {U'U', 0x030B, 0x0170},
    {U'U', 0x0328, 0x0172},
    {U'W', 0x0302, 0x0174},
    {U'Y', 0x0301, 0x00DD}, {U'Y', 0x0302, 0x0176}, {U'Y', 0x0308, 0x0178},
    {U'Z', 0x0301, 0x0179}, {U'Z', 0x0307, 0x017B}, {U'Z', 0x030C, 0x017D},
    {U'a', 0x0300, 0x00E0}, {U'a', 0x0301, 0x00E1}, {U'a', 0x0302, 0x00E2},
    {U'a', 0x0303, 0x00E3}, {U'a', 0x0304, 0x0101}, {U'a', 0x0306, 0x0103},
    {U'a', 0x0308, 0x00E4}, {U'a', 0x030A, 0x00E5}, {U'a', 0x0328, 0x0105},
    {U'c', 0x0301, 0x0107}, {U'c', 0x0302, 0x0109}, {U'c', 0x0307, 0x010B},
    {U'c', 0x030C, 0x010D}, {U'c', 0x0327, 0x00E7},
    {U'd', 0x030C, 0x010F},
    {U'e', 0x0300, 0x00E8}, {U'e', 0x0301, 0x00E9}, {U'e', 0x0302, 0x00EA},
    {U'e', 0x0304, 0x0113}, {U'e', 0x0306, 0x0115}, {U'e', 0x0307, 0x0117},
    {U'e', 0x0308, 0x00EB}, {U'e', 0x030C, 0x011B}, {U'e', 0x0328, 0x0119},
    {U'g', 0x0302, 0x011D}, {U'g', 0x0306, 0x011F}, {U'g', 0x0307, 0x0121},
    {U'g', 0x0327, 0x0123},
    {U'h', 0x0302, 0x0125},
    {U'i', 0x0300, 0x00EC}, {U'i', 0x0301, 0x00ED}, {U'i', 0x0302, 0x00EE},
    {U'i', 0x0303, 0x0129}, {U'i', 0x0304, 0x012B}, {U'i', 0x0306, 0x012D},
    {U'i', 0x0308, 0x00EF}, {U'i', 0x0328, 0x012F},
    {U'j', 0x0302, 0x0135},
    {U'k', 0x0327, 0x0137},
    {U'l', 0x0301, 0x013A}, {U'l', 0x0327, 0x013C}, {U'l', 0x030C, 0x013E},
    {U'n', 0x0301, 0x0144}, {U'n', 0x0303, 0x00F1}, {U'n', 0x0327, 0x0146},
    {U'n', 0x030C, 0x0148},
    {U'o', 0x0300, 0x00F2}, {U'o', 0x0301, 0x00F3}, {U'o', 0x0302, 0x00F4},
    {U'o', 0x0303, 0x00F5}, {U'o', 0x0304, 0x014D}, {U'o', 0x0306, 0x014F},
    {U'o', 0x0308, 0x00F6}, {U'o', 0x030B, 0x0151},
    {U'r', 0x0301, 0x0155}, {U'r', 0x0327, 0x0157}, {U'r', 0x030C, 0x0159},
    {U's', 0x0301, 0x015B}, {U's', 0x0302, 0x015D}, {U's', 0x0327, 0x015F},
    {U's', 0x030C, 0x0161},
    {U't', 0x0327, 0x0163}, {U't', 0x030C, 0x0165},
    {U'u', 0x0300, 0x00F9}, {U'u', 0x0301, 0x00FA}, {U'u', 0x0302, 0x00FB},
    {U'u', 0x0303, 0x0169}, {U'u', 0x0304, 0x016B}, {U'u', 0x0306, 0x016D},
    {U'u', 0x0308, 0x00FC}, {U'u', 0x030A, 0x016F}, {U'u', 0x030B, 0x0171},
    {U'u', 0x0328, 0x0173},
    {U'w', 0x0302, 0x0175},
    {U'y', 0x0301, 0x00FD}, {U'y', 0x0302, 0x0177}, {U'y', 0x0308, 0x00FF},
    {U'z', 0x0301, 0x017A}, {U'z', 0x0307, 0x017C}, {U'z', 0x030C, 0x017E},
}};

char32_t compose_pair(char32_t base, char32_t mark) {
    static const std::array<Composition, kCompositions.size()> sorted = [] {
        auto copy = kCompositions;
        std::sort(copy.begin(), copy.end(), [](const Composition& a, const Composition& b) {
            return a.base != b.base ? a.base < b.base : a.mark < b.mark;
        });
        return copy;
    }();
    auto it = std::lower_bound(
        sorted.begin(), sorted.end(), std::pair{base, mark},
        [](const Composition& c, const std::pair<char32_t, char32_t>& key) {
            return c.base != key.first ? c.base < key.first : c.mark < key.second;
        });
    if (it != sorted.end() && it->base == base && it->mark == mark) return it->composed;
    return 0;
}

}  // namespace

std::vector<char32_t> utf8_decode(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char b0 = static_cast<unsigned char>(text[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int extra;
        char32_t cp;
        char32_t min_cp;
        if ((b0 & 0xE0) == 0xC0) {
            extra = 1; cp = b0 & 0x1F; min_cp = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            extra = 2; cp = b0 & 0x0F; min_cp = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            extra = 3; cp = b0 & 0x07; min_cp = 0x10000;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + extra >= text.size()) {
            // truncated sequence
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k <= extra; ++k) {
            unsigned char b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok || cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += extra + 1;
    }
    return out;
}

void utf8_append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string utf8_encode(const std::vector<char32_t>& codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) utf8_append(out, cp);
    return out;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size(); ++i)
        if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++n;
    return n;
}

std::vector<char32_t> nfc(const std::vector<char32_t>& codepoints) {
    std::vector<char32_t> buf = codepoints;

    // Canonical ordering: stable bubble of combining marks by class.
    for (std::size_t i = 1; i < buf.size(); ++i) {
        int cc = combining_class(buf[i]);
        if (cc == 0) continue;
        std::size_t j = i;
        while (j > 0) {
            int prev = combining_class(buf[j - 1]);
            if (prev == 0 || prev <= cc) break;
            std::swap(buf[j - 1], buf[j]);
            --j;
        }
    }

    // Canonical composition against the last starter.
    std::vector<char32_t> out;
    out.reserve(buf.size());
    std::ptrdiff_t last_starter = -1;
    int last_cc = 0;
    for (char32_t cp : buf) {
        int cc = combining_class(cp);
        if (last_starter >= 0 && cc != 0 && !(last_cc != 0 && last_cc >= cc)) {
            if (char32_t comp = compose_pair(out[last_starter], cp)) {
                out[last_starter] = comp;
                continue;
            }
        }
        if (cc == 0) {
            last_starter = static_cast<std::ptrdiff_t>(out.size());
            last_cc = 0;
        } else {
            last_cc = cc;
        }
        out.push_back(cp);
    }
    return out;
}

std::string nfc(std::string_view text) {
    return utf8_encode(nfc(utf8_decode(text)));
}

char32_t fold_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
    return cp;
}

std::string fold_lower(std::string_view text) {
    auto cps = utf8_decode(text);
    for (auto& cp : cps) cp = fold_lower(cp);
    return utf8_encode(cps);
}

bool is_ascii_letter(char32_t cp) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

}  // namespace ocrpost
