#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ocrpost/image.hpp"
#include "ocrpost/noisegen.hpp"

namespace helpers {

// Self-cleaning temp directory for file-based tests.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("ocrpost_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

struct BandSpec {
    int top = 0;
    int height = 0;
};

// Text-like band: dense random speckle so every row of the band carries
// edge energy (solid bars only respond at their outline).
inline void paint_band(ocrpost::GrayImage& img, const BandSpec& band, ocrpost::SplitMix64& rng,
                       int margin = 4, double density = 0.5) {
    for (int r = band.top; r < band.top + band.height; ++r)
        for (int c = margin; c < img.width - margin; ++c)
            if (rng.next_double() < density) img.at(r, c) = 0;
}

struct SyntheticDoc {
    ocrpost::GrayImage image{1, 1};
    std::vector<BandSpec> bands;
};

// `bands` speckle bands separated by >= `gap` blank rows; optional one-pixel
// bridge strokes connecting adjacent bands (touching-lines case).
inline SyntheticDoc make_document(int bands, std::uint64_t seed, int width = 100,
                                  int band_height = 8, int gap = 7, bool bridges = false) {
    ocrpost::SplitMix64 rng(seed);
    int height = bands * band_height + (bands + 1) * gap;
    SyntheticDoc doc;
    doc.image = ocrpost::GrayImage(height, width, 255);
    int top = gap;
    for (int b = 0; b < bands; ++b) {
        BandSpec band{top, band_height};
        paint_band(doc.image, band, rng);
        doc.bands.push_back(band);
        top += band_height + gap;
    }
    if (bridges) {
        for (std::size_t b = 0; b + 1 < doc.bands.size(); ++b) {
            int col = 10 + static_cast<int>(rng.next_below(width - 20));
            int from = doc.bands[b].top + doc.bands[b].height - 1;
            int to = doc.bands[b + 1].top;
            for (int r = from; r <= to; ++r) doc.image.at(r, col) = 0;
        }
    }
    return doc;
}

}  // namespace helpers
