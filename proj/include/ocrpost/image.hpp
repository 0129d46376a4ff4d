#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocrpost {

enum class ImageErrorKind {
    UnreadableFile,
    MalformedHeader,
    UnsupportedMaxval,
    UnsupportedPng,
    BadDimensions,
};

class ImageError : public std::runtime_error {
public:
    ImageError(ImageErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ImageErrorKind kind() const { return kind_; }

private:
    ImageErrorKind kind_;
};

// Row-major 8-bit grayscale raster. Immutable by convention once built.
struct GrayImage {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int h, int w, std::uint8_t fill = 255)
        : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, fill) {
        if (h < 1 || w < 1)
            throw ImageError(ImageErrorKind::BadDimensions, "image dimensions must be >= 1");
    }

    std::uint8_t at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
    std::uint8_t& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
    bool in_bounds(int r, int c) const { return r >= 0 && r < height && c >= 0 && c < width; }

    bool operator==(const GrayImage&) const = default;
};

// Non-negative Sobel gradient magnitudes, same shape as the source image.
struct EdgeImage {
    int height = 0;
    int width = 0;
    std::vector<double> magnitudes;

    double at(int r, int c) const { return magnitudes[static_cast<std::size_t>(r) * width + c]; }
    double& at(int r, int c) { return magnitudes[static_cast<std::size_t>(r) * width + c]; }
};

// Reads a binary PGM (P5, maxval 255) or an 8-bit gray/RGB PNG.
// RGB converts with luma = round(0.299 R + 0.587 G + 0.114 B).
GrayImage load_image(const std::string& path);

GrayImage decode_pgm(const std::string& bytes);
std::string encode_pgm(const GrayImage& img);
void save_pgm(const GrayImage& img, const std::string& path);

std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// 3x3 Sobel with replicate border padding; magnitude = sqrt(Gx^2 + Gy^2).
EdgeImage sobel(const GrayImage& img);

// Histogram-based Otsu threshold t: pixels < t are ink. Deterministic
// (first maximum of the between-class variance).
int otsu_threshold(const GrayImage& img);

// pixel < threshold -> 0 (ink), else 255. threshold < 0 selects Otsu.
GrayImage binarize(const GrayImage& img, int threshold = -1);

}  // namespace ocrpost
