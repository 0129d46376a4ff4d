#include "ocrpost/image.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ocrpost {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ImageError(ImageErrorKind::UnreadableFile, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw ImageError(ImageErrorKind::UnreadableFile, "read failure on " + path);
    return ss.str();
}

// Skips PGM whitespace and '#' comment lines, returns the next integer.
int next_pgm_int(const std::string& bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
        throw ImageError(ImageErrorKind::MalformedHeader, "missing integer in PGM header");
    long value = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        value = value * 10 + (bytes[pos] - '0');
        if (value > 1'000'000'000)
            throw ImageError(ImageErrorKind::MalformedHeader, "PGM header value overflow");
        ++pos;
    }
    return static_cast<int>(value);
}

struct PngReadState {
    const unsigned char* data;
    std::size_t size;
    std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t want) {
    auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (st->pos + want > st->size)
        png_error(png, "unexpected end of PNG stream");
    std::memcpy(out, st->data + st->pos, want);
    st->pos += want;
}

GrayImage decode_png(const std::string& bytes, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw ImageError(ImageErrorKind::UnsupportedPng, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw ImageError(ImageErrorKind::UnsupportedPng, "libpng init failed");
    }

    std::vector<png_bytep> row_ptrs;
    std::vector<std::uint8_t> raster;
    PngReadState state{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), 0};

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageError(ImageErrorKind::UnsupportedPng, "malformed PNG: " + path);
    }

    png_set_read_fn(png, &state, png_read_from_memory);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    // Normalize everything to 8-bit RGB without alpha.
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    if (png_get_rowbytes(png, info) != w * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageError(ImageErrorKind::UnsupportedPng, "unsupported PNG layout: " + path);
    }

    raster.resize(static_cast<std::size_t>(h) * w * 3);
    row_ptrs.resize(h);
    for (png_uint_32 r = 0; r < h; ++r)
        row_ptrs[r] = raster.data() + static_cast<std::size_t>(r) * w * 3;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (h < 1 || w < 1)
        throw ImageError(ImageErrorKind::BadDimensions, "empty PNG: " + path);

    GrayImage img(static_cast<int>(h), static_cast<int>(w));
    for (std::size_t i = 0, n = static_cast<std::size_t>(h) * w; i < n; ++i)
        img.pixels[i] = rgb_to_luma(raster[i * 3], raster[i * 3 + 1], raster[i * 3 + 2]);
    return img;
}

}  // namespace

std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    double y = 0.299 * r + 0.587 * g + 0.114 * b;
    long v = std::lround(y);
    if (v < 0) v = 0;
    if (v > 255) v = 255;
    return static_cast<std::uint8_t>(v);
}

GrayImage decode_pgm(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw ImageError(ImageErrorKind::MalformedHeader, "not a P5 PGM");
    std::size_t pos = 2;
    int width = next_pgm_int(bytes, pos);
    int height = next_pgm_int(bytes, pos);
    int maxval = next_pgm_int(bytes, pos);
    if (maxval != 255)
        throw ImageError(ImageErrorKind::UnsupportedMaxval,
                         "unsupported PGM maxval " + std::to_string(maxval));
    if (width < 1 || height < 1)
        throw ImageError(ImageErrorKind::MalformedHeader, "PGM dimensions must be >= 1");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
        throw ImageError(ImageErrorKind::MalformedHeader, "missing separator before PGM data");
    ++pos;
    std::size_t need = static_cast<std::size_t>(width) * height;
    if (bytes.size() - pos < need)
        throw ImageError(ImageErrorKind::MalformedHeader, "truncated PGM pixel data");
    GrayImage img(height, width);
    std::memcpy(img.pixels.data(), bytes.data() + pos, need);
    return img;
}

std::string encode_pgm(const GrayImage& img) {
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ImageError(ImageErrorKind::UnreadableFile, "cannot write " + path);
    std::string bytes = encode_pgm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw ImageError(ImageErrorKind::UnreadableFile, "write failure on " + path);
}

GrayImage load_image(const std::string& path) {
    std::string bytes = read_file(path);
    static const unsigned char png_sig[4] = {0x89, 'P', 'N', 'G'};
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), png_sig, 4) == 0)
        return decode_png(bytes, path);
    return decode_pgm(bytes);
}

EdgeImage sobel(const GrayImage& img) {
    EdgeImage out;
    out.height = img.height;
    out.width = img.width;
    out.magnitudes.resize(img.pixels.size());

    auto clamped = [&](int r, int c) -> int {
        if (r < 0) r = 0;
        if (r >= img.height) r = img.height - 1;
        if (c < 0) c = 0;
        if (c >= img.width) c = img.width - 1;
        return img.at(r, c);
    };

    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            int p00 = clamped(r - 1, c - 1), p01 = clamped(r - 1, c), p02 = clamped(r - 1, c + 1);
            int p10 = clamped(r, c - 1), p12 = clamped(r, c + 1);
            int p20 = clamped(r + 1, c - 1), p21 = clamped(r + 1, c), p22 = clamped(r + 1, c + 1);
            int gx = -p00 + p02 - 2 * p10 + 2 * p12 - p20 + p22;
            int gy = -p00 - 2 * p01 - p02 + p20 + 2 * p21 + p22;
            out.at(r, c) = std::sqrt(static_cast<double>(gx) * gx + static_cast<double>(gy) * gy);
        }
    }
    return out;
}

int otsu_threshold(const GrayImage& img) {
    std::size_t hist[256] = {};
    for (std::uint8_t p : img.pixels) ++hist[p];
    const double total = static_cast<double>(img.pixels.size());

    double sum_all = 0;
    for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];

    double best_var = -1.0;
    int best_k = 0;
    double w0 = 0, sum0 = 0;
    // k splits intensities into [0..k] and [k+1..255].
    for (int k = 0; k < 255; ++k) {
        w0 += static_cast<double>(hist[k]);
        sum0 += static_cast<double>(k) * hist[k];
        double w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        double mu0 = sum0 / w0;
        double mu1 = (sum_all - sum0) / w1;
        double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (between > best_var) {
            best_var = between;
            best_k = k;
        }
    }
    // Convert the split point to a "pixel < t is ink" threshold.
    return best_k + 1;
}

GrayImage binarize(const GrayImage& img, int threshold) {
    if (threshold < 0) threshold = otsu_threshold(img);
    if (threshold > 255)
        throw std::invalid_argument("binarize threshold must be in [0,255]");
    GrayImage out(img.height, img.width);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = img.pixels[i] < threshold ? 0 : 255;
    return out;
}

}  // namespace ocrpost
