#pragma once

#include <vector>

#include "ocrpost/image.hpp"

namespace ocrpost {

// Horizontal projection profile: per-row sums of edge magnitudes.
struct HppProfile {
    std::vector<double> sums;
    double max_sum = 0.0;
    double min_sum = 0.0;
};

// Inclusive row interval of one detected text line.
struct LineBand {
    int top_row = 0;
    int bottom_row = 0;

    bool operator==(const LineBand&) const = default;
};

struct SeamPoint {
    int row = 0;
    int col = 0;

    bool operator==(const SeamPoint&) const = default;
};

// Monotone left-to-right separating path: col advances by 0 or +1 per step,
// never -1; consecutive points are 8-connected.
struct SeamPath {
    std::vector<SeamPoint> points;
    double cost = 0.0;
};

struct SeamConfig {
    double ink_penalty = 900.0;      // charged when the entered cell is ink
    double deviation_weight = 0.05;  // times |row - corridor midline|
};

HppProfile hpp(const EdgeImage& edges);

// Centered moving average; window must be odd, 1 = no smoothing.
HppProfile smooth_hpp(const HppProfile& profile, int window);

// Threshold t = min + (max - min)/4; maximal runs of rows with sums >= t.
// A flat profile (max == min) yields no bands.
std::vector<LineBand> detect_bands(const HppProfile& profile);

// Minimum-cost seam across the corridor rows [upper.top_row,
// lower.bottom_row] of a binarized ink mask (0 = ink). A* with heuristic
// (width-1-col); step cost 1 (axial) or sqrt(2) (diagonal), plus the ink
// penalty and deviation cost of the entered cell. Throws when the corridor
// is empty.
SeamPath seam_between(const GrayImage& ink, const LineBand& upper, const LineBand& lower,
                      const SeamConfig& cfg = {});

struct SegmentConfig {
    SeamConfig seam;
    int smooth_window = 1;       // odd; 1 disables smoothing
    int binarize_threshold = -1; // -1 = Otsu
};

struct SegmentResult {
    std::vector<GrayImage> lines;  // one crop per band, top to bottom
    std::vector<SeamPath> seams;   // one seam between each adjacent band pair
    std::vector<LineBand> bands;
};

// sobel -> hpp -> detect_bands -> seams, then per-line crops whose
// boundaries follow the seams per column (background-filled outside,
// bounding-box cropped to ink). A blank page yields an empty result.
SegmentResult segment_document(const GrayImage& img, const SegmentConfig& cfg = {});

}  // namespace ocrpost
