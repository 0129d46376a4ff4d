#include "ocrpost/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ocrpost {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Moves keep the column non-decreasing; at most one row step at a time.
constexpr int kMoves[5][2] = {{-1, 1}, {0, 1}, {1, 1}, {-1, 0}, {1, 0}};

struct PqItem {
    double f;
    double g;
    int row;
    int col;

    bool operator>(const PqItem& o) const {
        if (f != o.f) return f > o.f;
        if (row != o.row) return row > o.row;
        return col > o.col;
    }
};

}  // namespace

HppProfile hpp(const EdgeImage& edges) {
    HppProfile profile;
    profile.sums.resize(edges.height, 0.0);
    for (int r = 0; r < edges.height; ++r) {
        double sum = 0.0;
        for (int c = 0; c < edges.width; ++c) sum += edges.at(r, c);
        profile.sums[r] = sum;
    }
    auto [mn, mx] = std::minmax_element(profile.sums.begin(), profile.sums.end());
    profile.min_sum = *mn;
    profile.max_sum = *mx;
    return profile;
}

HppProfile smooth_hpp(const HppProfile& profile, int window) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("smoothing window must be odd and >= 1");
    if (window == 1) return profile;

    HppProfile out;
    int n = static_cast<int>(profile.sums.size());
    int half = window / 2;
    out.sums.resize(n, 0.0);
    for (int r = 0; r < n; ++r) {
        int lo = std::max(0, r - half), hi = std::min(n - 1, r + half);
        double sum = 0.0;
        for (int k = lo; k <= hi; ++k) sum += profile.sums[k];
        out.sums[r] = sum / static_cast<double>(hi - lo + 1);
    }
    auto [mn, mx] = std::minmax_element(out.sums.begin(), out.sums.end());
    out.min_sum = *mn;
    out.max_sum = *mx;
    return out;
}

std::vector<LineBand> detect_bands(const HppProfile& profile) {
    if (profile.sums.empty()) throw std::invalid_argument("empty profile");
    std::vector<LineBand> bands;
    if (profile.max_sum == profile.min_sum) return bands;

    double threshold = profile.min_sum + (profile.max_sum - profile.min_sum) / 4.0;
    int n = static_cast<int>(profile.sums.size());
    int r = 0;
    while (r < n) {
        if (profile.sums[r] >= threshold) {
            int top = r;
            while (r < n && profile.sums[r] >= threshold) ++r;
            bands.push_back(LineBand{top, r - 1});
        } else {
            ++r;
        }
    }
    return bands;
}

SeamPath seam_between(const GrayImage& ink, const LineBand& upper, const LineBand& lower,
                      const SeamConfig& cfg) {
    const int r0 = upper.top_row;
    const int r1 = lower.bottom_row;
    const int width = ink.width;
    if (r0 > r1 || r0 < 0 || r1 >= ink.height || width < 1)
        throw std::invalid_argument("empty or out-of-range seam corridor");

    const int rows = r1 - r0 + 1;
    const double mid = (static_cast<double>(r0) + r1) / 2.0;
    const auto idx = [&](int r, int c) { return static_cast<std::size_t>(r - r0) * width + c; };
    const auto is_ink = [&](int r, int c) { return ink.at(r, c) == 0; };
    const auto cell_cost = [&](int r, int c) {
        return (is_ink(r, c) ? cfg.ink_penalty : 0.0) + cfg.deviation_weight * std::abs(r - mid);
    };

    std::vector<double> dist(static_cast<std::size_t>(rows) * width,
                             std::numeric_limits<double>::infinity());
    std::vector<std::int32_t> parent(dist.size(), -1);
    std::priority_queue<PqItem, std::vector<PqItem>, std::greater<>> open;

    for (int r = r0; r <= r1; ++r) {
        double g = cell_cost(r, 0);
        dist[idx(r, 0)] = g;
        open.push(PqItem{g + (width - 1), g, r, 0});
    }

    int goal_row = -1;
    while (!open.empty()) {
        PqItem cur = open.top();
        open.pop();
        if (cur.g > dist[idx(cur.row, cur.col)]) continue;
        if (cur.col == width - 1) {
            goal_row = cur.row;
            break;
        }
        for (const auto& mv : kMoves) {
            int nr = cur.row + mv[0], nc = cur.col + mv[1];
            if (nr < r0 || nr > r1 || nc >= width) continue;
            double step = (mv[0] != 0 && mv[1] != 0) ? kSqrt2 : 1.0;
            double g = cur.g + step + cell_cost(nr, nc);
            if (g < dist[idx(nr, nc)]) {
                dist[idx(nr, nc)] = g;
                parent[idx(nr, nc)] = static_cast<std::int32_t>(idx(cur.row, cur.col));
                open.push(PqItem{g + (width - 1 - nc), g, nr, nc});
            }
        }
    }
    if (goal_row < 0) throw std::runtime_error("seam search exhausted without reaching the right edge");

    SeamPath path;
    path.cost = dist[idx(goal_row, width - 1)];
    std::int32_t at = static_cast<std::int32_t>(idx(goal_row, width - 1));
    while (at >= 0) {
        int r = r0 + at / width, c = at % width;
        path.points.push_back(SeamPoint{r, c});
        at = parent[static_cast<std::size_t>(at)];
    }
    std::reverse(path.points.begin(), path.points.end());
    return path;
}

namespace {

// Per-column extremes of a seam; rows between max_of_upper and min_of_lower
// belong to the line in between.
std::vector<int> seam_max_rows(const SeamPath& seam, int width) {
    std::vector<int> rows(width, std::numeric_limits<int>::min());
    for (const auto& p : seam.points) rows[p.col] = std::max(rows[p.col], p.row);
    return rows;
}

std::vector<int> seam_min_rows(const SeamPath& seam, int width) {
    std::vector<int> rows(width, std::numeric_limits<int>::max());
    for (const auto& p : seam.points) rows[p.col] = std::min(rows[p.col], p.row);
    return rows;
}

GrayImage crop_line(const GrayImage& img, const GrayImage& ink, const LineBand& band,
                    const SeamPath* upper_seam, const SeamPath* lower_seam) {
    const int width = img.width;
    std::vector<int> top(width, 0), bottom(width, img.height - 1);
    if (upper_seam) {
        auto rows = seam_max_rows(*upper_seam, width);
        for (int c = 0; c < width; ++c) top[c] = rows[c] + 1;
    }
    if (lower_seam) {
        auto rows = seam_min_rows(*lower_seam, width);
        for (int c = 0; c < width; ++c) bottom[c] = rows[c] - 1;
    }

    // Bounding box of ink inside the seam-delimited region.
    int min_r = img.height, max_r = -1, min_c = width, max_c = -1;
    for (int c = 0; c < width; ++c) {
        for (int r = std::max(0, top[c]); r <= std::min(img.height - 1, bottom[c]); ++r) {
            if (ink.at(r, c) != 0) continue;
            min_r = std::min(min_r, r);
            max_r = std::max(max_r, r);
            min_c = std::min(min_c, c);
            max_c = std::max(max_c, c);
        }
    }
    if (max_r < 0) {
        // No ink between the seams: fall back to the detected band rows.
        min_r = band.top_row;
        max_r = band.bottom_row;
        min_c = 0;
        max_c = width - 1;
    }

    GrayImage crop(max_r - min_r + 1, max_c - min_c + 1, 255);
    for (int c = min_c; c <= max_c; ++c) {
        int lo = std::max(min_r, top[c]), hi = std::min(max_r, bottom[c]);
        for (int r = lo; r <= hi; ++r) crop.at(r - min_r, c - min_c) = img.at(r, c);
    }
    return crop;
}

}  // namespace

SegmentResult segment_document(const GrayImage& img, const SegmentConfig& cfg) {
    SegmentResult result;
    EdgeImage edges = sobel(img);
    HppProfile profile = smooth_hpp(hpp(edges), cfg.smooth_window);
    result.bands = detect_bands(profile);
    if (result.bands.empty()) return result;

    GrayImage ink = binarize(img, cfg.binarize_threshold);
    for (std::size_t i = 0; i + 1 < result.bands.size(); ++i)
        result.seams.push_back(seam_between(ink, result.bands[i], result.bands[i + 1], cfg.seam));

    for (std::size_t i = 0; i < result.bands.size(); ++i) {
        const SeamPath* upper = i > 0 ? &result.seams[i - 1] : nullptr;
        const SeamPath* lower = i < result.seams.size() ? &result.seams[i] : nullptr;
        result.lines.push_back(crop_line(img, ink, result.bands[i], upper, lower));
    }
    return result;
}

}  // namespace ocrpost
