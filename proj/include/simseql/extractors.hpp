#ifndef SIMSEQL_EXTRACTORS_HPP
#define SIMSEQL_EXTRACTORS_HPP

#include <cmath>
#include <vector>

#include "common.hpp"
#include "value.hpp"

namespace simseql {

// Per-cell mean color over a 2x2 grid, emitted row-major as
// [r00,g00,b00, r01,g01,b01, r10,g10,b10, r11,g11,b11], each channel in [0,255].
// Pixel (x,y) belongs to cell (2y/h, 2x/w); a cell no pixel maps to reads as 0.
inline std::vector<double> extract_color_layout(const ImageRaster& img) {
    if (img.width <= 0 || img.height <= 0)
        throw RuntimeError("extract_MPEG7_color_layout: empty raster");
    double sum[4][3] = {};
    int64_t count[4] = {};
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            int cell = int(2 * y / img.height) * 2 + int(2 * x / img.width);
            size_t off = 3 * (size_t(y) * img.width + x);
            for (int ch = 0; ch < 3; ++ch) sum[cell][ch] += img.rgb[off + ch];
            ++count[cell];
        }
    }
    std::vector<double> out(12, 0.0);
    for (int cell = 0; cell < 4; ++cell)
        if (count[cell] > 0)
            for (int ch = 0; ch < 3; ++ch) out[cell * 3 + ch] = sum[cell][ch] / double(count[cell]);
    return out;
}

// 16-bin histogram of foreground-pixel angles around the foreground centroid,
// normalized to sum 1. Foreground is luminance >= 128 after binarization; an
// image with no foreground yields the zero vector.
inline std::vector<double> extract_contour_shape(const ImageRaster& img) {
    if (img.width <= 0 || img.height <= 0)
        throw RuntimeError("extract_MPEG7_contour_shape: empty raster");
    constexpr int kBins = 16;
    std::vector<std::pair<int, int>> fg;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            size_t off = 3 * (size_t(y) * img.width + x);
            double lum =
                0.299 * img.rgb[off] + 0.587 * img.rgb[off + 1] + 0.114 * img.rgb[off + 2];
            if (lum >= 128.0) fg.emplace_back(x, y);
        }
    }
    std::vector<double> hist(kBins, 0.0);
    if (fg.empty()) return hist;
    double cx = 0, cy = 0;
    for (auto [x, y] : fg) {
        cx += x;
        cy += y;
    }
    cx /= double(fg.size());
    cy /= double(fg.size());
    const double pi = std::acos(-1.0);
    for (auto [x, y] : fg) {
        double angle = std::atan2(double(y) - cy, double(x) - cx);  // (-pi, pi]
        int bin = int((angle + pi) / (2 * pi / kBins));
        if (bin >= kBins) bin = kBins - 1;
        if (bin < 0) bin = 0;
        hist[bin] += 1.0;
    }
    for (auto& h : hist) h /= double(fg.size());
    return hist;
}

}  // namespace simseql

#endif
