#include "pcgsim/heatmap.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace pcgsim {

uint32_t HeatMap::row_argmin(uint8_t s) const {
    uint32_t best = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    for (uint32_t g = 0; g < 256; ++g) {
        if (!count(s, static_cast<uint8_t>(g))) continue;
        double m = mean(s, static_cast<uint8_t>(g));
        if (m < best_mean) {
            best_mean = m;
            best = g;
        }
    }
    return best;
}

bool HeatMap::full() const {
    for (uint32_t s = 0; s < 256; ++s)
        for (uint32_t g = 0; g < 256; ++g)
            if (!count(static_cast<uint8_t>(s), static_cast<uint8_t>(g))) return false;
    return true;
}

double diagonal_contrast(const HeatMap& hm) {
    uint32_t hits = 0;
    for (uint32_t s = 0; s < 256; ++s)
        if (hm.row_argmin(static_cast<uint8_t>(s)) == s) ++hits;
    return static_cast<double>(hits) / 256.0;
}

void write_heatmap_csv(const HeatMap& hm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write heatmap CSV: " + path);
    char buf[32];
    for (uint32_t s = 0; s < 256; ++s) {
        for (uint32_t g = 0; g < 256; ++g) {
            std::snprintf(buf, sizeof(buf), "%.4f", hm.mean(static_cast<uint8_t>(s), static_cast<uint8_t>(g)));
            if (g) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for heatmap CSV: " + path);
}

void write_heatmap_pgm(const HeatMap& hm, const std::string& path) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (uint32_t s = 0; s < 256; ++s) {
        for (uint32_t g = 0; g < 256; ++g) {
            double m = hm.mean(static_cast<uint8_t>(s), static_cast<uint8_t>(g));
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    double span = hi - lo;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write heatmap PGM: " + path);
    out << "P5\n256 256\n255\n";
    for (uint32_t s = 0; s < 256; ++s) {
        unsigned char row[256];
        for (uint32_t g = 0; g < 256; ++g) {
            double m = hm.mean(static_cast<uint8_t>(s), static_cast<uint8_t>(g));
            double norm = span > 0.0 ? (m - lo) / span : 0.0;
            long v = 255 - std::lround(norm * 255.0);
            if (v < 0) v = 0;
            if (v > 255) v = 255;
            row[g] = static_cast<unsigned char>(v);
        }
        out.write(reinterpret_cast<const char*>(row), sizeof(row));
    }
    if (!out) throw std::runtime_error("write failed for heatmap PGM: " + path);
}

} // namespace pcgsim
