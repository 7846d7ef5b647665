#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pcgsim {

// 256x256 accumulation grid of access latencies: row = secret, col = guess.
class HeatMap {
public:
    HeatMap() : sum_(kCells, 0), cnt_(kCells, 0) {}

    void add(uint8_t secret, uint8_t guess, uint64_t latency) {
        size_t i = idx(secret, guess);
        sum_[i] += latency;
        ++cnt_[i];
    }

    uint64_t count(uint8_t s, uint8_t g) const { return cnt_[idx(s, g)]; }

    double mean(uint8_t s, uint8_t g) const {
        size_t i = idx(s, g);
        return cnt_[i] ? static_cast<double>(sum_[i]) / static_cast<double>(cnt_[i]) : 0.0;
    }

    // First column with the minimal mean; empty cells rank last.
    uint32_t row_argmin(uint8_t s) const;

    bool full() const;  // every cell sampled at least once

private:
    static constexpr size_t kCells = 256 * 256;
    static size_t idx(uint8_t s, uint8_t g) { return static_cast<size_t>(s) * 256 + g; }

    std::vector<uint64_t> sum_;
    std::vector<uint64_t> cnt_;
};

// Fraction of rows whose argmin column equals the row index.
double diagonal_contrast(const HeatMap& hm);

// 256 rows x 256 comma-separated mean latencies.
void write_heatmap_csv(const HeatMap& hm, const std::string& path);

// Binary P5 graymap, value = 255 - normalized mean latency (bright = fast).
void write_heatmap_pgm(const HeatMap& hm, const std::string& path);

} // namespace pcgsim
