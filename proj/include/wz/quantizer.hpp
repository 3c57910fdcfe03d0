#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wz/transform.hpp"

namespace wz {

// Per-band quantizer level counts for one rate-distortion point. levels[k]
// applies to band k; 0 marks a band that is not coded (the decoder keeps its
// side-information coefficients for those).
struct QuantMatrix {
    int id = 0;
    std::array<int, 16> levels{};
};

// The eight built-in matrices, id 1 (coarsest) .. 8 (finest).
const QuantMatrix& quant_matrix(int id);

// DC or AC band after quantization. DC bins are unsigned level indices; AC
// bins are signed with a doubled zero interval. `range` is the transmitted
// per-band dynamic range (AC only; DC uses the fixed [0, 1024) span).
struct QuantizedBand {
    int band = 0;
    int levels = 0;
    double step = 0.0;
    int range = 0;
    std::vector<int32_t> bins;
};

struct QuantizedBands {
    int blocks_w = 0;
    int blocks_h = 0;
    std::vector<QuantizedBand> coded;  // ascending band index
    std::vector<int> skipped;          // bands with level count 0
};

// One band's bins split into bit planes, ordered for transmission: DC is
// natural binary MSB-first; AC leads with the sign plane (1 means negative)
// followed by magnitude planes MSB-first.
struct BitPlaneSet {
    int band = 0;
    int levels = 0;
    std::vector<std::vector<uint8_t>> planes;
};

// Number of planes for a level count: log2(levels).
int plane_count(int levels);

// Uniform DC quantizer over the analytic coefficient span [0, 1024).
QuantizedBand quantize_dc(std::span<const double> coeffs, int levels);

// Dead-zone AC quantizer; measures the band's dynamic range and rounds it up
// to the transmitted integer. The zero bin spans (-W, +W).
QuantizedBand quantize_ac(std::span<const double> coeffs, int levels, int band);

// Same quantizer against an externally supplied range (decoder side, where
// the range arrives in the bitstream).
std::vector<int32_t> quantize_ac_bins(std::span<const double> coeffs, int levels, int range);

BitPlaneSet bins_to_bitplanes(const QuantizedBand& q);
std::vector<int32_t> bitplanes_to_bins(const BitPlaneSet& p);

// Applies the matrix to a whole frame's bands.
QuantizedBands quantize_bands(const CoeffBands& bands, const QuantMatrix& m);

}  // namespace wz
