#include "wz/quantizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace wz {

namespace {

const std::array<QuantMatrix, 8>& matrices() {
    // Level counts per band, coarsest (id 1) to finest (id 8).
    static const std::array<QuantMatrix, 8> m = {{
        {1, {16, 8, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
        {2, {32, 8, 0, 0, 8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
        {3, {32, 8, 4, 0, 8, 4, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0}},
        {4, {32, 16, 8, 4, 16, 8, 4, 0, 8, 4, 0, 0, 4, 0, 0, 0}},
        {5, {32, 16, 8, 4, 16, 8, 4, 4, 8, 4, 4, 0, 4, 4, 0, 0}},
        {6, {64, 16, 8, 8, 16, 8, 8, 4, 8, 8, 4, 4, 8, 4, 4, 0}},
        {7, {64, 32, 16, 8, 32, 16, 8, 4, 16, 8, 4, 4, 8, 4, 4, 0}},
        {8, {128, 64, 32, 16, 64, 32, 16, 8, 32, 16, 8, 4, 16, 8, 4, 0}},
    }};
    return m;
}

void check_levels(int levels) {
    if (levels < 4 || !std::has_single_bit(static_cast<unsigned>(levels)))
        throw BadLevels("level count must be a power of two >= 4, got " +
                        std::to_string(levels));
}

}  // namespace

const QuantMatrix& quant_matrix(int id) {
    if (id < 1 || id > 8) throw Error("quantization matrix id must be in [1, 8]");
    return matrices()[id - 1];
}

int plane_count(int levels) {
    check_levels(levels);
    return std::bit_width(static_cast<unsigned>(levels)) - 1;
}

QuantizedBand quantize_dc(std::span<const double> coeffs, int levels) {
    check_levels(levels);
    QuantizedBand out;
    out.band = 0;
    out.levels = levels;
    out.step = 1024.0 / levels;
    out.bins.resize(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
        int bin = static_cast<int>(std::floor(coeffs[i] / out.step));
        out.bins[i] = std::clamp(bin, 0, levels - 1);
    }
    return out;
}

std::vector<int32_t> quantize_ac_bins(std::span<const double> coeffs, int levels, int range) {
    check_levels(levels);
    if (range < 1) throw Error("AC dynamic range must be >= 1");
    double step = 2.0 * range / levels;
    int clamp = levels / 2 - 1;
    std::vector<int32_t> bins(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
        int mag = std::min(static_cast<int>(std::floor(std::abs(coeffs[i]) / step)), clamp);
        bins[i] = coeffs[i] < 0 ? -mag : mag;
    }
    return bins;
}

QuantizedBand quantize_ac(std::span<const double> coeffs, int levels, int band) {
    check_levels(levels);
    double peak = 0.0;
    for (double c : coeffs) peak = std::max(peak, std::abs(c));
    QuantizedBand out;
    out.band = band;
    out.levels = levels;
    out.range = std::max(1, static_cast<int>(std::ceil(peak)));
    out.step = 2.0 * out.range / levels;
    out.bins = quantize_ac_bins(coeffs, levels, out.range);
    return out;
}

BitPlaneSet bins_to_bitplanes(const QuantizedBand& q) {
    int bits = plane_count(q.levels);
    BitPlaneSet out;
    out.band = q.band;
    out.levels = q.levels;
    size_t n = q.bins.size();
    if (q.band == 0) {
        // Natural binary, MSB plane first.
        out.planes.assign(bits, std::vector<uint8_t>(n));
        for (size_t i = 0; i < n; ++i) {
            int32_t bin = q.bins[i];
            if (bin < 0 || bin >= q.levels)
                throw BinOutOfRange("DC bin " + std::to_string(bin) + " outside [0, " +
                                    std::to_string(q.levels) + ")");
            for (int b = 0; b < bits; ++b)
                out.planes[bits - 1 - b][i] = static_cast<uint8_t>((bin >> b) & 1);
        }
    } else {
        // Sign plane (1 = negative) then magnitude MSB-first.
        int mag_bits = bits - 1;
        int clamp = q.levels / 2 - 1;
        out.planes.assign(bits, std::vector<uint8_t>(n));
        for (size_t i = 0; i < n; ++i) {
            int32_t bin = q.bins[i];
            int mag = std::abs(bin);
            if (mag > clamp)
                throw BinOutOfRange("AC magnitude " + std::to_string(mag) + " above clamp " +
                                    std::to_string(clamp));
            out.planes[0][i] = bin < 0 ? 1 : 0;
            for (int b = 0; b < mag_bits; ++b)
                out.planes[1 + mag_bits - 1 - b][i] = static_cast<uint8_t>((mag >> b) & 1);
        }
    }
    return out;
}

std::vector<int32_t> bitplanes_to_bins(const BitPlaneSet& p) {
    int bits = plane_count(p.levels);
    if (static_cast<int>(p.planes.size()) != bits)
        throw InconsistentPlaneCount("expected " + std::to_string(bits) + " planes, got " +
                                     std::to_string(p.planes.size()));
    size_t n = p.planes.empty() ? 0 : p.planes[0].size();
    for (const auto& plane : p.planes)
        if (plane.size() != n) throw InconsistentPlaneCount("bit planes differ in length");
    std::vector<int32_t> bins(n, 0);
    if (p.band == 0) {
        for (int b = 0; b < bits; ++b)
            for (size_t i = 0; i < n; ++i)
                bins[i] = (bins[i] << 1) | p.planes[b][i];
    } else {
        for (int b = 1; b < bits; ++b)
            for (size_t i = 0; i < n; ++i)
                bins[i] = (bins[i] << 1) | p.planes[b][i];
        for (size_t i = 0; i < n; ++i)
            if (p.planes[0][i]) bins[i] = -bins[i];
    }
    return bins;
}

QuantizedBands quantize_bands(const CoeffBands& bands, const QuantMatrix& m) {
    QuantizedBands out;
    out.blocks_w = bands.blocks_w;
    out.blocks_h = bands.blocks_h;
    for (int k = 0; k < 16; ++k) {
        int levels = m.levels[k];
        if (levels == 0) {
            out.skipped.push_back(k);
            continue;
        }
        out.coded.push_back(k == 0 ? quantize_dc(bands.bands[0], levels)
                                   : quantize_ac(bands.bands[k], levels, k));
    }
    return out;
}

}  // namespace wz
