#pragma once

#include <array>
#include <span>
#include <vector>

#include "wz/frame.hpp"

namespace wz {

// Row-major 4x4 tile of samples or coefficients.
using Block4 = std::array<double, 16>;

// Scan positions (row, col) of the 16 coefficient bands: band 0 is DC, the
// rest follow the standard 4x4 zig-zag toward the highest frequency.
const std::array<std::pair<int, int>, 16>& zigzag_order();

// Orthonormal 4x4 DCT-II and its inverse. idct4(dct4(x)) reproduces x to
// floating-point roundoff; both preserve block energy.
Block4 dct4(const Block4& samples);
Block4 idct4(const Block4& coeffs);

// A frame's coefficients regrouped by band: bands[k][i] is the band-k
// coefficient of block i in raster order.
struct CoeffBands {
    int blocks_w = 0;
    int blocks_h = 0;
    std::array<std::vector<double>, 16> bands;

    int block_count() const { return blocks_w * blocks_h; }
};

CoeffBands frame_to_bands(const Frame& frame);

// Same grouping for a real-valued plane (used for residual statistics).
CoeffBands plane_to_bands(std::span<const double> plane, int width, int height);

// Inverse-transforms grouped bands back into a real-valued plane.
std::vector<double> bands_to_plane(const CoeffBands& bands);

// bands_to_plane followed by rounding and clamping into 8-bit samples.
Frame bands_to_frame(const CoeffBands& bands, int frame_index = 0);

}  // namespace wz
