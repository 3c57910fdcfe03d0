#include "wz/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wz/parallel.hpp"

namespace wz {

namespace {

// Orthonormal DCT-II basis: A[k][n] = c_k * cos(pi*k*(2n+1)/8) with
// c_0 = 1/2 and c_k = sqrt(1/2) otherwise; A * A^T = I.
const std::array<std::array<double, 4>, 4>& basis() {
    static const auto a = [] {
        std::array<std::array<double, 4>, 4> m{};
        for (int k = 0; k < 4; ++k) {
            double c = k == 0 ? std::sqrt(0.25) : std::sqrt(0.5);
            for (int n = 0; n < 4; ++n)
                m[k][n] = c * std::cos(std::numbers::pi * k * (2 * n + 1) / 8.0);
        }
        return m;
    }();
    return a;
}

void check_plane_dims(int width, int height) {
    if (width <= 0 || height <= 0 || width % 4 != 0 || height % 4 != 0)
        throw BadDimensions("transform needs dimensions divisible by 4");
}

}  // namespace

const std::array<std::pair<int, int>, 16>& zigzag_order() {
    static const std::array<std::pair<int, int>, 16> order = {{
        {0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}, {0, 3}, {1, 2},
        {2, 1}, {3, 0}, {3, 1}, {2, 2}, {1, 3}, {2, 3}, {3, 2}, {3, 3},
    }};
    return order;
}

Block4 dct4(const Block4& samples) {
    const auto& a = basis();
    Block4 tmp{};  // A * X
    for (int k = 0; k < 4; ++k)
        for (int n = 0; n < 4; ++n) {
            double s = 0.0;
            for (int m = 0; m < 4; ++m) s += a[k][m] * samples[m * 4 + n];
            tmp[k * 4 + n] = s;
        }
    Block4 out{};  // (A * X) * A^T
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            double s = 0.0;
            for (int m = 0; m < 4; ++m) s += tmp[k * 4 + m] * a[l][m];
            out[k * 4 + l] = s;
        }
    return out;
}

Block4 idct4(const Block4& coeffs) {
    const auto& a = basis();
    Block4 tmp{};  // A^T * C
    for (int n = 0; n < 4; ++n)
        for (int l = 0; l < 4; ++l) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += a[k][n] * coeffs[k * 4 + l];
            tmp[n * 4 + l] = s;
        }
    Block4 out{};  // (A^T * C) * A
    for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m) {
            double s = 0.0;
            for (int l = 0; l < 4; ++l) s += tmp[n * 4 + l] * a[l][m];
            out[n * 4 + m] = s;
        }
    return out;
}

CoeffBands plane_to_bands(std::span<const double> plane, int width, int height) {
    check_plane_dims(width, height);
    if (plane.size() != static_cast<size_t>(width) * height)
        throw DimensionMismatch("plane length does not match dimensions");
    CoeffBands out;
    out.blocks_w = width / 4;
    out.blocks_h = height / 4;
    int blocks = out.block_count();
    for (auto& band : out.bands) band.resize(blocks);
    const auto& order = zigzag_order();
    parallel_for(blocks, [&](int bi) {
        int bx = bi % out.blocks_w;
        int by = bi / out.blocks_w;
        Block4 block;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                block[r * 4 + c] = plane[size_t(by * 4 + r) * width + bx * 4 + c];
        Block4 coeffs = dct4(block);
        for (int k = 0; k < 16; ++k) {
            auto [r, c] = order[k];
            out.bands[k][bi] = coeffs[r * 4 + c];
        }
    });
    return out;
}

CoeffBands frame_to_bands(const Frame& frame) {
    std::vector<double> plane(frame.luma.begin(), frame.luma.end());
    return plane_to_bands(plane, frame.width, frame.height);
}

std::vector<double> bands_to_plane(const CoeffBands& bands) {
    int width = bands.blocks_w * 4;
    int height = bands.blocks_h * 4;
    check_plane_dims(width, height);
    int blocks = bands.block_count();
    for (const auto& band : bands.bands)
        if (band.size() != static_cast<size_t>(blocks))
            throw DimensionMismatch("band length does not match block grid");
    std::vector<double> plane(static_cast<size_t>(width) * height);
    const auto& order = zigzag_order();
    parallel_for(blocks, [&](int bi) {
        int bx = bi % bands.blocks_w;
        int by = bi / bands.blocks_w;
        Block4 coeffs{};
        for (int k = 0; k < 16; ++k) {
            auto [r, c] = order[k];
            coeffs[r * 4 + c] = bands.bands[k][bi];
        }
        Block4 block = idct4(coeffs);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                plane[size_t(by * 4 + r) * width + bx * 4 + c] = block[r * 4 + c];
    });
    return plane;
}

Frame bands_to_frame(const CoeffBands& bands, int frame_index) {
    std::vector<double> plane = bands_to_plane(bands);
    Frame f;
    f.width = bands.blocks_w * 4;
    f.height = bands.blocks_h * 4;
    f.index = frame_index;
    f.luma.resize(plane.size());
    for (size_t i = 0; i < plane.size(); ++i) {
        long v = std::lround(plane[i]);
        f.luma[i] = static_cast<uint8_t>(std::clamp(v, 0L, 255L));
    }
    return f;
}

}  // namespace wz
