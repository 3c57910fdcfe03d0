#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wz/errors.hpp"

namespace wz {

// Everything needed to turn one bit plane of one band into per-position
// probabilities: the SI coefficients, the Laplacian widths, and the outcome
// of the planes already decoded (partial magnitudes and, for AC, signs).
struct PlaneContext {
    int band = 0;        // 0 = DC
    int bit = 0;         // significance of this plane: 0 = LSB .. L-1 = MSB
    int total_bits = 0;  // L = log2(levels); for AC, bit L-1 is the sign
    double step = 0.0;   // quantizer step W

    std::span<const double> si;        // SI DCT coefficient per position
    std::span<const int32_t> si_bins;  // SI quantized bin per position (sign plane)
    std::span<const double> alpha;     // Laplacian parameter per position

    // State decoded so far. `partial` is the per-position partial value from
    // higher planes (magnitude-only for AC); empty means all zero. `sign` is
    // +1/-1 per position once the AC sign plane is decoded.
    std::span<const int32_t> partial;
    std::span<const int8_t> sign;

    int32_t partial_at(size_t pos) const { return partial.empty() ? 0 : partial[pos]; }
};

// Partial value reassembled from already-decoded higher planes:
// sum of bits[i] << i for i in (bit, total_bits). bits is indexed by
// significance; entries at or below `bit` are ignored.
int partial_value(std::span<const uint8_t> bits, int bit, int total_bits);

// Mass of the Laplacian density centered at y over [lo, hi), by closed-form
// CDF difference.
double laplace_mass(double lo, double hi, double y, double alpha);

// Unnormalized probabilities of the current bit being 0 / 1. The DC form
// integrates over the two candidate coefficient intervals implied by the
// partial value; the AC magnitude form mirrors those intervals through the
// decoded sign; the AC sign form sums the bin-domain Laplacian against the
// quantized SI bin.
std::pair<double, double> dc_bit_probabilities(const PlaneContext& ctx, size_t pos);
std::pair<double, double> ac_sign_probability(const PlaneContext& ctx, size_t pos);
std::pair<double, double> ac_bit_probabilities(const PlaneContext& ctx, size_t pos, int sign);

// ln(P0/P1) with the positive-means-zero convention, clamped to +/-25;
// returns 0 when both masses vanish (no information).
double llr_from_probabilities(double p0, double p1);

// Applies the appropriate per-position op across the whole plane.
std::vector<double> plane_llrs(const PlaneContext& ctx);

}  // namespace wz
