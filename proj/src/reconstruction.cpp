#include "wz/reconstruction.hpp"

#include <string>

namespace wz {

double reconstruct_coeff(int32_t q, double y, double step) {
    if (q > 0) {
        double lo = q * step, hi = (q + 1) * step;
        if (y < lo) return lo;
        return y < hi ? y : hi;
    }
    if (q < 0) {
        double hi = q * step, lo = (q - 1) * step;
        if (y > hi) return hi;
        return y > lo ? y : lo;
    }
    // Doubled zero bin (-W, +W].
    if (y <= -step) return -step;
    return y <= step ? y : step;
}

double reconstruct_coeff_dc(int32_t q, double y, double step) {
    double lo = q * step, hi = (q + 1) * step;
    if (y < lo) return lo;
    return y < hi ? y : hi;
}

CoeffBands reconstruct_bands(const QuantizedBands& bins, const CoeffBands& si_bands) {
    if (bins.blocks_w != si_bands.blocks_w || bins.blocks_h != si_bands.blocks_h)
        throw InconsistentBands("decoded bins and SI bands describe different grids");
    size_t blocks = size_t(si_bands.block_count());
    CoeffBands out = si_bands;  // skipped bands keep SI coefficients
    for (const QuantizedBand& qb : bins.coded) {
        if (qb.bins.size() != blocks)
            throw InconsistentBands("band " + std::to_string(qb.band) +
                                    " length does not match the block grid");
        const std::vector<double>& y = si_bands.bands[qb.band];
        std::vector<double>& r = out.bands[qb.band];
        if (qb.band == 0) {
            for (size_t i = 0; i < blocks; ++i)
                r[i] = reconstruct_coeff_dc(qb.bins[i], y[i], qb.step);
        } else {
            for (size_t i = 0; i < blocks; ++i)
                r[i] = reconstruct_coeff(qb.bins[i], y[i], qb.step);
        }
    }
    return out;
}

Frame reconstruct_frame(const QuantizedBands& bins, const CoeffBands& si_bands,
                        int frame_index) {
    return bands_to_frame(reconstruct_bands(bins, si_bands), frame_index);
}

}  // namespace wz
