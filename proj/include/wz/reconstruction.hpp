#pragma once

#include "wz/quantizer.hpp"
#include "wz/transform.hpp"

namespace wz {

// Bin-constrained reconstruction: keep the SI coefficient when it already
// lies inside the decoded bin, otherwise clamp it to the nearest bin edge.
// The signed form covers positive, negative and (doubled) zero bins.
double reconstruct_coeff(int32_t q, double y, double step);

// DC bins are unsigned level indices; same clamp rule on [qW, (q+1)W).
double reconstruct_coeff_dc(int32_t q, double y, double step);

// Applies the rule across all coded bands, keeps SI coefficients for skipped
// bands, and returns the coefficient-domain result.
CoeffBands reconstruct_bands(const QuantizedBands& bins, const CoeffBands& si_bands);

// reconstruct_bands followed by the inverse transform and 8-bit emission.
Frame reconstruct_frame(const QuantizedBands& bins, const CoeffBands& si_bands,
                        int frame_index = 0);

}  // namespace wz
