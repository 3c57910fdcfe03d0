#pragma once

#include <array>
#include <span>
#include <vector>

#include "wz/transform.hpp"

namespace wz {

// Laplacian correlation-noise parameters fitted from the motion-compensated
// reference residual, at band granularity and refined per coefficient where
// the local residual energy exceeds the band average.
struct LaplacianModel {
    std::array<double, 16> alpha_band{};
    std::array<double, 16> band_var{};
    std::array<std::vector<double>, 16> alpha_coeff;
};

// Which granularity the soft-input stage consumes.
enum class AlphaMode : uint8_t { Band, Coeff };

// Transforms the residual plane and estimates alpha = sqrt(2 / variance) per
// band; coefficients whose squared residual exceeds the band variance get
// their own (smaller) alpha. Variances below 1e-6 are floored, capping alpha
// near 1414.
LaplacianModel fit(std::span<const double> residual, int width, int height);

}  // namespace wz
