#include "wz/noise_model.hpp"

#include <cmath>

namespace wz {

LaplacianModel fit(std::span<const double> residual, int width, int height) {
    CoeffBands bands = plane_to_bands(residual, width, height);
    LaplacianModel model;
    constexpr double kVarFloor = 1e-6;
    for (int b = 0; b < 16; ++b) {
        const std::vector<double>& r = bands.bands[b];
        double sum = 0.0, sum2 = 0.0;
        for (double v : r) {
            sum += v;
            sum2 += v * v;
        }
        double n = double(r.size());
        double mean = sum / n;
        double var = std::max(sum2 / n - mean * mean, kVarFloor);
        model.band_var[b] = var;
        model.alpha_band[b] = std::sqrt(2.0 / var);
        model.alpha_coeff[b].resize(r.size());
        for (size_t i = 0; i < r.size(); ++i) {
            double r2 = r[i] * r[i];
            model.alpha_coeff[b][i] =
                r2 > var ? std::sqrt(2.0 / std::max(r2, kVarFloor)) : model.alpha_band[b];
        }
    }
    return model;
}

}  // namespace wz
