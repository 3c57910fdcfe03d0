#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/synthetic.hpp"
#include "wz/noise_model.hpp"

using namespace wz;

namespace {

// Builds a residual plane whose DCT bands hold exactly the given per-band
// sample list (orthonormal transform round-trips to fp precision).
std::vector<double> plane_from_band_samples(const std::vector<double>& samples, int blocks_side) {
    CoeffBands cb;
    cb.blocks_w = blocks_side;
    cb.blocks_h = blocks_side;
    for (auto& band : cb.bands) band = samples;
    return bands_to_plane(cb);
}

}  // namespace

TEST_CASE("band variance 2 fits alpha 1; equality does not trigger the per-coeff branch") {
    const int side = 8;  // 64 coefficients per band
    std::vector<double> samples(side * side);
    for (size_t i = 0; i < samples.size(); ++i)
        samples[i] = (i & 1) ? -std::sqrt(2.0) : std::sqrt(2.0);
    std::vector<double> plane = plane_from_band_samples(samples, side);
    LaplacianModel m = fit(plane, side * 4, side * 4);
    for (int b = 0; b < 16; ++b) {
        CHECK(m.band_var[b] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(m.alpha_band[b] == doctest::Approx(1.0).epsilon(1e-9));
        for (double a : m.alpha_coeff[b]) CHECK(a == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("zero residual caps every alpha at the variance floor") {
    std::vector<double> plane(size_t(32) * 32, 0.0);
    LaplacianModel m = fit(plane, 32, 32);
    double cap = std::sqrt(2.0 / 1e-6);
    for (int b = 0; b < 16; ++b) {
        CHECK(m.alpha_band[b] == doctest::Approx(cap).epsilon(1e-12));
        for (double a : m.alpha_coeff[b]) CHECK(a == doctest::Approx(cap).epsilon(1e-12));
    }
}

TEST_CASE("a hot coefficient in a variance-2 band gets its own alpha 0.5") {
    const int side = 8;
    std::vector<double> samples(side * side);
    // Two +-2*sqrt(2) outliers (r^2 = 8) and a balanced bulk chosen so the
    // band keeps mean 0 and variance exactly 2.
    samples[0] = 2.0 * std::sqrt(2.0);
    samples[1] = -2.0 * std::sqrt(2.0);
    double bulk = std::sqrt((2.0 * samples.size() - 16.0) / (samples.size() - 2.0));
    for (size_t i = 2; i < samples.size(); ++i) samples[i] = (i & 1) ? -bulk : bulk;
    std::vector<double> plane = plane_from_band_samples(samples, side);
    LaplacianModel m = fit(plane, side * 4, side * 4);
    for (int b = 0; b < 16; ++b) {
        CHECK(m.band_var[b] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(m.alpha_coeff[b][0] == doctest::Approx(0.5).epsilon(1e-9));  // sqrt(2/8)
        CHECK(m.alpha_coeff[b][1] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(m.alpha_coeff[b][2] == doctest::Approx(1.0).epsilon(1e-9));  // bulk below var
    }
}

TEST_CASE("per-coefficient alphas follow the energy trigger rule") {
    synth::Rng rng(3);
    std::vector<double> plane(size_t(64) * 64);
    for (double& v : plane) v = rng.uniform(-20.0, 20.0);
    LaplacianModel m = fit(plane, 64, 64);
    CoeffBands cb = plane_to_bands(plane, 64, 64);
    for (int b = 0; b < 16; ++b) {
        CHECK(m.alpha_band[b] > 0.0);
        for (size_t i = 0; i < m.alpha_coeff[b].size(); ++i) {
            double r2 = cb.bands[b][i] * cb.bands[b][i];
            if (r2 > m.band_var[b]) {
                CHECK(m.alpha_coeff[b][i] ==
                      doctest::Approx(std::sqrt(2.0 / r2)).epsilon(1e-12));
                CHECK(m.alpha_coeff[b][i] < m.alpha_band[b]);
            } else {
                CHECK(m.alpha_coeff[b][i] == m.alpha_band[b]);
            }
        }
    }
}

TEST_CASE("fit recovers the parameter of true Laplacian band samples within 5%") {
    const int side = 80;  // 6400 samples per band
    for (double alpha0 : {0.1, 1.0, 5.0}) {
        synth::Rng rng(uint64_t(alpha0 * 1000) + 7);
        std::vector<double> samples(size_t(side) * side);
        for (double& s : samples) s = rng.laplace(alpha0);
        std::vector<double> plane = plane_from_band_samples(samples, side);
        LaplacianModel m = fit(plane, side * 4, side * 4);
        for (int b = 0; b < 16; ++b)
            CHECK(m.alpha_band[b] == doctest::Approx(alpha0).epsilon(0.05));
    }
}

TEST_CASE("fit validates the residual dimensions") {
    std::vector<double> plane(100, 0.0);
    CHECK_THROWS_AS(fit(plane, 32, 32), DimensionMismatch);
}
