#include "wz/softinput.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wz {

namespace {

constexpr double kLlrClamp = 25.0;

void check_ac_ctx(const PlaneContext& ctx) {
    if (ctx.band == 0) throw WrongBand("AC probability op on the DC band");
    if (ctx.total_bits < 2) throw WrongPlane("AC band needs a sign plane plus magnitudes");
}

}  // namespace

int partial_value(std::span<const uint8_t> bits, int bit, int total_bits) {
    if (bits.size() < size_t(total_bits))
        throw MissingPlane("have " + std::to_string(bits.size()) + " planes, need " +
                           std::to_string(total_bits));
    int x = 0;
    for (int i = bit + 1; i < total_bits; ++i)
        if (bits[i]) x += 1 << i;
    return x;
}

double laplace_mass(double lo, double hi, double y, double alpha) {
    if (!(lo < hi)) throw Error("laplace_mass needs lo < hi");
    // Differencing the CDF loses far-tail masses to rounding against 1.0, so
    // each branch sticks to products and sums of small exponentials.
    if (y <= lo) return 0.5 * std::exp(-alpha * (lo - y)) * -std::expm1(-alpha * (hi - lo));
    if (y >= hi) return 0.5 * std::exp(-alpha * (y - hi)) * -std::expm1(-alpha * (hi - lo));
    return 0.5 * (-std::expm1(-alpha * (y - lo)) - std::expm1(-alpha * (hi - y)));
}

std::pair<double, double> dc_bit_probabilities(const PlaneContext& ctx, size_t pos) {
    if (ctx.band != 0) throw WrongBand("DC probability op on an AC band");
    if (ctx.bit < 0 || ctx.bit >= ctx.total_bits) throw WrongPlane("bit outside the plane set");
    double y = ctx.si[pos];
    double a = ctx.alpha[pos];
    double w = ctx.step;
    double lo = ctx.partial_at(pos) * w;
    double mid = lo + double(1 << ctx.bit) * w;
    double hi = mid + double(1 << ctx.bit) * w;
    return {laplace_mass(lo, mid, y, a), laplace_mass(mid, hi, y, a)};
}

std::pair<double, double> ac_sign_probability(const PlaneContext& ctx, size_t pos) {
    check_ac_ctx(ctx);
    if (ctx.bit != ctx.total_bits - 1)
        throw WrongPlane("sign probabilities only apply to the leading plane");
    double yq = double(ctx.si_bins[pos]);
    double a = ctx.alpha[pos];
    int max_mag = (1 << (ctx.total_bits - 1)) - 1;
    double p0 = 0.0, p1 = 0.0;
    for (int i = 0; i <= max_mag; ++i) p0 += 0.5 * a * std::exp(-a * std::abs(i - yq));
    for (int i = 1; i <= max_mag; ++i) p1 += 0.5 * a * std::exp(-a * std::abs(-i - yq));
    return {p0, p1};
}

std::pair<double, double> ac_bit_probabilities(const PlaneContext& ctx, size_t pos, int sign) {
    check_ac_ctx(ctx);
    if (ctx.bit >= ctx.total_bits - 1)
        throw WrongPlane("magnitude probabilities do not apply to the sign plane");
    if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
    double y = ctx.si[pos];
    double a = ctx.alpha[pos];
    double w = ctx.step;
    double lo = ctx.partial_at(pos) * w;
    double mid = lo + double(1 << ctx.bit) * w;
    double hi = mid + double(1 << ctx.bit) * w;
    if (sign > 0) return {laplace_mass(lo, mid, y, a), laplace_mass(mid, hi, y, a)};
    // Negative sign mirrors the magnitude intervals onto the negative axis.
    return {laplace_mass(-mid, -lo, y, a), laplace_mass(-hi, -mid, y, a)};
}

double llr_from_probabilities(double p0, double p1) {
    double tot = p0 + p1;
    if (!(tot > 1e-300)) return 0.0;
    if (p1 <= 0.0) return kLlrClamp;
    if (p0 <= 0.0) return -kLlrClamp;
    return std::clamp(std::log(p0 / p1), -kLlrClamp, kLlrClamp);
}

std::vector<double> plane_llrs(const PlaneContext& ctx) {
    size_t n = ctx.si.size();
    std::vector<double> llr(n);
    if (ctx.band == 0) {
        for (size_t i = 0; i < n; ++i) {
            auto [p0, p1] = dc_bit_probabilities(ctx, i);
            llr[i] = llr_from_probabilities(p0, p1);
        }
    } else if (ctx.bit == ctx.total_bits - 1) {
        for (size_t i = 0; i < n; ++i) {
            auto [p0, p1] = ac_sign_probability(ctx, i);
            llr[i] = llr_from_probabilities(p0, p1);
        }
    } else {
        if (ctx.sign.size() != n) throw MissingPlane("sign plane required before magnitudes");
        for (size_t i = 0; i < n; ++i) {
            auto [p0, p1] = ac_bit_probabilities(ctx, i, ctx.sign[i]);
            llr[i] = llr_from_probabilities(p0, p1);
        }
    }
    return llr;
}

}  // namespace wz
