#include "wz/splitter.hpp"

#include <cmath>
#include <cstdlib>

namespace wz {

namespace {

void check_same_dims(const Frame& f1, const Frame& f2) {
    if (f1.width != f2.width || f1.height != f2.height)
        throw DimensionMismatch("activity metrics need equal frame sizes");
}

void check_block(const Frame& f, int block) {
    if (block <= 0 || f.width % block != 0 || f.height % block != 0)
        throw BadBlockSize("block size must tile the frame");
}

// L1 distance between the two sample histograms, normalized so that fully
// disjoint histograms score 1.
double histogram_l1(const uint8_t* a, const uint8_t* b, int w, int h, int stride) {
    int counts[256] = {0};  // a adds, b subtracts
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            ++counts[a[size_t(y) * stride + x]];
            --counts[b[size_t(y) * stride + x]];
        }
    long sum = 0;
    for (int v = 0; v < 256; ++v) sum += std::labs(counts[v]);
    return double(sum) / (2.0 * w * h);
}

double block_variance(const uint8_t* p, int block, int stride) {
    double s = 0.0, s2 = 0.0;
    for (int y = 0; y < block; ++y)
        for (int x = 0; x < block; ++x) {
            double v = p[size_t(y) * stride + x];
            s += v;
            s2 += v * v;
        }
    double n = double(block) * block;
    double mean = s / n;
    return s2 / n - mean * mean;
}

}  // namespace

double diff_of_histograms(const Frame& f1, const Frame& f2) {
    check_same_dims(f1, f2);
    return histogram_l1(f1.luma.data(), f2.luma.data(), f1.width, f1.height, f1.width);
}

double histogram_of_difference(const Frame& f1, const Frame& f2) {
    check_same_dims(f1, f2);
    constexpr int kDeviation = 2;  // |diff| beyond this counts as moving
    size_t moving = 0;
    for (size_t i = 0; i < f1.luma.size(); ++i)
        if (std::abs(int(f1.luma[i]) - int(f2.luma[i])) > kDeviation) ++moving;
    return double(moving) / double(f1.luma.size());
}

double block_histogram_difference(const Frame& f1, const Frame& f2, int block) {
    check_same_dims(f1, f2);
    check_block(f1, block);
    int bw = f1.width / block, bh = f1.height / block;
    double sum = 0.0;
    for (int by = 0; by < bh; ++by)
        for (int bx = 0; bx < bw; ++bx) {
            size_t off = size_t(by) * block * f1.width + size_t(bx) * block;
            sum += histogram_l1(f1.luma.data() + off, f2.luma.data() + off, block, block,
                                f1.width);
        }
    return sum / (double(bw) * bh);
}

double block_variance_difference(const Frame& f1, const Frame& f2, int block) {
    check_same_dims(f1, f2);
    check_block(f1, block);
    int bw = f1.width / block, bh = f1.height / block;
    double sum = 0.0;
    for (int by = 0; by < bh; ++by)
        for (int bx = 0; bx < bw; ++bx) {
            size_t off = size_t(by) * block * f1.width + size_t(bx) * block;
            double v1 = block_variance(f1.luma.data() + off, block, f1.width);
            double v2 = block_variance(f2.luma.data() + off, block, f1.width);
            sum += std::abs(v1 - v2) / (255.0 * 255.0);
        }
    return sum / (double(bw) * bh);
}

double motion_activity(const Frame& f1, const Frame& f2, const ActivityConfig& cfg) {
    double wsum = cfg.weights[0] + cfg.weights[1] + cfg.weights[2] + cfg.weights[3];
    if (std::abs(wsum - 1.0) > 1e-9) throw Error("activity weights must sum to 1");
    double a = 0.0;
    if (cfg.weights[0] > 0) a += cfg.weights[0] * diff_of_histograms(f1, f2);
    if (cfg.weights[1] > 0) a += cfg.weights[1] * histogram_of_difference(f1, f2);
    if (cfg.weights[2] > 0) a += cfg.weights[2] * block_histogram_difference(f1, f2, cfg.block_size);
    if (cfg.weights[3] > 0) a += cfg.weights[3] * block_variance_difference(f1, f2, cfg.block_size);
    return a;
}

GopPlan plan_gops(const Sequence& seq, const ActivityConfig& cfg) {
    if (seq.frames.empty()) throw EmptySequence("plan_gops on empty sequence");
    if (cfg.max_gop < 1 || cfg.max_gop > 8) throw Error("max_gop must be in [1, 8]");
    int n = static_cast<int>(seq.frames.size());
    GopPlan plan;
    plan.total = n;
    int i = 0;
    while (i < n) {
        int size = 1;
        double cum = 0.0;
        while (i + size < n && size < cfg.max_gop) {
            double a = motion_activity(seq.frames[i + size - 1], seq.frames[i + size], cfg);
            if (cum + a >= cfg.threshold) break;
            cum += a;
            ++size;
        }
        plan.sizes.push_back(size);
        i += size;
    }
    return plan;
}

GopPlan plan_fixed_gops(int frame_count, int gop) {
    if (frame_count <= 0) throw EmptySequence("plan_fixed_gops on empty sequence");
    if (gop < 1 || gop > 8) throw Error("fixed GOP length must be in [1, 8]");
    GopPlan plan;
    plan.total = frame_count;
    for (int i = 0; i < frame_count; i += gop)
        plan.sizes.push_back(std::min(gop, frame_count - i));
    return plan;
}

}  // namespace wz
