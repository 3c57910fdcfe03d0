#include "wz/frame.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace wz {

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0 || width % 16 != 0 || height % 16 != 0)
        throw BadDimensions("frame dimensions must be positive multiples of 16, got " +
                            std::to_string(width) + "x" + std::to_string(height));
}

size_t frame_bytes(int width, int height, RawLayout layout) {
    size_t luma = static_cast<size_t>(width) * height;
    return layout == RawLayout::Yuv420 ? luma + luma / 2 : luma;
}

}  // namespace

Sequence read_raw(std::span<const uint8_t> bytes, int width, int height, RawLayout layout) {
    check_dims(width, height);
    size_t stride = frame_bytes(width, height, layout);
    if (bytes.size() % stride != 0)
        throw TruncatedStream("raw stream of " + std::to_string(bytes.size()) +
                              " bytes is not a whole number of " + std::to_string(stride) +
                              "-byte frames");
    size_t luma = static_cast<size_t>(width) * height;
    Sequence seq;
    seq.frames.resize(bytes.size() / stride);
    for (size_t i = 0; i < seq.frames.size(); ++i) {
        Frame& f = seq.frames[i];
        f.width = width;
        f.height = height;
        f.index = static_cast<int>(i);
        f.luma.assign(bytes.begin() + i * stride, bytes.begin() + i * stride + luma);
    }
    return seq;
}

std::vector<uint8_t> write_raw(const Sequence& seq, RawLayout layout) {
    std::vector<uint8_t> out;
    if (seq.frames.empty()) return out;
    int width = seq.frames[0].width;
    int height = seq.frames[0].height;
    size_t stride = frame_bytes(width, height, layout);
    out.reserve(stride * seq.frames.size());
    for (const Frame& f : seq.frames) {
        if (f.width != width || f.height != height)
            throw DimensionMismatch("sequence mixes frame sizes");
        out.insert(out.end(), f.luma.begin(), f.luma.end());
        if (layout == RawLayout::Yuv420)
            out.insert(out.end(), f.luma.size() / 2, uint8_t{0x80});  // neutral chroma
    }
    return out;
}

double psnr(const Frame& a, const Frame& b) {
    if (a.width != b.width || a.height != b.height)
        throw DimensionMismatch("psnr needs equal frame sizes");
    uint64_t sse = 0;
    for (size_t i = 0; i < a.luma.size(); ++i) {
        int d = int(a.luma[i]) - int(b.luma[i]);
        sse += uint64_t(d * d);
    }
    if (sse == 0) return std::numeric_limits<double>::infinity();
    double mse = double(sse) / double(a.luma.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double sequence_psnr(const Sequence& a, const Sequence& b) {
    if (a.frames.size() != b.frames.size())
        throw DimensionMismatch("sequence_psnr needs equal frame counts");
    if (a.frames.empty()) throw EmptySequence("sequence_psnr on empty sequences");
    uint64_t sse = 0;
    uint64_t samples = 0;
    for (size_t i = 0; i < a.frames.size(); ++i) {
        const Frame& x = a.frames[i];
        const Frame& y = b.frames[i];
        if (x.width != y.width || x.height != y.height)
            throw DimensionMismatch("sequence_psnr needs equal frame sizes");
        for (size_t j = 0; j < x.luma.size(); ++j) {
            int d = int(x.luma[j]) - int(y.luma[j]);
            sse += uint64_t(d * d);
        }
        samples += x.luma.size();
    }
    if (sse == 0) return std::numeric_limits<double>::infinity();
    double mse = double(sse) / double(samples);
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace wz
