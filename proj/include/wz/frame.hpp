#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wz/errors.hpp"

namespace wz {

// One luma plane. Chroma is never coded; raw YUV containers carry neutral
// chroma on output and have their chroma skipped on input.
struct Frame {
    int width = 0;
    int height = 0;
    int index = 0;
    std::vector<uint8_t> luma;

    uint8_t at(int x, int y) const { return luma[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return luma[static_cast<size_t>(y) * width + x]; }
};

struct Fps {
    uint16_t num = 15;
    uint16_t den = 1;
    double value() const { return static_cast<double>(num) / den; }
};

struct Sequence {
    std::vector<Frame> frames;
    Fps fps;
};

enum class RawLayout : uint8_t {
    YOnly,   // packed 8-bit luma planes, one per frame
    Yuv420,  // planar 4:2:0; chroma planes are skipped / written as 0x80
};

// Parses raw frames from a byte buffer. Dimensions must be positive multiples
// of 16; a trailing partial frame raises TruncatedStream.
Sequence read_raw(std::span<const uint8_t> bytes, int width, int height, RawLayout layout);

// Serializes a sequence back to raw bytes in the given layout.
std::vector<uint8_t> write_raw(const Sequence& seq, RawLayout layout);

// Luma PSNR in dB against a 255 peak. Identical frames return +infinity.
double psnr(const Frame& a, const Frame& b);

// PSNR from a global mean-squared-error over all frames of both sequences.
double sequence_psnr(const Sequence& a, const Sequence& b);

}  // namespace wz
