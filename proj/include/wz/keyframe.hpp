#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wz/frame.hpp"

namespace wz {

// Key frames go through a pluggable intra codec; the archive names the codec
// by id so a decoder can refuse payloads it cannot interpret.
class IntraCodec {
public:
    virtual ~IntraCodec() = default;
    virtual uint8_t id() const = 0;
    virtual const char* name() const = 0;
    virtual std::vector<uint8_t> encode(const Frame& f, int qp) const = 0;
    virtual Frame decode(std::span<const uint8_t> payload, int width, int height,
                         int index) const = 0;
};

// Built-in transform intra codec: per 4x4 block DCT, uniform quantization
// with an H.264-style qp-to-step doubling every 6 qp, zig-zag run/level
// exp-Golomb entropy coding with an end-of-block symbol.
const IntraCodec& builtin_intra();

// Registry lookup by archive id; nullptr when unknown.
const IntraCodec* find_intra_codec(uint8_t id);

// Quantizer step for a qp in [0, 51]: 2^((qp-12)/6).
double intra_step(int qp);

// Key-frame qp paired with each WZ quantization matrix when the caller does
// not override it (coarse matrices pair with coarse key frames).
int default_key_qp(int quant_id);

// Convenience wrappers over the built-in codec.
std::vector<uint8_t> intra_encode(const Frame& f, int qp);
Frame intra_decode(std::span<const uint8_t> payload, int width, int height, int index = 0);

}  // namespace wz
