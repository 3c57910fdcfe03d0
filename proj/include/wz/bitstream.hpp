#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wz/frame.hpp"

namespace wz {

// One bit plane's stored syndrome material. `packed` holds the accumulated
// syndrome bits regrouped into ladder-chunk order (step 0 first, ascending
// accumulator index inside a step), packed MSB-first and zero-padded to a
// byte; the archive always stores every chunk so feedback can be simulated.
struct PlaneRecord {
    uint8_t crc = 0;
    uint16_t chunk_count = 0;
    std::vector<uint8_t> packed;
};

// One coded band of one WZ frame. The band index is implied by the header's
// quantization matrix and never serialized; `range` is only serialized for AC
// bands (DC spans the fixed [0, 1024) interval).
struct BandRecord {
    int band = 0;
    uint16_t range = 0;
    std::vector<PlaneRecord> planes;  // transmission order, MSB (or sign) first
};

struct WzFrameRecord {
    std::vector<BandRecord> bands;  // ascending band index over the coded set
};

struct GopRecord {
    int size = 0;  // frames in the GOP, key frame included
    std::vector<uint8_t> key_payload;
    std::vector<WzFrameRecord> wz;  // display order
};

struct BitstreamHeader {
    uint16_t width = 0;
    uint16_t height = 0;
    Fps fps;
    uint32_t frame_count = 0;
    uint8_t quant_id = 0;
    uint64_t seed = 0;
    uint8_t dv = 0;
    uint8_t key_codec = 0;
    uint8_t key_qp = 0;
};

struct Bitstream {
    BitstreamHeader header;
    std::vector<GopRecord> gops;
};

constexpr uint8_t kBitstreamVersion = 1;

// Little-endian archive: "WZC1" magic, version, header fields, then one
// record per GOP. serialize→parse is an identity; parse throws
// MalformedBitstream on any structural violation.
std::vector<uint8_t> serialize(const Bitstream& bs);
Bitstream parse(std::span<const uint8_t> bytes);

}  // namespace wz
