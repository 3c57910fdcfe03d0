#include "wz/bitstream.hpp"

#include <cstring>
#include <string>

#include "wz/errors.hpp"
#include "wz/keyframe.hpp"
#include "wz/ldpca.hpp"
#include "wz/quantizer.hpp"

namespace wz {

namespace {

const char kMagic[4] = {'W', 'Z', 'C', '1'};

void put8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }

void put16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

class Cursor {
public:
    explicit Cursor(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    const uint8_t* take(size_t count) {
        if (bytes_.size() - pos_ < count) throw MalformedBitstream("archive truncated");
        const uint8_t* p = bytes_.data() + pos_;
        pos_ += count;
        return p;
    }

    uint8_t u8() { return *take(1); }

    uint16_t u16() {
        const uint8_t* p = take(2);
        return static_cast<uint16_t>(p[0] | (p[1] << 8));
    }

    uint32_t u32() {
        const uint8_t* p = take(4);
        return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
               (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
    }

    uint64_t u64() {
        uint64_t v = 0;
        const uint8_t* p = take(8);
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
        return v;
    }

    size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

// Bands the header's matrix codes, ascending, paired with their plane counts.
std::vector<std::pair<int, int>> coded_layout(int quant_id) {
    const QuantMatrix& m = quant_matrix(quant_id);
    std::vector<std::pair<int, int>> layout;
    for (int band = 0; band < 16; ++band)
        if (m.levels[band] > 0) layout.emplace_back(band, plane_count(m.levels[band]));
    return layout;
}

}  // namespace

std::vector<uint8_t> serialize(const Bitstream& bs) {
    const BitstreamHeader& h = bs.header;
    if (h.quant_id < 1 || h.quant_id > 8) throw Error("archive quant matrix id out of range");
    const auto layout = coded_layout(h.quant_id);
    const int n = (h.width / 4) * (h.height / 4);
    const size_t plane_bytes = (static_cast<size_t>(n) + 7) / 8;

    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put8(out, kBitstreamVersion);
    put16(out, h.width);
    put16(out, h.height);
    put16(out, h.fps.num);
    put16(out, h.fps.den);
    put32(out, h.frame_count);
    put8(out, h.quant_id);
    put64(out, h.seed);
    put8(out, h.dv);
    put8(out, h.key_codec);
    put8(out, h.key_qp);

    for (const GopRecord& gop : bs.gops) {
        if (gop.size < 1 || gop.size > 255) throw Error("gop size out of range");
        if (gop.wz.size() != static_cast<size_t>(gop.size) - 1)
            throw Error("gop record holds wrong WZ frame count");
        put8(out, static_cast<uint8_t>(gop.size));
        put32(out, static_cast<uint32_t>(gop.key_payload.size()));
        out.insert(out.end(), gop.key_payload.begin(), gop.key_payload.end());
        for (const WzFrameRecord& wf : gop.wz) {
            if (wf.bands.size() != layout.size())
                throw Error("WZ record band count does not match the matrix");
            for (size_t b = 0; b < layout.size(); ++b) {
                const BandRecord& band = wf.bands[b];
                if (band.band != layout[b].first) throw Error("WZ record band order mismatch");
                if (band.planes.size() != static_cast<size_t>(layout[b].second))
                    throw Error("band record plane count does not match the matrix");
                if (band.band != 0) put16(out, band.range);
                for (const PlaneRecord& plane : band.planes) {
                    if (plane.packed.size() != plane_bytes)
                        throw Error("plane record payload size mismatch");
                    put8(out, plane.crc);
                    put16(out, plane.chunk_count);
                    out.insert(out.end(), plane.packed.begin(), plane.packed.end());
                }
            }
        }
    }
    return out;
}

Bitstream parse(std::span<const uint8_t> bytes) {
    Cursor c(bytes);
    const uint8_t* magic = c.take(4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw MalformedBitstream("bad magic");
    if (c.u8() != kBitstreamVersion) throw MalformedBitstream("unsupported archive version");

    Bitstream bs;
    BitstreamHeader& h = bs.header;
    h.width = c.u16();
    h.height = c.u16();
    h.fps.num = c.u16();
    h.fps.den = c.u16();
    h.frame_count = c.u32();
    h.quant_id = c.u8();
    h.seed = c.u64();
    h.dv = c.u8();
    h.key_codec = c.u8();
    h.key_qp = c.u8();

    if (h.width == 0 || h.height == 0 || h.width % 16 || h.height % 16)
        throw MalformedBitstream("frame dimensions must be positive multiples of 16");
    if (h.fps.num == 0 || h.fps.den == 0) throw MalformedBitstream("zero fps field");
    if (h.frame_count == 0) throw MalformedBitstream("empty archive");
    if (h.quant_id < 1 || h.quant_id > 8)
        throw MalformedBitstream("quantization matrix id out of range");
    if (h.dv < 2 || h.dv > 8) throw MalformedBitstream("variable degree out of range");
    if (!find_intra_codec(h.key_codec)) throw MalformedBitstream("unknown key-frame codec id");
    if (h.key_qp > 51) throw MalformedBitstream("key-frame qp out of range");

    const auto layout = coded_layout(h.quant_id);
    const int n = (h.width / 4) * (h.height / 4);
    const size_t plane_bytes = (static_cast<size_t>(n) + 7) / 8;
    const int chunks = ladder_chunk_count(n);

    uint64_t covered = 0;
    while (covered < h.frame_count) {
        GopRecord gop;
        gop.size = c.u8();
        if (gop.size < 1) throw MalformedBitstream("zero-length gop");
        if (covered + static_cast<uint64_t>(gop.size) > h.frame_count)
            throw MalformedBitstream("gop sizes exceed the frame count");
        uint32_t key_len = c.u32();
        const uint8_t* key = c.take(key_len);
        gop.key_payload.assign(key, key + key_len);
        gop.wz.resize(static_cast<size_t>(gop.size) - 1);
        for (WzFrameRecord& wf : gop.wz) {
            wf.bands.resize(layout.size());
            for (size_t b = 0; b < layout.size(); ++b) {
                BandRecord& band = wf.bands[b];
                band.band = layout[b].first;
                if (band.band != 0) {
                    band.range = c.u16();
                    if (band.range == 0) throw MalformedBitstream("zero AC dynamic range");
                }
                band.planes.resize(static_cast<size_t>(layout[b].second));
                for (PlaneRecord& plane : band.planes) {
                    plane.crc = c.u8();
                    plane.chunk_count = c.u16();
                    if (plane.chunk_count != chunks)
                        throw MalformedBitstream("stored chunk count does not match the ladder");
                    const uint8_t* p = c.take(plane_bytes);
                    plane.packed.assign(p, p + plane_bytes);
                }
            }
        }
        covered += static_cast<uint64_t>(gop.size);
        bs.gops.push_back(std::move(gop));
    }
    if (c.remaining() != 0) throw MalformedBitstream("trailing bytes after the last gop");
    return bs;
}

}  // namespace wz
