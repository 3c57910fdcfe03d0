#include "wz/keyframe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wz/bitio.hpp"
#include "wz/errors.hpp"
#include "wz/transform.hpp"

namespace wz {

double intra_step(int qp) {
    if (qp < 0 || qp > 51) throw Error("intra qp out of range [0, 51]");
    return std::pow(2.0, (qp - 12) / 6.0);
}

int default_key_qp(int quant_id) {
    static const int table[8] = {40, 38, 36, 34, 31, 28, 25, 22};
    if (quant_id < 1 || quant_id > 8) throw Error("quantization matrix id out of range [1, 8]");
    return table[quant_id - 1];
}

namespace {

constexpr uint32_t kEob = 16;  // run symbol one past the last zig-zag position

// Payload layout: one qp byte, then per 4x4 block (raster order) exp-Golomb
// (run, level) pairs over the zig-zag scan, each block closed by ue(16).
class BuiltinIntra final : public IntraCodec {
public:
    uint8_t id() const override { return 0; }
    const char* name() const override { return "builtin-dct"; }

    std::vector<uint8_t> encode(const Frame& f, int qp) const override {
        if (f.width <= 0 || f.height <= 0 || f.width % 4 || f.height % 4)
            throw BadDimensions("intra frame dimensions must be positive multiples of 4");
        const double step = intra_step(qp);
        const auto& zz = zigzag_order();
        BitWriter bw;
        Block4 px;
        for (int by = 0; by < f.height; by += 4)
            for (int bx = 0; bx < f.width; bx += 4) {
                for (int y = 0; y < 4; ++y)
                    for (int x = 0; x < 4; ++x)
                        px[y * 4 + x] = f.at(bx + x, by + y);
                Block4 co = dct4(px);
                int32_t level[16];
                int last = -1;
                for (int i = 0; i < 16; ++i) {
                    const auto& p = zz[i];
                    level[i] = static_cast<int32_t>(std::lround(co[p.first * 4 + p.second] / step));
                    if (level[i]) last = i;
                }
                int run = 0;
                for (int i = 0; i <= last; ++i) {
                    if (!level[i]) {
                        ++run;
                        continue;
                    }
                    bw.put_ue(static_cast<uint32_t>(run));
                    bw.put_se(level[i]);
                    run = 0;
                }
                bw.put_ue(kEob);
            }
        std::vector<uint8_t> payload;
        payload.reserve(1 + bw.bit_count() / 8 + 1);
        payload.push_back(static_cast<uint8_t>(qp));
        auto bits = bw.take();
        payload.insert(payload.end(), bits.begin(), bits.end());
        return payload;
    }

    Frame decode(std::span<const uint8_t> payload, int width, int height,
                 int index) const override {
        if (width <= 0 || height <= 0 || width % 4 || height % 4)
            throw BadDimensions("intra frame dimensions must be positive multiples of 4");
        if (payload.empty()) throw CorruptPayload("empty intra payload");
        const int qp = payload[0];
        if (qp > 51) throw CorruptPayload("intra payload qp out of range");
        const double step = intra_step(qp);
        const auto& zz = zigzag_order();
        Frame f;
        f.width = width;
        f.height = height;
        f.index = index;
        f.luma.assign(static_cast<size_t>(width) * height, 0);
        BitReader br(payload.subspan(1));
        Block4 co;
        try {
            for (int by = 0; by < height; by += 4)
                for (int bx = 0; bx < width; bx += 4) {
                    co.fill(0.0);
                    int pos = 0;
                    for (;;) {
                        uint32_t run = br.get_ue();
                        if (run == kEob) break;
                        if (run > 15 || pos + static_cast<int>(run) > 15)
                            throw CorruptPayload("intra run past end of block");
                        pos += static_cast<int>(run);
                        int32_t level = br.get_se();
                        if (level == 0) throw CorruptPayload("intra zero level");
                        const auto& p = zz[pos];
                        co[p.first * 4 + p.second] = level * step;
                        ++pos;
                    }
                    Block4 px = idct4(co);
                    for (int y = 0; y < 4; ++y)
                        for (int x = 0; x < 4; ++x) {
                            long v = std::lround(px[y * 4 + x]);
                            f.luma[static_cast<size_t>(by + y) * width + bx + x] =
                                static_cast<uint8_t>(std::clamp(v, 0L, 255L));
                        }
                }
        } catch (const std::out_of_range&) {
            throw CorruptPayload("intra payload truncated");
        }
        if (br.bits_left() >= 8) throw CorruptPayload("intra payload has trailing bytes");
        return f;
    }
};

const BuiltinIntra kBuiltin;

}  // namespace

const IntraCodec& builtin_intra() { return kBuiltin; }

const IntraCodec* find_intra_codec(uint8_t id) { return id == 0 ? &kBuiltin : nullptr; }

std::vector<uint8_t> intra_encode(const Frame& f, int qp) { return kBuiltin.encode(f, qp); }

Frame intra_decode(std::span<const uint8_t> payload, int width, int height, int index) {
    return kBuiltin.decode(payload, width, height, index);
}

}  // namespace wz
