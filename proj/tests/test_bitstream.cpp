#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "support/synthetic.hpp"
#include "wz/bitstream.hpp"
#include "wz/keyframe.hpp"
#include "wz/ldpca.hpp"
#include "wz/quantizer.hpp"

using namespace wz;

namespace {

// 16x16 frames: n = 16 coefficients per band, so planes pack into 2 bytes
// and the ladder has 16 single-bit chunks.
Bitstream sample_stream() {
    Bitstream bs;
    bs.header.width = 16;
    bs.header.height = 16;
    bs.header.fps = {30, 1};
    bs.header.frame_count = 3;
    bs.header.quant_id = 1;  // bands 0 (4 planes), 1 (3), 4 (3)
    bs.header.seed = 0xDEADBEEFCAFEF00Dull;
    bs.header.dv = 3;
    bs.header.key_codec = builtin_intra().id();
    bs.header.key_qp = 31;

    synth::Rng rng(1);
    auto make_wz = [&] {
        WzFrameRecord wf;
        for (int band : {0, 1, 4}) {
            BandRecord br;
            br.band = band;
            if (band != 0) br.range = uint16_t(rng.range(1, 900));
            int planes = band == 0 ? 4 : 3;
            for (int p = 0; p < planes; ++p) {
                PlaneRecord pr;
                pr.crc = uint8_t(rng.next());
                pr.chunk_count = 16;
                pr.packed = {uint8_t(rng.next()), uint8_t(rng.next())};
                br.planes.push_back(std::move(pr));
            }
            wf.bands.push_back(std::move(br));
        }
        return wf;
    };

    GopRecord g1;
    g1.size = 2;
    g1.key_payload = {10, 20, 30, 40, 50};
    g1.wz.push_back(make_wz());
    bs.gops.push_back(std::move(g1));

    GopRecord g2;
    g2.size = 1;
    g2.key_payload = {1, 2, 3};
    bs.gops.push_back(std::move(g2));
    return bs;
}

// Fixed offsets in the serialized sample (29-byte header, 5-byte key).
constexpr size_t kGop0Size = 29;
constexpr size_t kGop0KeyLen = 30;
constexpr size_t kWzStart = 34 + 5;              // first plane record of band 0
constexpr size_t kPlane0Chunks = kWzStart + 1;   // u16 after the crc byte
constexpr size_t kBand1Range = kWzStart + 4 * 5; // u16 after four DC plane records

std::vector<uint8_t> patched(std::vector<uint8_t> bytes, size_t at, uint8_t v) {
    bytes[at] = v;
    return bytes;
}

}  // namespace

TEST_CASE("serialize and parse are inverse") {
    Bitstream bs = sample_stream();
    std::vector<uint8_t> bytes = serialize(bs);
    Bitstream back = parse(bytes);

    CHECK(back.header.width == bs.header.width);
    CHECK(back.header.height == bs.header.height);
    CHECK(back.header.fps.num == bs.header.fps.num);
    CHECK(back.header.fps.den == bs.header.fps.den);
    CHECK(back.header.frame_count == bs.header.frame_count);
    CHECK(back.header.quant_id == bs.header.quant_id);
    CHECK(back.header.seed == bs.header.seed);
    CHECK(back.header.dv == bs.header.dv);
    CHECK(back.header.key_codec == bs.header.key_codec);
    CHECK(back.header.key_qp == bs.header.key_qp);

    REQUIRE(back.gops.size() == 2);
    CHECK(back.gops[0].size == 2);
    CHECK(back.gops[0].key_payload == bs.gops[0].key_payload);
    CHECK(back.gops[1].size == 1);
    CHECK(back.gops[1].key_payload == bs.gops[1].key_payload);
    REQUIRE(back.gops[0].wz.size() == 1);
    const WzFrameRecord& w0 = back.gops[0].wz[0];
    const WzFrameRecord& s0 = bs.gops[0].wz[0];
    REQUIRE(w0.bands.size() == 3);
    for (size_t b = 0; b < 3; ++b) {
        CHECK(w0.bands[b].band == s0.bands[b].band);
        if (b > 0) CHECK(w0.bands[b].range == s0.bands[b].range);
        REQUIRE(w0.bands[b].planes.size() == s0.bands[b].planes.size());
        for (size_t p = 0; p < w0.bands[b].planes.size(); ++p) {
            CHECK(w0.bands[b].planes[p].crc == s0.bands[b].planes[p].crc);
            CHECK(w0.bands[b].planes[p].chunk_count == s0.bands[b].planes[p].chunk_count);
            CHECK(w0.bands[b].planes[p].packed == s0.bands[b].planes[p].packed);
        }
    }

    // Byte-identical re-serialization.
    CHECK(serialize(back) == bytes);
}

TEST_CASE("parse rejects container-level damage") {
    std::vector<uint8_t> bytes = serialize(sample_stream());

    CHECK_THROWS_AS(parse(patched(bytes, 0, 'X')), MalformedBitstream);   // magic
    CHECK_THROWS_AS(parse(patched(bytes, 4, 9)), MalformedBitstream);     // version
    CHECK_THROWS_AS(parse(patched(bytes, 5, 20)), MalformedBitstream);    // width % 16
    CHECK_THROWS_AS(parse(patched(patched(bytes, 7, 0), 8, 0)), MalformedBitstream);
    CHECK_THROWS_AS(parse(patched(patched(bytes, 9, 0), 10, 0)), MalformedBitstream);  // fps 0
    CHECK_THROWS_AS(parse(patched(bytes, 17, 9)), MalformedBitstream);    // quant id
    CHECK_THROWS_AS(parse(patched(bytes, 17, 0)), MalformedBitstream);
    CHECK_THROWS_AS(parse(patched(bytes, 26, 1)), MalformedBitstream);    // dv
    CHECK_THROWS_AS(parse(patched(bytes, 27, 0xEE)), MalformedBitstream); // codec id
    CHECK_THROWS_AS(parse(patched(bytes, 28, 52)), MalformedBitstream);   // key qp

    std::vector<uint8_t> zero_count = bytes;
    for (size_t i = 13; i < 17; ++i) zero_count[i] = 0;  // frame_count = 0
    CHECK_THROWS_AS(parse(zero_count), MalformedBitstream);

    std::vector<uint8_t> truncated(bytes.begin(), bytes.end() - 1);
    CHECK_THROWS_AS(parse(truncated), MalformedBitstream);
    std::vector<uint8_t> short_header(bytes.begin(), bytes.begin() + 20);
    CHECK_THROWS_AS(parse(short_header), MalformedBitstream);

    std::vector<uint8_t> trailing = bytes;
    trailing.push_back(0);
    CHECK_THROWS_AS(parse(trailing), MalformedBitstream);
}

TEST_CASE("parse rejects structural gop and plane damage") {
    std::vector<uint8_t> bytes = serialize(sample_stream());

    CHECK_THROWS_AS(parse(patched(bytes, kGop0Size, 0)), MalformedBitstream);    // empty gop
    CHECK_THROWS_AS(parse(patched(bytes, kGop0Size, 200)), MalformedBitstream);  // over count
    CHECK_THROWS_AS(parse(patched(bytes, kGop0KeyLen + 3, 0x7F)), MalformedBitstream);  // key len

    // Stored chunk count disagreeing with the ladder for 256-pixel frames.
    CHECK_THROWS_AS(parse(patched(bytes, kPlane0Chunks, 15)), MalformedBitstream);

    // AC range of zero.
    std::vector<uint8_t> zrange = bytes;
    zrange[kBand1Range] = 0;
    zrange[kBand1Range + 1] = 0;
    CHECK_THROWS_AS(parse(zrange), MalformedBitstream);
}

TEST_CASE("serialize rejects inconsistent producer records") {
    Bitstream bs = sample_stream();
    bs.gops[0].size = 0;
    CHECK_THROWS_AS(serialize(bs), Error);

    bs = sample_stream();
    bs.gops[0].wz.clear();  // size 2 needs one WZ record
    CHECK_THROWS_AS(serialize(bs), Error);

    bs = sample_stream();
    bs.gops[0].wz[0].bands[1].band = 2;  // not in the quant-1 coded set
    CHECK_THROWS_AS(serialize(bs), Error);

    bs = sample_stream();
    bs.gops[0].wz[0].bands[0].planes.pop_back();
    CHECK_THROWS_AS(serialize(bs), Error);

    bs = sample_stream();
    bs.gops[0].wz[0].bands[0].planes[0].packed.push_back(0);
    CHECK_THROWS_AS(serialize(bs), Error);

    bs = sample_stream();
    bs.header.quant_id = 11;
    CHECK_THROWS_AS(serialize(bs), Error);
}

TEST_CASE("every quantization matrix round-trips its band layout") {
    for (int q = 1; q <= 8; ++q) {
        Bitstream bs;
        bs.header.width = 16;
        bs.header.height = 16;
        bs.header.fps = {15, 1};
        bs.header.frame_count = 2;
        bs.header.quant_id = uint8_t(q);
        bs.header.seed = 7;
        bs.header.dv = 3;
        bs.header.key_codec = builtin_intra().id();
        bs.header.key_qp = 20;

        GopRecord gop;
        gop.size = 2;
        gop.key_payload = {9};
        WzFrameRecord wf;
        const QuantMatrix& m = quant_matrix(q);
        for (int band = 0; band < 16; ++band) {
            if (m.levels[band] == 0) continue;
            BandRecord br;
            br.band = band;
            if (band != 0) br.range = 100;
            for (int p = 0; p < plane_count(m.levels[band]); ++p) {
                PlaneRecord pr;
                pr.crc = uint8_t(band * 16 + p);
                pr.chunk_count = 16;
                pr.packed = {uint8_t(p), uint8_t(band)};
                br.planes.push_back(std::move(pr));
            }
            wf.bands.push_back(std::move(br));
        }
        gop.wz.push_back(std::move(wf));
        bs.gops.push_back(std::move(gop));

        Bitstream back = parse(serialize(bs));
        REQUIRE(back.gops.size() == 1);
        CHECK(back.gops[0].wz[0].bands.size() == bs.gops[0].wz[0].bands.size());
        CHECK(serialize(back) == serialize(bs));
    }
}
