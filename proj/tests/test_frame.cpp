#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "support/synthetic.hpp"
#include "wz/frame.hpp"

using namespace wz;

TEST_CASE("read_raw splits packed luma planes into indexed frames") {
    std::vector<uint8_t> bytes(2 * 16 * 16);
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = uint8_t(i * 7);
    Sequence seq = read_raw(bytes, 16, 16, RawLayout::YOnly);
    REQUIRE(seq.frames.size() == 2);
    CHECK(seq.frames[0].index == 0);
    CHECK(seq.frames[1].index == 1);
    CHECK(seq.frames[0].width == 16);
    CHECK(seq.frames[0].height == 16);
    CHECK(seq.frames[0].luma[5] == uint8_t(35));
    CHECK(seq.frames[1].luma[0] == bytes[256]);
}

TEST_CASE("yuv420 input skips chroma, output refills it as 0x80") {
    Sequence seq;
    seq.frames.push_back(synth::random_frame(16, 32, 1));
    seq.frames.push_back(synth::random_frame(16, 32, 2));
    std::vector<uint8_t> bytes = write_raw(seq, RawLayout::Yuv420);
    REQUIRE(bytes.size() == 2 * (16 * 32 * 3 / 2));
    for (size_t i = 16 * 32; i < 16 * 32 * 3 / 2; ++i) CHECK(bytes[i] == 0x80);

    Sequence back = read_raw(bytes, 16, 32, RawLayout::Yuv420);
    REQUIRE(back.frames.size() == 2);
    CHECK(back.frames[0].luma == seq.frames[0].luma);
    CHECK(back.frames[1].luma == seq.frames[1].luma);
}

TEST_CASE("y-only round trip is the identity") {
    Sequence seq;
    for (int i = 0; i < 3; ++i) seq.frames.push_back(synth::random_frame(32, 16, 10 + i));
    Sequence back = read_raw(write_raw(seq, RawLayout::YOnly), 32, 16, RawLayout::YOnly);
    REQUIRE(back.frames.size() == seq.frames.size());
    for (size_t i = 0; i < seq.frames.size(); ++i)
        CHECK(back.frames[i].luma == seq.frames[i].luma);
}

TEST_CASE("partial trailing frame raises TruncatedStream") {
    std::vector<uint8_t> bytes(16 * 16 + 1, 0);
    CHECK_THROWS_AS(read_raw(bytes, 16, 16, RawLayout::YOnly), TruncatedStream);
    std::vector<uint8_t> yuv(16 * 16 * 3 / 2 - 1, 0);
    CHECK_THROWS_AS(read_raw(yuv, 16, 16, RawLayout::Yuv420), TruncatedStream);
}

TEST_CASE("dimensions must be positive multiples of 16") {
    std::vector<uint8_t> bytes(16 * 16, 0);
    CHECK_THROWS_AS(read_raw(bytes, 12, 16, RawLayout::YOnly), BadDimensions);
    CHECK_THROWS_AS(read_raw(bytes, 16, 20, RawLayout::YOnly), BadDimensions);
    CHECK_THROWS_AS(read_raw(bytes, 0, 16, RawLayout::YOnly), BadDimensions);
    CHECK_THROWS_AS(read_raw(bytes, 16, -16, RawLayout::YOnly), BadDimensions);
}

TEST_CASE("psnr: identical frames are +infinity, off-by-one everywhere is 48.13 dB") {
    Frame a = synth::random_frame(16, 16, 3);
    CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());

    Frame b = a;
    for (auto& p : b.luma) p = uint8_t(p < 255 ? p + 1 : p - 1);
    double v = psnr(a, b);
    CHECK(v == doctest::Approx(10.0 * std::log10(255.0 * 255.0)).epsilon(1e-9));
    CHECK(v == doctest::Approx(48.1308).epsilon(1e-4));
    CHECK(psnr(b, a) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("psnr rejects mismatched dimensions") {
    Frame a = synth::random_frame(16, 16, 0);
    Frame b = synth::random_frame(16, 32, 0);
    CHECK_THROWS_AS(psnr(a, b), DimensionMismatch);
}

TEST_CASE("sequence_psnr pools squared error over all frames") {
    Sequence a, b;
    a.frames.push_back(synth::random_frame(16, 16, 1));
    a.frames.push_back(synth::random_frame(16, 16, 2));
    b.frames = a.frames;
    // First frame identical, second +2 everywhere: global MSE = (0 + 4) / 2.
    for (auto& p : b.frames[1].luma) p = uint8_t(p < 254 ? p + 2 : p - 2);
    double v = sequence_psnr(a, b);
    CHECK(v == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 2.0)).epsilon(1e-9));

    Sequence c;
    c.frames.push_back(a.frames[0]);
    CHECK_THROWS_AS(sequence_psnr(a, c), DimensionMismatch);
    Sequence e1, e2;
    CHECK_THROWS_AS(sequence_psnr(e1, e2), EmptySequence);
}
