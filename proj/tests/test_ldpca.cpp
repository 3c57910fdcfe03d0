#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <vector>

#include "support/synthetic.hpp"
#include "wz/ldpca.hpp"

using namespace wz;

namespace {

std::vector<uint8_t> ascii_bits(const char* s) {
    std::vector<uint8_t> bits;
    for (const char* p = s; *p; ++p)
        for (int b = 7; b >= 0; --b) bits.push_back(uint8_t((*p >> b) & 1));
    return bits;
}

std::vector<uint8_t> random_bits(int n, uint64_t seed) {
    synth::Rng rng(seed);
    std::vector<uint8_t> bits(n);
    for (auto& b : bits) b = uint8_t(rng.next() & 1);
    return bits;
}

// Re-derives the accumulated syndrome straight from the graph definition.
std::vector<uint8_t> reference_acc(const std::vector<uint8_t>& bits, const LdpcaCode& code) {
    std::vector<uint8_t> syn(code.n, 0);
    for (int k = 0; k < code.n; ++k)
        for (int d = 0; d < code.dv; ++d)
            syn[code.var_checks[size_t(k) * code.dv + d]] ^= bits[k];
    std::vector<uint8_t> acc(code.n);
    uint8_t run = 0;
    for (int i = 0; i < code.n; ++i) {
        run ^= syn[i];
        acc[i] = run;
    }
    return acc;
}

std::vector<double> channel_llrs(const std::vector<uint8_t>& si, double p) {
    double l = std::log((1.0 - p) / p);
    std::vector<double> llr(si.size());
    for (size_t i = 0; i < si.size(); ++i) llr[i] = si[i] ? -l : l;
    return llr;
}

}  // namespace

TEST_CASE("crc8 check values and single-flip detection") {
    CHECK(crc8(std::vector<uint8_t>{}) == 0x00);
    CHECK(crc8(ascii_bits("123456789")) == 0xF4);  // CRC-8/SMBUS check value
    CHECK(verify(std::vector<uint8_t>{}, 0x00));

    std::vector<uint8_t> plane = random_bits(1024, 9001);
    uint8_t ref = crc8(plane);
    CHECK(verify(plane, ref));
    for (size_t i = 0; i < plane.size(); ++i) {
        plane[i] ^= 1;
        CHECK(crc8(plane) != ref);
        CHECK(!verify(plane, ref));
        plane[i] ^= 1;
    }
}

TEST_CASE("build_code is deterministic and regular") {
    LdpcaCode a = build_code(256, 3, 7);
    LdpcaCode b = build_code(256, 3, 7);
    CHECK(a.var_checks == b.var_checks);
    CHECK(a.ladder == b.ladder);
    CHECK(a.inv_rows == b.inv_rows);
    CHECK(serialize_code(a) == serialize_code(b));

    REQUIRE(a.var_checks.size() == size_t(256) * 3);
    for (uint32_t c : a.var_checks) CHECK(c < 256);
    // Distinct check nodes per variable.
    for (int k = 0; k < 256; ++k) {
        const uint32_t* e = a.var_checks.data() + size_t(k) * 3;
        CHECK(e[0] != e[1]);
        CHECK(e[0] != e[2]);
        CHECK(e[1] != e[2]);
    }

    // Construction may step the seed a few times hunting for an invertible
    // map, so nearby seeds can coincide; distant ones must not.
    LdpcaCode c = build_code(256, 3, 0xBEEF);
    CHECK(a.var_checks != c.var_checks);

    CHECK_THROWS_AS(build_code(15, 3, 1), Error);
    CHECK_THROWS_AS(build_code(256, 1, 1), Error);
}

TEST_CASE("serialize_code layout: version, n, dv, seed, edges") {
    LdpcaCode code = build_code(64, 3, 0x0102030405060708ull);
    std::vector<uint8_t> bytes = serialize_code(code);
    REQUIRE(bytes.size() == 14 + code.var_checks.size() * 4);
    CHECK(bytes[0] == 1);
    uint32_t n = 0;
    std::memcpy(&n, bytes.data() + 1, 4);
    CHECK(n == 64);
    CHECK(bytes[5] == 3);
    uint64_t seed = 0;
    std::memcpy(&seed, bytes.data() + 6, 8);
    CHECK(seed == code.seed);
    uint32_t e0 = 0;
    std::memcpy(&e0, bytes.data() + 14, 4);
    CHECK(e0 == code.var_checks[0]);
}

TEST_CASE("transmission ladder partitions the accumulator indices") {
    for (int n : {64, 256, 1584, 100}) {
        LdpcaCode code = build_code(n, 3, 3);
        CHECK(code.num_chunks == ladder_chunk_count(n));
        CHECK(code.ladder.size() == size_t(code.num_chunks));

        std::set<int> seen;
        for (int t = 0; t < code.num_chunks; ++t) {
            std::vector<int> idx = code.chunk_indices(t);
            CHECK(std::is_sorted(idx.begin(), idx.end()));
            for (int i : idx) {
                CHECK(i >= 0);
                CHECK(i < n);
                CHECK(seen.insert(i).second);  // disjoint chunks
            }
        }
        CHECK(seen.size() == size_t(n));  // complete coverage

        // The first transmission must include the final accumulator tap so
        // every syndrome node is covered by some merged constraint.
        std::vector<int> first = code.chunk_indices(0);
        CHECK(std::find(first.begin(), first.end(), n - 1) != first.end());
    }
    CHECK(ladder_chunk_count(1584) == 66);
    CHECK(build_code(1584, 3, 1).num_chunks == 66);
}

TEST_CASE("encode_plane: zero plane, graph oracle, de-accumulation round trip") {
    LdpcaCode code = build_code(128, 3, 5);

    std::vector<uint8_t> zeros(128, 0);
    SyndromePlane zp = encode_plane(zeros, code);
    CHECK(zp.chunk_size == code.chunk_size);
    for (uint8_t a : zp.acc) CHECK(a == 0);
    CHECK(zp.crc == crc8(zeros));

    std::vector<uint8_t> bits = random_bits(128, 17);
    SyndromePlane sp = encode_plane(bits, code);
    CHECK(sp.acc == reference_acc(bits, code));
    CHECK(sp.crc == crc8(bits));

    // De-accumulating recovers the raw syndromes: re-accumulating them must
    // reproduce acc (accumulator is an involution-free running XOR).
    std::vector<uint8_t> syn(128);
    for (int i = 0; i < 128; ++i) syn[i] = uint8_t(sp.acc[i] ^ (i ? sp.acc[i - 1] : 0));
    uint8_t run = 0;
    for (int i = 0; i < 128; ++i) {
        run ^= syn[i];
        CHECK(run == sp.acc[i]);
    }

    CHECK_THROWS_AS(encode_plane(std::vector<uint8_t>(64, 0), code), LengthMismatch);
}

TEST_CASE("decode_plane: consistent certainty converges immediately") {
    LdpcaCode code = build_code(128, 3, 11);
    std::vector<double> llr(128, 25.0);
    std::vector<uint8_t> acc(128, 0);
    DecodeResult res = decode_plane(llr, acc, 1, code);
    CHECK(res.converged);
    CHECK(res.iterations <= 1);
    for (uint8_t b : res.bits) CHECK(b == 0);
}

TEST_CASE("decode_plane at full rate recovers any plane from zero llr") {
    LdpcaCode code = build_code(256, 3, 13);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> bits = random_bits(256, 100 + trial);
        SyndromePlane sp = encode_plane(bits, code);
        std::vector<double> llr(256, 0.0);
        DecodeResult res = decode_plane(llr, sp.acc, code.num_chunks, code);
        CHECK(res.converged);
        CHECK(res.bits == bits);
    }
}

TEST_CASE("decode_plane length and chunk validation") {
    LdpcaCode code = build_code(64, 3, 2);
    std::vector<double> llr(64, 0.0);
    std::vector<uint8_t> acc(64, 0);
    CHECK_THROWS_AS(decode_plane(std::vector<double>(32, 0.0), acc, 1, code), LengthMismatch);
    CHECK_THROWS_AS(decode_plane(llr, std::vector<uint8_t>(32, 0), 1, code), LengthMismatch);
    CHECK_THROWS_AS(decode_plane(llr, acc, 0, code), LengthMismatch);
    CHECK_THROWS_AS(decode_plane(llr, acc, code.num_chunks + 1, code), LengthMismatch);
}

TEST_CASE("partial-rate decode succeeds below full rate and is chunk-monotone") {
    LdpcaCode code = build_code(512, 3, 19);
    const double p = 0.01;
    int successes_below_full = 0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<uint8_t> source = random_bits(512, 500 + trial);
        std::vector<uint8_t> si = source;
        synth::Rng rng(900 + trial);
        for (auto& b : si)
            if (rng.unit() < p) b ^= 1;
        SyndromePlane sp = encode_plane(source, code);
        std::vector<double> llr = channel_llrs(si, p);

        int first_ok = -1;
        for (int k = 1; k <= code.num_chunks; ++k) {
            DecodeResult res = decode_plane(llr, sp.acc, k, code);
            if (res.converged && res.bits == source) {
                first_ok = k;
                break;
            }
        }
        REQUIRE(first_ok > 0);
        if (first_ok < code.num_chunks) ++successes_below_full;
        // More chunks never break a decode that already succeeded.
        for (int k = first_ok + 1; k <= std::min(first_ok + 3, code.num_chunks); ++k) {
            DecodeResult res = decode_plane(llr, sp.acc, k, code);
            CHECK(res.converged);
            CHECK(res.bits == source);
        }
    }
    // A 1% crossover must not require full rate on typical planes.
    CHECK(successes_below_full >= 4);
}
