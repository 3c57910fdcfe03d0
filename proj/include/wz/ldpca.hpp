#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wz/errors.hpp"

namespace wz {

// Rate-adaptive syndrome code: an LDPC syndrome former (n variable nodes, n
// syndrome nodes, regular variable degree) concatenated with a mod-2
// accumulator. The accumulated syndrome is released in `num_chunks` ladder
// steps; any received prefix of steps yields a decodable code whose parity
// constraints merge the syndrome nodes between received accumulator taps.
struct LdpcaCode {
    int n = 0;
    int dv = 0;
    uint64_t seed = 0;

    // dv syndrome-node indices per variable, variable-major.
    std::vector<uint32_t> var_checks;

    // Transmission ladder: step t releases accumulator indices congruent to
    // ladder[t] modulo num_chunks. Step 0 contains index n-1 so the first
    // transmission already covers every syndrome node.
    std::vector<uint32_t> ladder;
    int num_chunks = 0;
    int chunk_size = 0;

    // Inverse of the full-rate syndrome map over GF(2), row-major bit-packed;
    // doubles as the construction-time full-rank proof.
    std::vector<uint64_t> inv_rows;
    int words_per_row = 0;

    // Ascending accumulator indices released by ladder step t.
    std::vector<int> chunk_indices(int t) const;
};

struct SyndromePlane {
    std::vector<uint8_t> acc;  // accumulated syndrome, one bit per entry
    uint8_t crc = 0;
    int chunk_size = 0;
};

struct DecodeResult {
    bool converged = false;
    std::vector<uint8_t> bits;  // decoded plane; best-effort when not converged
    int iterations = 0;
};

// Ladder geometry for a plane length, without building a code: the chunk
// width targets 66 transmission steps, so the count is ceil(n / max(1, n/66)).
int ladder_chunk_count(int n);

// Deterministic seeded construction; retries with stepped seeds until the
// full-rate map is invertible. Throws ConstructionFailed after 64 attempts.
LdpcaCode build_code(int n, int dv, uint64_t seed);

// Syndrome at node i = XOR of adjacent source bits; acc = running XOR.
SyndromePlane encode_plane(std::span<const uint8_t> bits, const LdpcaCode& code);

// CRC-8 (poly 0x07, init 0x00, no reflection, no final XOR) over the plane
// packed MSB-first into bytes.
uint8_t crc8(std::span<const uint8_t> bits);
bool verify(std::span<const uint8_t> bits, uint8_t crc);

// Belief-propagation decode from the first `chunks` ladder steps of `acc`.
// Only accumulator entries released by those steps are read. LLR sign
// convention: positive means bit 0 is more likely. A full-rate prefix skips
// message passing and solves the system exactly.
DecodeResult decode_plane(std::span<const double> llr, std::span<const uint8_t> acc,
                          int chunks, const LdpcaCode& code, int max_iter = 100);

// Debug dump: version, n, d_v, seed, and the edge list as 32-bit indices.
std::vector<uint8_t> serialize_code(const LdpcaCode& code);

}  // namespace wz
