#include "wz/ldpca.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "wz/bitio.hpp"

namespace wz {

namespace {

constexpr double kLlrClamp = 25.0;
constexpr int kReseedAttempts = 64;

// splitmix64: small, deterministic, platform-independent.
struct Rng {
    uint64_t state;
    uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    uint32_t below(uint32_t bound) { return static_cast<uint32_t>(next() % bound); }
};

void shuffle(std::vector<uint32_t>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(uint32_t(i))]);
}

// Tries to assign dv distinct syndrome nodes per variable from dv shuffled
// permutations, swapping entries forward to break duplicates. Keeps the
// syndrome-node degrees regular as well. Returns false on the (pathological)
// case where a duplicate cannot be repaired.
bool build_adjacency(int n, int dv, Rng& rng, std::vector<uint32_t>& var_checks) {
    var_checks.assign(size_t(n) * dv, 0);
    std::vector<uint32_t> perm(n);
    auto taken = [&](int k, int upto, uint32_t value) {
        for (int d = 0; d < upto; ++d)
            if (var_checks[size_t(k) * dv + d] == value) return true;
        return false;
    };
    for (int d = 0; d < dv; ++d) {
        std::iota(perm.begin(), perm.end(), 0u);
        shuffle(perm, rng);
        for (int k = 0; k < n; ++k) {
            if (taken(k, d, perm[k])) {
                bool fixed = false;
                for (int step = 1; step < n; ++step) {
                    int j = (k + step) % n;
                    if (!taken(k, d, perm[j]) && !taken(j, d, perm[k])) {
                        std::swap(perm[k], perm[j]);
                        fixed = true;
                        break;
                    }
                }
                if (!fixed) return false;
            }
            var_checks[size_t(k) * dv + d] = perm[k];
        }
    }
    return true;
}

// Gauss-Jordan inversion of the n x n syndrome map over GF(2). Returns false
// when the matrix is singular.
bool invert_syndrome_map(int n, int dv, const std::vector<uint32_t>& var_checks,
                         std::vector<uint64_t>& inv, int& words_per_row) {
    int words = (n + 63) / 64;
    words_per_row = words;
    std::vector<uint64_t> m(size_t(n) * words, 0);
    inv.assign(size_t(n) * words, 0);
    for (int k = 0; k < n; ++k)
        for (int d = 0; d < dv; ++d) {
            uint32_t c = var_checks[size_t(k) * dv + d];
            m[size_t(c) * words + (k >> 6)] ^= 1ull << (k & 63);
        }
    for (int r = 0; r < n; ++r) inv[size_t(r) * words + (r >> 6)] |= 1ull << (r & 63);

    auto bit = [&](const std::vector<uint64_t>& rows, int r, int c) {
        return (rows[size_t(r) * words + (c >> 6)] >> (c & 63)) & 1ull;
    };
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (bit(m, r, col)) {
                pivot = r;
                break;
            }
        if (pivot < 0) return false;
        if (pivot != col) {
            for (int w = 0; w < words; ++w) {
                std::swap(m[size_t(pivot) * words + w], m[size_t(col) * words + w]);
                std::swap(inv[size_t(pivot) * words + w], inv[size_t(col) * words + w]);
            }
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || !bit(m, r, col)) continue;
            for (int w = 0; w < words; ++w) {
                m[size_t(r) * words + w] ^= m[size_t(col) * words + w];
                inv[size_t(r) * words + w] ^= inv[size_t(col) * words + w];
            }
        }
    }
    return true;
}

// Transmission order of the accumulator residue classes: first the class of
// index n-1 (covers all syndrome nodes at once), then breadth-first midpoints
// so each step roughly bisects the largest untransmitted gaps.
std::vector<uint32_t> make_ladder(int n, int num_chunks) {
    std::vector<uint32_t> order;
    order.reserve(num_chunks);
    uint32_t first = uint32_t((n - 1) % num_chunks);
    order.push_back(first);
    std::deque<std::pair<int, int>> segs;  // half-open residue ranges
    segs.emplace_back(0, int(first));
    segs.emplace_back(int(first) + 1, num_chunks);
    while (!segs.empty()) {
        auto [a, b] = segs.front();
        segs.pop_front();
        if (a >= b) continue;
        int mid = (a + b) / 2;
        order.push_back(uint32_t(mid));
        segs.emplace_back(a, mid);
        segs.emplace_back(mid + 1, b);
    }
    return order;
}

double phi(double x) {
    // For x > 8 the tail series -log(tanh(x/2)) = 2t + 2t^3/3 + O(t^5),
    // t = e^-x, is accurate to the last ulp and skips the tanh+log pair;
    // the direct form there also wastes most of its digits against 1.0.
    if (x > 8.0) {
        double t = std::exp(-x);
        return t * (2.0 + t * t * (2.0 / 3.0));
    }
    return -std::log(std::tanh(std::max(x, 1e-12) * 0.5));
}

void append_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

void append_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

}  // namespace

std::vector<int> LdpcaCode::chunk_indices(int t) const {
    std::vector<int> idx;
    for (int i = int(ladder[t]); i < n; i += num_chunks) idx.push_back(i);
    return idx;
}

int ladder_chunk_count(int n) {
    int chunk = std::max(1, n / 66);
    return (n + chunk - 1) / chunk;
}

LdpcaCode build_code(int n, int dv, uint64_t seed) {
    if (n < 16) throw Error("syndrome code needs n >= 16");
    if (dv < 2 || dv > 8) throw Error("variable degree out of range");
    LdpcaCode code;
    code.n = n;
    code.dv = dv;
    code.seed = seed;
    code.chunk_size = std::max(1, n / 66);
    code.num_chunks = (n + code.chunk_size - 1) / code.chunk_size;
    code.ladder = make_ladder(n, code.num_chunks);
    for (int attempt = 0; attempt < kReseedAttempts; ++attempt) {
        Rng rng{seed + uint64_t(attempt)};
        if (!build_adjacency(n, dv, rng, code.var_checks)) continue;
        if (invert_syndrome_map(n, dv, code.var_checks, code.inv_rows, code.words_per_row))
            return code;
    }
    throw ConstructionFailed("no full-rank syndrome map for n=" + std::to_string(n) +
                             " after " + std::to_string(kReseedAttempts) + " reseeds");
}

SyndromePlane encode_plane(std::span<const uint8_t> bits, const LdpcaCode& code) {
    if (bits.size() != size_t(code.n))
        throw LengthMismatch("plane length " + std::to_string(bits.size()) +
                             " does not match code length " + std::to_string(code.n));
    SyndromePlane out;
    out.chunk_size = code.chunk_size;
    out.acc.assign(code.n, 0);
    for (int k = 0; k < code.n; ++k) {
        if (!bits[k]) continue;
        for (int d = 0; d < code.dv; ++d) out.acc[code.var_checks[size_t(k) * code.dv + d]] ^= 1;
    }
    uint8_t run = 0;
    for (int i = 0; i < code.n; ++i) {
        run ^= out.acc[i];
        out.acc[i] = run;
    }
    out.crc = crc8(bits);
    return out;
}

uint8_t crc8(std::span<const uint8_t> bits) {
    std::vector<uint8_t> bytes = pack_bits(bits);
    uint8_t crc = 0x00;
    for (uint8_t byte : bytes) {
        crc ^= byte;
        for (int b = 0; b < 8; ++b)
            crc = (crc & 0x80) ? uint8_t((crc << 1) ^ 0x07) : uint8_t(crc << 1);
    }
    return crc;
}

bool verify(std::span<const uint8_t> bits, uint8_t crc) {
    return crc8(bits) == crc;
}

DecodeResult decode_plane(std::span<const double> llr, std::span<const uint8_t> acc,
                          int chunks, const LdpcaCode& code, int max_iter) {
    int n = code.n;
    if (llr.size() != size_t(n) || acc.size() != size_t(n))
        throw LengthMismatch("llr/acc length does not match code length");
    if (chunks < 1 || chunks > code.num_chunks)
        throw LengthMismatch("chunk count outside the ladder");

    DecodeResult res;

    // Full rate: de-accumulate every syndrome and solve exactly.
    if (chunks == code.num_chunks) {
        std::vector<uint64_t> syn((n + 63) / 64, 0);
        uint8_t prev = 0;
        for (int i = 0; i < n; ++i) {
            uint8_t s = acc[i] ^ prev;
            prev = acc[i];
            if (s) syn[i >> 6] |= 1ull << (i & 63);
        }
        res.bits.resize(n);
        for (int k = 0; k < n; ++k) {
            const uint64_t* row = code.inv_rows.data() + size_t(k) * code.words_per_row;
            uint64_t parity = 0;
            for (int w = 0; w < code.words_per_row; ++w) parity ^= row[w] & syn[w];
            res.bits[k] = uint8_t(std::popcount(parity) & 1);
        }
        res.converged = true;
        return res;
    }

    // Which accumulator indices the prefix grants us.
    std::vector<uint8_t> residue_in(code.num_chunks, 0);
    for (int t = 0; t < chunks; ++t) residue_in[code.ladder[t]] = 1;
    std::vector<int> taps;  // ascending received accumulator indices
    taps.reserve(size_t(chunks) * (n / code.num_chunks + 1));
    for (int i = 0; i < n; ++i)
        if (residue_in[i % code.num_chunks]) taps.push_back(i);

    // Merged parity constraints: group j spans syndrome nodes (taps[j-1],
    // taps[j]], with syndrome = XOR of the two accumulator taps.
    int groups = int(taps.size());
    std::vector<uint8_t> sigma(groups);
    std::vector<int> group_of(n, -1);
    {
        int start = 0;
        for (int j = 0; j < groups; ++j) {
            sigma[j] = uint8_t(acc[taps[j]] ^ (j ? acc[taps[j - 1]] : 0));
            for (int c = start; c <= taps[j]; ++c) group_of[c] = j;
            start = taps[j] + 1;
        }
    }

    // Per-variable merged adjacency; a variable hitting the same group twice
    // cancels modulo 2.
    std::vector<int> var_ptr(n + 1, 0);
    std::vector<int> e_grp;
    e_grp.reserve(size_t(n) * code.dv);
    std::array<int, 8> g{};
    for (int k = 0; k < n; ++k) {
        int cnt = 0;
        for (int d = 0; d < code.dv; ++d) {
            int gi = group_of[code.var_checks[size_t(k) * code.dv + d]];
            if (gi >= 0) g[cnt++] = gi;
        }
        std::sort(g.begin(), g.begin() + cnt);
        for (int i = 0; i < cnt;) {
            if (i + 1 < cnt && g[i] == g[i + 1]) {
                i += 2;
                continue;
            }
            e_grp.push_back(g[i]);
            ++i;
        }
        var_ptr[k + 1] = int(e_grp.size());
    }
    int edges = int(e_grp.size());

    // Check-major view of the same edges.
    std::vector<int> grp_ptr(groups + 1, 0);
    for (int e = 0; e < edges; ++e) ++grp_ptr[e_grp[e] + 1];
    for (int j = 0; j < groups; ++j) grp_ptr[j + 1] += grp_ptr[j];
    std::vector<int> grp_edges(edges), e_var(edges);
    {
        std::vector<int> cursor(grp_ptr.begin(), grp_ptr.end() - 1);
        for (int k = 0; k < n; ++k)
            for (int e = var_ptr[k]; e < var_ptr[k + 1]; ++e) {
                e_var[e] = k;
                grp_edges[cursor[e_grp[e]]++] = e;
            }
    }

    std::vector<double> intrinsic(n);
    for (int k = 0; k < n; ++k) intrinsic[k] = std::clamp(llr[k], -kLlrClamp, kLlrClamp);

    std::vector<double> v2c(edges), c2v(edges, 0.0), mag(edges);
    for (int e = 0; e < edges; ++e) v2c[e] = intrinsic[e_var[e]];

    std::vector<uint8_t> bits(n, 0), prev_bits(n, 0), prev2_bits(n, 0);
    int stable = 0, cycle2 = 0;
    int best_distance = n + 1, since_best = 0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        // Check pass: sign/magnitude sum-product update per merged constraint.
        for (int j = 0; j < groups; ++j) {
            double tot = 0.0;
            int sgn = sigma[j] ? -1 : 1;
            for (int p = grp_ptr[j]; p < grp_ptr[j + 1]; ++p) {
                int e = grp_edges[p];
                double m = v2c[e];
                if (m < 0) sgn = -sgn;
                mag[e] = phi(std::abs(m));
                tot += mag[e];
            }
            for (int p = grp_ptr[j]; p < grp_ptr[j + 1]; ++p) {
                int e = grp_edges[p];
                double out = phi(std::max(tot - mag[e], 1e-12));
                // Sub-noise messages only jitter the decisions and defeat the
                // stuck-state detectors; flush them to an exact zero.
                if (out < 1e-12) out = 0.0;
                int s = sgn * (v2c[e] < 0 ? -1 : 1);
                c2v[e] = s < 0 ? -out : out;
            }
        }

        // Variable pass and tentative decisions.
        for (int k = 0; k < n; ++k) {
            double total = intrinsic[k];
            for (int e = var_ptr[k]; e < var_ptr[k + 1]; ++e) total += c2v[e];
            bits[k] = total < 0 ? 1 : 0;
            for (int e = var_ptr[k]; e < var_ptr[k + 1]; ++e) v2c[e] = total - c2v[e];
        }

        // Hamming check of the regenerated merged syndrome.
        int distance = 0;
        for (int j = 0; j < groups; ++j) {
            int parity = 0;
            for (int p = grp_ptr[j]; p < grp_ptr[j + 1]; ++p) parity ^= bits[e_var[grp_edges[p]]];
            distance += parity != sigma[j];
        }
        if (distance == 0) {
            res.converged = true;
            res.bits = std::move(bits);
            res.iterations = iter;
            return res;
        }

        // Stuck decisions: a fixed point (period 1) or a two-cycle oscillation
        // held for several iterations will not start converging later.
        res.iterations = iter;
        if (bits == prev_bits) {
            if (++stable >= 5) break;
        } else {
            stable = 0;
        }
        if (bits == prev2_bits) {
            if (++cycle2 >= 5) break;
        } else {
            cycle2 = 0;
        }
        // Aimless wander: no new best syndrome residual for a long stretch.
        if (distance < best_distance) {
            best_distance = distance;
            since_best = 0;
        } else if (++since_best >= 25) {
            break;
        }
        prev2_bits.swap(prev_bits);
        prev_bits = bits;
    }
    res.converged = false;
    res.bits = std::move(bits);
    return res;
}

std::vector<uint8_t> serialize_code(const LdpcaCode& code) {
    std::vector<uint8_t> out;
    out.reserve(14 + code.var_checks.size() * 4);
    out.push_back(1);  // layout version
    append_u32(out, uint32_t(code.n));
    out.push_back(uint8_t(code.dv));
    append_u64(out, code.seed);
    for (uint32_t e : code.var_checks) append_u32(out, e);
    return out;
}

}  // namespace wz
