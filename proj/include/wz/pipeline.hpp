#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "wz/bitstream.hpp"
#include "wz/frame.hpp"
#include "wz/ldpca.hpp"
#include "wz/noise_model.hpp"
#include "wz/quantizer.hpp"
#include "wz/splitter.hpp"
#include "wz/transform.hpp"

namespace wz {

// Knobs for both codec halves. The encoder reads the stream-defining fields
// (matrix, gop mode, seed, degree, key qp); the decoder reads only its own
// loop parameters, everything stream-defining arriving in the archive header.
struct CodecConfig {
    int quant_id = 8;

    bool adaptive_gop = false;
    int fixed_gop = 2;          // used when adaptive_gop is false; 1..255
    ActivityConfig activity{};  // used when adaptive_gop is true

    uint64_t seed = 0x9E3779B97F4A7C15ull;
    int dv = 3;
    int key_qp = -1;  // -1 picks the per-matrix default

    int max_bp_iterations = 100;
    AlphaMode alpha_mode = AlphaMode::Coeff;
    int initial_chunks = 1;  // syndrome chunks taken before the first attempt
    bool keep_trace = false;
};

// One stats.csv row: a key frame (band/plane -1, bits = payload size) or one
// decoded bit plane (bits = consumed syndrome bits).
struct StatRow {
    int frame = 0;
    bool key = false;
    int band = -1;
    int plane = -1;
    int chunks_consumed = 0;
    bool crc_ok = true;
    int64_t bits = 0;
};

// What a live feedback system would actually transmit, split by component.
// Stored-but-unconsumed archive syndromes are excluded (kept separately in
// DecoderStats); the total is the exact sum of the parts.
struct RateBreakdown {
    int64_t header_bits = 0;  // archive header plus per-GOP structure fields
    int64_t key_bits = 0;
    int64_t syndrome_bits = 0;  // consumed chunks only
    int64_t crc_bits = 0;
    int64_t range_bits = 0;

    int64_t total() const {
        return header_bits + key_bits + syndrome_bits + crc_bits + range_bits;
    }
};

// Decoder-side record of one plane / one frame, retained when
// CodecConfig::keep_trace is set so tests can audit the decode losslessly.
struct PlaneTrace {
    int frame = 0;
    int band = 0;
    int plane = 0;
    bool crc_ok = false;
    bool converged = false;
    int chunks = 0;
    std::vector<uint8_t> bits;
};

struct FrameTrace {
    int frame = 0;
    QuantizedBands bins;       // decoded bins with steps and ranges
    CoeffBands reconstructed;  // coefficients before 8-bit emission
};

struct DecodeTrace {
    std::vector<PlaneTrace> planes;
    std::vector<FrameTrace> frames;
};

struct EncoderStats {
    GopPlan plan;
    int wz_frames = 0;
    int64_t key_bits = 0;
    int64_t stored_syndrome_bits = 0;
    int64_t archive_bytes = 0;
};

struct DecoderStats {
    std::vector<StatRow> rows;
    RateBreakdown rate;
    int64_t stored_syndrome_bits = 0;
    int64_t requests = 0;  // grants plus exhausted replies
    int flagged_planes = 0;
    DecodeTrace trace;
};

// One ladder step's worth of accumulated-syndrome bits, ascending by
// accumulator index.
struct SyndromeChunk {
    int step = 0;
    std::vector<uint8_t> bits;
};

// The decoder's request loop speaks to this: each call hands over the next
// untransmitted ladder chunk for the plane (in ladder order, each exactly
// once) or nothing once the ladder is spent.
class FeedbackChannel {
public:
    virtual ~FeedbackChannel() = default;
    virtual std::optional<SyndromeChunk> request(int frame, int band, int plane) = 0;
};

// Feedback simulated over an archive that stores every chunk.
class ArchiveFeedback final : public FeedbackChannel {
public:
    ArchiveFeedback(const Bitstream& bs, const LdpcaCode& code);
    std::optional<SyndromeChunk> request(int frame, int band, int plane) override;

private:
    struct PlaneState {
        std::vector<uint8_t> bits;  // ladder-ordered accumulated syndrome
        int next = 0;
    };
    std::map<std::array<int, 3>, PlaneState> planes_;
    std::vector<int> offsets_;  // ladder-order bit offset of each chunk
    int num_chunks_ = 0;
};

struct EncodeOutput {
    Bitstream archive;
    EncoderStats stats;
};

struct DecodeOutput {
    Sequence sequence;
    DecoderStats stats;
};

// Full encoder: GOP planning, intra key frames, and per WZ frame the
// transform / quantize / bit-plane / syndrome chain, every chunk stored.
EncodeOutput encode(const Sequence& seq, const CodecConfig& cfg);

// Full decoder over simulated feedback: intra key frames, hierarchical side
// information, Laplacian soft input, chunk-at-a-time LDPCA decoding gated by
// syndrome check plus CRC, bin-constrained reconstruction, display-order
// interleave. Ladder exhaustion falls back to LLR hard decisions and flags
// the plane.
DecodeOutput decode(const Bitstream& bs, const CodecConfig& cfg = {});

// Per-component kbps at the sequence fps, plus mean bits per frame.
struct RateReport {
    double kbps_header = 0;
    double kbps_key = 0;
    double kbps_syndrome = 0;
    double kbps_crc = 0;
    double kbps_range = 0;
    double kbps_total = 0;
    double bits_per_frame = 0;
};

RateReport rate_report(const RateBreakdown& rate, Fps fps, int frame_count);

}  // namespace wz
