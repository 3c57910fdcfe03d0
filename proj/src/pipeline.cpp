#include "wz/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "wz/bitio.hpp"
#include "wz/errors.hpp"
#include "wz/keyframe.hpp"
#include "wz/parallel.hpp"
#include "wz/reconstruction.hpp"
#include "wz/sideinfo.hpp"
#include "wz/softinput.hpp"

namespace wz {

namespace {

// Accumulated syndrome regrouped into ladder order for the archive.
std::vector<uint8_t> ladder_pack(const LdpcaCode& code, std::span<const uint8_t> acc) {
    std::vector<uint8_t> bits;
    bits.reserve(acc.size());
    for (int t = 0; t < code.num_chunks; ++t)
        for (int i : code.chunk_indices(t)) bits.push_back(acc[i]);
    return pack_bits(bits);
}

int checked_key_qp(const CodecConfig& cfg) {
    if (cfg.key_qp < 0) return default_key_qp(cfg.quant_id);
    if (cfg.key_qp > 51) throw Error("key qp out of range [0, 51]");
    return cfg.key_qp;
}

std::vector<int64_t> chunk_bit_prefix(const LdpcaCode& code) {
    std::vector<int64_t> prefix(static_cast<size_t>(code.num_chunks) + 1, 0);
    for (int t = 0; t < code.num_chunks; ++t)
        prefix[t + 1] = prefix[t] + static_cast<int64_t>(code.chunk_indices(t).size());
    return prefix;
}

}  // namespace

ArchiveFeedback::ArchiveFeedback(const Bitstream& bs, const LdpcaCode& code) {
    num_chunks_ = code.num_chunks;
    offsets_.assign(static_cast<size_t>(num_chunks_) + 1, 0);
    for (int t = 0; t < num_chunks_; ++t)
        offsets_[t + 1] = offsets_[t] + static_cast<int>(code.chunk_indices(t).size());
    int frame = 0;
    for (const GopRecord& gop : bs.gops) {
        ++frame;  // the key frame carries no syndromes
        for (const WzFrameRecord& wf : gop.wz) {
            for (const BandRecord& band : wf.bands)
                for (size_t j = 0; j < band.planes.size(); ++j) {
                    PlaneState st;
                    try {
                        st.bits = unpack_bits(band.planes[j].packed, static_cast<size_t>(code.n));
                    } catch (const std::out_of_range&) {
                        throw MalformedBitstream("plane payload shorter than the code length");
                    }
                    planes_[{frame, band.band, static_cast<int>(j)}] = std::move(st);
                }
            ++frame;
        }
    }
}

std::optional<SyndromeChunk> ArchiveFeedback::request(int frame, int band, int plane) {
    auto it = planes_.find(std::array<int, 3>{frame, band, plane});
    if (it == planes_.end()) throw Error("feedback request for a plane the archive does not hold");
    PlaneState& st = it->second;
    if (st.next >= num_chunks_) return std::nullopt;
    SyndromeChunk chunk;
    chunk.step = st.next;
    chunk.bits.assign(st.bits.begin() + offsets_[st.next], st.bits.begin() + offsets_[st.next + 1]);
    ++st.next;
    return chunk;
}

EncodeOutput encode(const Sequence& seq, const CodecConfig& cfg) {
    if (seq.frames.empty()) throw EmptySequence("cannot encode an empty sequence");
    const Frame& f0 = seq.frames.front();
    if (f0.width <= 0 || f0.height <= 0 || f0.width % 16 || f0.height % 16)
        throw BadDimensions("frame dimensions must be positive multiples of 16");
    if (f0.width > 0xFFFF || f0.height > 0xFFFF)
        throw BadDimensions("frame dimensions exceed the archive header fields");
    for (const Frame& f : seq.frames)
        if (f.width != f0.width || f.height != f0.height)
            throw DimensionMismatch("all frames must share dimensions");
    if (!cfg.adaptive_gop && (cfg.fixed_gop < 1 || cfg.fixed_gop > 255))
        throw Error("fixed gop length out of range [1, 255]");

    const QuantMatrix& m = quant_matrix(cfg.quant_id);
    const int key_qp = checked_key_qp(cfg);
    const IntraCodec& intra = builtin_intra();
    const GopPlan plan = cfg.adaptive_gop
                             ? plan_gops(seq, cfg.activity)
                             : plan_fixed_gops(static_cast<int>(seq.frames.size()), cfg.fixed_gop);
    const int n = (f0.width / 4) * (f0.height / 4);
    const LdpcaCode code = build_code(n, cfg.dv, cfg.seed);

    EncodeOutput out;
    BitstreamHeader& h = out.archive.header;
    h.width = static_cast<uint16_t>(f0.width);
    h.height = static_cast<uint16_t>(f0.height);
    h.fps = seq.fps;
    h.frame_count = static_cast<uint32_t>(seq.frames.size());
    h.quant_id = static_cast<uint8_t>(cfg.quant_id);
    h.seed = cfg.seed;
    h.dv = static_cast<uint8_t>(cfg.dv);
    h.key_codec = intra.id();
    h.key_qp = static_cast<uint8_t>(key_qp);
    out.stats.plan = plan;

    struct Job {
        int frame = 0;
        WzFrameRecord* rec = nullptr;
    };
    std::vector<Job> jobs;
    out.archive.gops.resize(plan.sizes.size());
    int start = 0;
    for (size_t g = 0; g < plan.sizes.size(); ++g) {
        GopRecord& gop = out.archive.gops[g];
        gop.size = plan.sizes[g];
        gop.key_payload = intra.encode(seq.frames[start], key_qp);
        out.stats.key_bits += static_cast<int64_t>(gop.key_payload.size()) * 8;
        gop.wz.resize(static_cast<size_t>(gop.size) - 1);
        for (int k = 1; k < gop.size; ++k) jobs.push_back({start + k, &gop.wz[k - 1]});
        start += gop.size;
    }
    out.stats.wz_frames = static_cast<int>(jobs.size());

    parallel_for(static_cast<int>(jobs.size()), [&](int ji) {
        const Job& job = jobs[ji];
        CoeffBands bands = frame_to_bands(seq.frames[job.frame]);
        QuantizedBands q = quantize_bands(bands, m);
        WzFrameRecord& rec = *job.rec;
        rec.bands.resize(q.coded.size());
        for (size_t b = 0; b < q.coded.size(); ++b) {
            const QuantizedBand& qb = q.coded[b];
            BandRecord& br = rec.bands[b];
            br.band = qb.band;
            br.range = static_cast<uint16_t>(qb.range);
            BitPlaneSet planes = bins_to_bitplanes(qb);
            br.planes.resize(planes.planes.size());
            for (size_t j = 0; j < planes.planes.size(); ++j) {
                SyndromePlane sp = encode_plane(planes.planes[j], code);
                br.planes[j].crc = sp.crc;
                br.planes[j].chunk_count = static_cast<uint16_t>(code.num_chunks);
                br.planes[j].packed = ladder_pack(code, sp.acc);
            }
        }
    });

    int64_t bytes = 29;
    for (const GopRecord& gop : out.archive.gops) {
        bytes += 5 + static_cast<int64_t>(gop.key_payload.size());
        for (const WzFrameRecord& wf : gop.wz)
            for (const BandRecord& band : wf.bands) {
                if (band.band != 0) bytes += 2;
                for (const PlaneRecord& plane : band.planes) {
                    bytes += 3 + static_cast<int64_t>(plane.packed.size());
                    out.stats.stored_syndrome_bits += n;
                }
            }
    }
    out.stats.archive_bytes = bytes;
    return out;
}

namespace {

struct WzDecoder {
    const BitstreamHeader& h;
    const QuantMatrix& m;
    const LdpcaCode& code;
    const CodecConfig& cfg;
    ArchiveFeedback& fb;
    DecoderStats& st;
    std::vector<int64_t> prefix;  // bits carried by the first t ladder chunks
    int n = 0;
    int max_iter = 0;
    int init_chunks = 0;

    Frame decode_frame(int frame_idx, const WzFrameRecord& rec, const InterpolationContext& ctx) {
        SideInfo si = estimate_side_info(ctx);
        LaplacianModel model = fit(si.residual, h.width, h.height);
        CoeffBands si_bands = frame_to_bands(si.frame);

        QuantizedBands qb;
        qb.blocks_w = si_bands.blocks_w;
        qb.blocks_h = si_bands.blocks_h;
        for (int band = 0; band < 16; ++band)
            if (m.levels[band] == 0) qb.skipped.push_back(band);

        for (const BandRecord& band : rec.bands) {
            if (band.band < 0 || band.band > 15 || m.levels[band.band] <= 0)
                throw MalformedBitstream("band record outside the matrix coded set");
            const int levels = m.levels[band.band];
            const int total_bits = plane_count(levels);
            if (band.planes.size() != static_cast<size_t>(total_bits))
                throw MalformedBitstream("plane count does not match the matrix");
            const double step =
                band.band == 0 ? 1024.0 / levels : 2.0 * band.range / levels;
            const std::vector<double>& si_co = si_bands.bands[band.band];

            std::vector<int32_t> si_bins;
            if (band.band != 0) si_bins = quantize_ac_bins(si_co, levels, band.range);
            std::vector<double> alpha_flat;
            std::span<const double> alpha;
            if (cfg.alpha_mode == AlphaMode::Coeff) {
                alpha = model.alpha_coeff[band.band];
            } else {
                alpha_flat.assign(static_cast<size_t>(n), model.alpha_band[band.band]);
                alpha = alpha_flat;
            }

            std::vector<int32_t> partial(static_cast<size_t>(n), 0);
            std::vector<int8_t> sign;
            BitPlaneSet planeset;
            planeset.band = band.band;
            planeset.levels = levels;

            for (int j = 0; j < total_bits; ++j) {
                const int bit = total_bits - 1 - j;
                PlaneContext pc;
                pc.band = band.band;
                pc.bit = bit;
                pc.total_bits = total_bits;
                pc.step = step;
                pc.si = si_co;
                pc.si_bins = si_bins;
                pc.alpha = alpha;
                pc.partial = partial;
                pc.sign = sign;
                const std::vector<double> llr = plane_llrs(pc);

                const PlaneRecord& pr = band.planes[static_cast<size_t>(j)];
                std::vector<uint8_t> acc(static_cast<size_t>(n), 0);
                std::vector<uint8_t> bits;
                int consumed = 0;
                bool accepted = false;
                bool converged = false;
                for (;;) {
                    auto grant = fb.request(frame_idx, band.band, j);
                    ++st.requests;
                    if (!grant) {
                        bits.resize(static_cast<size_t>(n));
                        for (int i = 0; i < n; ++i) bits[i] = llr[i] < 0.0 ? 1 : 0;
                        break;
                    }
                    const auto idx = code.chunk_indices(grant->step);
                    for (size_t k = 0; k < idx.size(); ++k) acc[idx[k]] = grant->bits[k];
                    ++consumed;
                    if (consumed < init_chunks && consumed < code.num_chunks) continue;
                    DecodeResult res = decode_plane(llr, acc, consumed, code, max_iter);
                    if (res.converged && verify(res.bits, pr.crc)) {
                        bits = std::move(res.bits);
                        accepted = true;
                        converged = true;
                        break;
                    }
                }
                if (!accepted) ++st.flagged_planes;
                const int64_t consumed_bits = prefix[consumed];
                st.rate.syndrome_bits += consumed_bits;
                st.rate.crc_bits += 8;
                st.rows.push_back({frame_idx, false, band.band, j, consumed, accepted,
                                   consumed_bits});
                if (cfg.keep_trace)
                    st.trace.planes.push_back(
                        {frame_idx, band.band, j, accepted, converged, consumed, bits});

                if (band.band != 0 && j == 0) {
                    sign.resize(static_cast<size_t>(n));
                    for (int i = 0; i < n; ++i) sign[i] = bits[i] ? -1 : 1;
                } else {
                    for (int i = 0; i < n; ++i)
                        if (bits[i]) partial[i] += 1 << bit;
                }
                planeset.planes.push_back(std::move(bits));
            }

            QuantizedBand decoded;
            decoded.band = band.band;
            decoded.levels = levels;
            decoded.step = step;
            decoded.range = band.band == 0 ? 0 : band.range;
            decoded.bins = bitplanes_to_bins(planeset);
            qb.coded.push_back(std::move(decoded));
            if (band.band != 0) st.rate.range_bits += 16;
        }

        CoeffBands rec_bands = reconstruct_bands(qb, si_bands);
        Frame decoded = bands_to_frame(rec_bands, frame_idx);
        if (cfg.keep_trace)
            st.trace.frames.push_back({frame_idx, std::move(qb), std::move(rec_bands)});
        return decoded;
    }
};

}  // namespace

DecodeOutput decode(const Bitstream& bs, const CodecConfig& cfg) {
    const BitstreamHeader& h = bs.header;
    if (h.width == 0 || h.height == 0 || h.width % 16 || h.height % 16)
        throw MalformedBitstream("frame dimensions must be positive multiples of 16");
    if (h.frame_count == 0) throw MalformedBitstream("empty archive");
    if (h.quant_id < 1 || h.quant_id > 8)
        throw MalformedBitstream("quantization matrix id out of range");
    const QuantMatrix& m = quant_matrix(h.quant_id);
    const IntraCodec* intra = find_intra_codec(h.key_codec);
    if (!intra) throw MalformedBitstream("unknown key-frame codec id");
    if (h.dv < 2 || h.dv > 8) throw MalformedBitstream("variable degree out of range");

    const int n = (h.width / 4) * (h.height / 4);
    const LdpcaCode code = build_code(n, h.dv, h.seed);
    ArchiveFeedback fb(bs, code);

    DecodeOutput out;
    out.sequence.fps = h.fps;
    out.sequence.frames.resize(h.frame_count);

    DecoderStats& st = out.stats;
    st.rate.header_bits = (29 + 5 * static_cast<int64_t>(bs.gops.size())) * 8;

    std::vector<int> gop_starts;
    int start = 0;
    for (const GopRecord& gop : bs.gops) {
        if (gop.size < 1 || gop.wz.size() != static_cast<size_t>(gop.size) - 1)
            throw MalformedBitstream("gop record holds wrong WZ frame count");
        gop_starts.push_back(start);
        out.sequence.frames[start] = intra->decode(gop.key_payload, h.width, h.height, start);
        st.rate.key_bits += static_cast<int64_t>(gop.key_payload.size()) * 8;
        st.rows.push_back({start, true, -1, -1, 0, true,
                           static_cast<int64_t>(gop.key_payload.size()) * 8});
        start += gop.size;
        for (const WzFrameRecord& wf : gop.wz)
            for (const BandRecord& band : wf.bands)
                st.stored_syndrome_bits += static_cast<int64_t>(band.planes.size()) * n;
    }
    if (start != static_cast<int>(h.frame_count))
        throw MalformedBitstream("gop sizes do not cover the frame count");

    WzDecoder dec{h,
                  m,
                  code,
                  cfg,
                  fb,
                  st,
                  chunk_bit_prefix(code),
                  n,
                  std::max(1, cfg.max_bp_iterations),
                  std::clamp(cfg.initial_chunks, 1, code.num_chunks)};

    for (size_t g = 0; g < bs.gops.size(); ++g) {
        const GopRecord& gop = bs.gops[g];
        const int s = gop_starts[g];
        for (const InterpStep& step : plan_interpolation(gop.size)) {
            const int target = s + step.target;
            int back = s + step.back_ref;
            int fwd = s + step.fwd_ref;
            if (fwd >= static_cast<int>(h.frame_count)) fwd = back;  // no closing key frame
            InterpolationContext ctx{&out.sequence.frames[back], &out.sequence.frames[fwd],
                                     step.tau};
            out.sequence.frames[target] =
                dec.decode_frame(target, gop.wz[static_cast<size_t>(step.target) - 1], ctx);
        }
    }
    return out;
}

RateReport rate_report(const RateBreakdown& rate, Fps fps, int frame_count) {
    if (frame_count < 1) throw EmptySequence("rate report needs at least one frame");
    const double seconds = frame_count / fps.value();
    const auto kbps = [&](int64_t bits) { return static_cast<double>(bits) / seconds / 1000.0; };
    RateReport r;
    r.kbps_header = kbps(rate.header_bits);
    r.kbps_key = kbps(rate.key_bits);
    r.kbps_syndrome = kbps(rate.syndrome_bits);
    r.kbps_crc = kbps(rate.crc_bits);
    r.kbps_range = kbps(rate.range_bits);
    r.kbps_total = kbps(rate.total());
    r.bits_per_frame = static_cast<double>(rate.total()) / frame_count;
    return r;
}

}  // namespace wz
