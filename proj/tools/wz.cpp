// Batch driver: encode / decode / psnr / rd / si-eval over raw YUV files.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wz/errors.hpp"
#include "wz/frame.hpp"
#include "wz/parallel.hpp"
#include "wz/pipeline.hpp"
#include "wz/sideinfo.hpp"

namespace {

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw wz::Error("cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (in.bad()) throw wz::Error("read error on " + path);
    return bytes;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw wz::Error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw wz::Error("write error on " + path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw wz::Error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw wz::Error("write error on " + path);
}

wz::RawLayout parse_layout(const std::string& s) {
    if (s == "y") return wz::RawLayout::YOnly;
    if (s == "yuv420") return wz::RawLayout::Yuv420;
    throw wz::Error("layout must be y or yuv420");
}

wz::Fps parse_fps(const std::string& s) {
    wz::Fps fps;
    unsigned num = 0, den = 1;
    const size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            num = static_cast<unsigned>(std::stoul(s));
        } else {
            num = static_cast<unsigned>(std::stoul(s.substr(0, slash)));
            den = static_cast<unsigned>(std::stoul(s.substr(slash + 1)));
        }
    } catch (const std::exception&) {
        throw wz::Error("fps must be N or N/D");
    }
    if (num == 0 || den == 0 || num > 0xFFFF || den > 0xFFFF)
        throw wz::Error("fps out of range");
    fps.num = static_cast<uint16_t>(num);
    fps.den = static_cast<uint16_t>(den);
    return fps;
}

// "adaptive" or a fixed length 1..255.
void parse_gop(const std::string& s, wz::CodecConfig& cfg) {
    if (s == "adaptive") {
        cfg.adaptive_gop = true;
        return;
    }
    try {
        cfg.fixed_gop = std::stoi(s);
    } catch (const std::exception&) {
        throw wz::Error("gop must be 'adaptive' or an integer");
    }
    cfg.adaptive_gop = false;
    if (cfg.fixed_gop < 1 || cfg.fixed_gop > 255)
        throw wz::Error("fixed gop length out of range [1, 255]");
}

std::pair<int, int> parse_sweep(const std::string& s) {
    const size_t dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int q = std::stoi(s);
            return {q, q};
        }
        return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw wz::Error("sweep must be A..B");
    }
}

std::string format_db(double v) {
    if (std::isinf(v)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string format_kbps(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string stats_csv(std::vector<wz::StatRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const wz::StatRow& a, const wz::StatRow& b) {
        if (a.frame != b.frame) return a.frame < b.frame;
        if (a.band != b.band) return a.band < b.band;
        return a.plane < b.plane;
    });
    std::string csv = "frame,type,band,plane,chunks_consumed,crc_ok,bits\n";
    char buf[128];
    for (const wz::StatRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%s,%d,%d,%d,%d,%lld\n", r.frame,
                      r.key ? "key" : "wz", r.band, r.plane, r.chunks_consumed, r.crc_ok ? 1 : 0,
                      static_cast<long long>(r.bits));
        csv += buf;
    }
    return csv;
}

struct IoArgs {
    std::string input;
    int width = 0;
    int height = 0;
    std::string layout = "yuv420";
    std::string fps = "15";
};

void add_io_options(CLI::App* cmd, IoArgs& io, bool with_fps) {
    cmd->add_option("--input", io.input, "raw video file")->required();
    cmd->add_option("--width", io.width, "frame width")->required();
    cmd->add_option("--height", io.height, "frame height")->required();
    cmd->add_option("--layout", io.layout, "container layout: y or yuv420");
    if (with_fps) cmd->add_option("--fps", io.fps, "frame rate, N or N/D");
}

wz::Sequence load_sequence(const IoArgs& io) {
    const auto bytes = read_file(io.input);
    wz::Sequence seq = wz::read_raw(bytes, io.width, io.height, parse_layout(io.layout));
    seq.fps = parse_fps(io.fps);
    return seq;
}

int run_encode(const IoArgs& io, const std::string& out_path, wz::CodecConfig& cfg,
               const std::string& gop) {
    parse_gop(gop, cfg);
    wz::Sequence seq = load_sequence(io);
    wz::EncodeOutput enc = wz::encode(seq, cfg);
    write_file(out_path, wz::serialize(enc.archive));
    std::fprintf(stderr, "encoded %zu frames: %zu key, %d wz, %lld bytes\n", seq.frames.size(),
                 enc.stats.plan.sizes.size(), enc.stats.wz_frames,
                 static_cast<long long>(enc.stats.archive_bytes));
    return 0;
}

int run_decode(const std::string& in_path, const std::string& out_path,
               const std::string& layout, const std::string& stats_path, wz::CodecConfig& cfg) {
    const auto bytes = read_file(in_path);
    wz::Bitstream bs = wz::parse(bytes);
    wz::DecodeOutput dec = wz::decode(bs, cfg);
    write_file(out_path, wz::write_raw(dec.sequence, parse_layout(layout)));
    if (!stats_path.empty()) write_text(stats_path, stats_csv(dec.stats.rows));
    wz::RateReport rep =
        wz::rate_report(dec.stats.rate, bs.header.fps, static_cast<int>(bs.header.frame_count));
    std::fprintf(stderr, "decoded %u frames, %s kbps consumed, %d flagged planes\n",
                 bs.header.frame_count, format_kbps(rep.kbps_total).c_str(),
                 dec.stats.flagged_planes);
    return dec.stats.flagged_planes > 0 ? 4 : 0;
}

int run_psnr(const IoArgs& a, const std::string& b_path) {
    const auto bytes_a = read_file(a.input);
    const auto bytes_b = read_file(b_path);
    const wz::RawLayout layout = parse_layout(a.layout);
    wz::Sequence sa = wz::read_raw(bytes_a, a.width, a.height, layout);
    wz::Sequence sb = wz::read_raw(bytes_b, a.width, a.height, layout);
    if (sa.frames.size() != sb.frames.size())
        throw wz::Error("sequences hold different frame counts");
    std::printf("%s\n", format_db(wz::sequence_psnr(sa, sb)).c_str());
    return 0;
}

int run_rd(const IoArgs& io, const std::string& sweep, const std::string& gop,
           const std::string& csv_path, wz::CodecConfig& cfg) {
    parse_gop(gop, cfg);
    const auto [q_lo, q_hi] = parse_sweep(sweep);
    if (q_lo < 1 || q_hi > 8 || q_lo > q_hi) throw wz::Error("sweep must lie inside 1..8");
    wz::Sequence seq = load_sequence(io);
    std::string csv = "q,kbps_total,kbps_key,kbps_wz,psnr_mean\n";
    for (int q = q_lo; q <= q_hi; ++q) {
        cfg.quant_id = q;
        wz::EncodeOutput enc = wz::encode(seq, cfg);
        wz::DecodeOutput dec = wz::decode(enc.archive, cfg);
        wz::RateReport rep =
            wz::rate_report(dec.stats.rate, seq.fps, static_cast<int>(seq.frames.size()));
        const double kbps_wz = rep.kbps_syndrome + rep.kbps_crc + rep.kbps_range;
        const double mean = wz::sequence_psnr(seq, dec.sequence);
        csv += std::to_string(q) + "," + format_kbps(rep.kbps_total) + "," +
               format_kbps(rep.kbps_key) + "," + format_kbps(kbps_wz) + "," + format_db(mean) +
               "\n";
        std::fprintf(stderr, "q=%d: %s kbps, %s dB\n", q, format_kbps(rep.kbps_total).c_str(),
                     format_db(mean).c_str());
    }
    write_text(csv_path, csv);
    return 0;
}

int run_si_eval(const IoArgs& io, int gop, const std::string& csv_path) {
    if (gop < 1 || gop > 255) throw wz::Error("gop length out of range [1, 255]");
    wz::Sequence seq = load_sequence(io);
    const int total = static_cast<int>(seq.frames.size());
    const wz::GopPlan plan = wz::plan_fixed_gops(total, gop);
    std::string csv = "frame,psnr_si,psnr_blend\n";
    int start = 0;
    for (int size : plan.sizes) {
        for (const wz::InterpStep& step : wz::plan_interpolation(size)) {
            const int target = start + step.target;
            const int back = start + step.back_ref;
            int fwd = start + step.fwd_ref;
            if (fwd >= total) fwd = back;
            wz::InterpolationContext ctx{&seq.frames[back], &seq.frames[fwd], step.tau};
            wz::SideInfo si = wz::estimate_side_info(ctx);
            wz::Frame blend = seq.frames[back];
            blend.index = target;
            for (size_t i = 0; i < blend.luma.size(); ++i) {
                const double v = (1.0 - step.tau) * seq.frames[back].luma[i] +
                                 step.tau * seq.frames[fwd].luma[i];
                blend.luma[i] = static_cast<uint8_t>(std::lround(v));
            }
            csv += std::to_string(target) + "," +
                   format_db(wz::psnr(si.frame, seq.frames[target])) + "," +
                   format_db(wz::psnr(blend, seq.frames[target])) + "\n";
        }
        start += size;
    }
    write_text(csv_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transform-domain Wyner-Ziv video codec"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap, 0 = auto");

    IoArgs enc_io;
    std::string enc_out, enc_gop = "2";
    wz::CodecConfig cfg;
    CLI::App* enc = app.add_subcommand("encode", "compress a raw video");
    add_io_options(enc, enc_io, true);
    enc->add_option("--q", cfg.quant_id, "quantization matrix id 1..8")->required();
    enc->add_option("--gop", enc_gop, "'adaptive' or a fixed GOP length");
    enc->add_option("--gop-threshold", cfg.activity.threshold,
                    "cumulative activity closing an adaptive GOP");
    enc->add_option("--key-qp", cfg.key_qp, "key-qp override, -1 = per-matrix default");
    enc->add_option("--seed", cfg.seed, "syndrome code seed");
    enc->add_option("--out", enc_out, "output archive")->required();

    std::string dec_in, dec_out, dec_layout = "yuv420", dec_stats;
    CLI::App* dec = app.add_subcommand("decode", "decompress an archive");
    dec->add_option("--in", dec_in, "input archive")->required();
    dec->add_option("--out", dec_out, "output raw video")->required();
    dec->add_option("--layout", dec_layout, "container layout: y or yuv420");
    dec->add_option("--stats", dec_stats, "per-plane stats CSV path");

    IoArgs psnr_io;
    std::string psnr_b;
    CLI::App* ps = app.add_subcommand("psnr", "luma PSNR between two raw videos");
    ps->add_option("--a", psnr_io.input, "first raw video")->required();
    ps->add_option("--b", psnr_b, "second raw video")->required();
    ps->add_option("--width", psnr_io.width, "frame width")->required();
    ps->add_option("--height", psnr_io.height, "frame height")->required();
    ps->add_option("--layout", psnr_io.layout, "container layout: y or yuv420");

    IoArgs rd_io;
    std::string rd_sweep = "1..8", rd_gop = "2", rd_csv;
    CLI::App* rd = app.add_subcommand("rd", "rate-distortion sweep over matrices");
    add_io_options(rd, rd_io, true);
    rd->add_option("--sweep", rd_sweep, "matrix id range A..B");
    rd->add_option("--gop", rd_gop, "'adaptive' or a fixed GOP length");
    rd->add_option("--gop-threshold", cfg.activity.threshold,
                    "cumulative activity closing an adaptive GOP");
    rd->add_option("--csv", rd_csv, "output CSV")->required();

    IoArgs si_io;
    int si_gop = 2;
    std::string si_csv;
    CLI::App* si = app.add_subcommand("si-eval", "interpolation quality against the source");
    add_io_options(si, si_io, true);
    si->add_option("--gop", si_gop, "fixed GOP length");
    si->add_option("--csv", si_csv, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    wz::set_worker_threads(threads);
    try {
        if (enc->parsed()) return run_encode(enc_io, enc_out, cfg, enc_gop);
        if (dec->parsed()) return run_decode(dec_in, dec_out, dec_layout, dec_stats, cfg);
        if (ps->parsed()) return run_psnr(psnr_io, psnr_b);
        if (rd->parsed()) return run_rd(rd_io, rd_sweep, rd_gop, rd_csv, cfg);
        if (si->parsed()) return run_si_eval(si_io, si_gop, si_csv);
    } catch (const wz::MalformedBitstream& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const wz::CorruptPayload& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
