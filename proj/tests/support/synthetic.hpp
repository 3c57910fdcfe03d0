#pragma once

// Deterministic synthetic content shared by the test suites: seeded noise,
// smooth textures, and translating clips cropped from a larger master plane.

#include <cmath>
#include <cstdint>
#include <vector>

#include "wz/frame.hpp"

namespace synth {

struct Rng {
    uint64_t state = 0x853c49e6748fea9bull;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double unit() { return (next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi].
    int range(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }

    // Laplacian with parameter alpha via inverse CDF.
    double laplace(double alpha) {
        double u = unit() - 0.5;
        double mag = -std::log(1.0 - 2.0 * std::abs(u)) / alpha;
        return u < 0 ? -mag : mag;
    }
};

// Smooth low-frequency texture: a sum of random cosine waves mapped into
// [16, 240] so translation never saturates.
inline std::vector<double> smooth_field(int w, int h, uint64_t seed, int waves = 8) {
    Rng rng(seed);
    struct Wave {
        double fx, fy, phase, amp;
    };
    std::vector<Wave> ws(waves);
    double total = 0;
    for (Wave& v : ws) {
        v.fx = rng.uniform(-0.045, 0.045);
        v.fy = rng.uniform(-0.045, 0.045);
        v.phase = rng.uniform(0, 6.283185307179586);
        v.amp = rng.uniform(0.4, 1.0);
        total += v.amp;
    }
    std::vector<double> field(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0;
            for (const Wave& v : ws)
                s += v.amp * std::cos(6.283185307179586 * (v.fx * x + v.fy * y) + v.phase);
            field[static_cast<size_t>(y) * w + x] = 128.0 + 112.0 * (s / total);
        }
    return field;
}

inline wz::Frame frame_from_field(const std::vector<double>& field, int field_w, int x0, int y0,
                                  int w, int h, int index) {
    wz::Frame f;
    f.width = w;
    f.height = h;
    f.index = index;
    f.luma.resize(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = field[static_cast<size_t>(y0 + y) * field_w + (x0 + x)];
            long r = std::lround(v);
            f.luma[static_cast<size_t>(y) * w + x] =
                static_cast<uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
        }
    return f;
}

inline wz::Frame smooth_frame(int w, int h, uint64_t seed) {
    return frame_from_field(smooth_field(w, h, seed), w, 0, 0, w, h, 0);
}

inline wz::Frame random_frame(int w, int h, uint64_t seed) {
    Rng rng(seed);
    wz::Frame f;
    f.width = w;
    f.height = h;
    f.luma.resize(static_cast<size_t>(w) * h);
    for (auto& p : f.luma) p = static_cast<uint8_t>(rng.next() & 0xFF);
    return f;
}

// Crops `frames` windows from one smooth master, sliding by an integer
// (dx, dy) per frame: rigid translation with no boundary effects.
inline wz::Sequence translating_clip(int w, int h, int frames, int dx, int dy, uint64_t seed) {
    const int margin = 8;
    const int span_x = std::abs(dx) * (frames - 1);
    const int span_y = std::abs(dy) * (frames - 1);
    const int mw = w + span_x + 2 * margin;
    const int mh = h + span_y + 2 * margin;
    const std::vector<double> master = smooth_field(mw, mh, seed);
    const int base_x = margin + (dx < 0 ? span_x : 0);
    const int base_y = margin + (dy < 0 ? span_y : 0);
    wz::Sequence seq;
    for (int t = 0; t < frames; ++t)
        seq.frames.push_back(
            frame_from_field(master, mw, base_x + dx * t, base_y + dy * t, w, h, t));
    return seq;
}

// Mostly-static clip: a master texture whose crop window steps one pixel
// every `period` frames — the low-motion end-to-end workload.
inline wz::Sequence low_motion_clip(int w, int h, int frames, int period, uint64_t seed) {
    const int steps = (frames - 1) / period;
    const int margin = 8;
    const int mw = w + steps + 2 * margin;
    const int mh = h + 2 * margin;
    const std::vector<double> master = smooth_field(mw, mh, seed);
    wz::Sequence seq;
    for (int t = 0; t < frames; ++t)
        seq.frames.push_back(frame_from_field(master, mw, margin + t / period, margin, w, h, t));
    return seq;
}

}  // namespace synth
