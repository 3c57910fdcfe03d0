#pragma once

#include <cstdint>
#include <vector>

#include "wz/frame.hpp"

namespace wz {

// Half-pel motion vector. In bidirectional fields fwd/bwd are the offsets of
// the forward and backward reference blocks relative to the interpolated
// block; a forward-ME field keeps its match offset (into the backward
// reference) in fwd.
struct MotionVec {
    int dx = 0;
    int dy = 0;
};

struct BlockMotion {
    MotionVec fwd;
    MotionVec bwd;
    uint32_t cost = 0;  // SAD of the chosen match
};

struct MotionField {
    int block = 16;
    int grid_w = 0;
    int grid_h = 0;
    std::vector<BlockMotion> blocks;

    const BlockMotion& at(int bx, int by) const { return blocks[size_t(by) * grid_w + bx]; }
    BlockMotion& at(int bx, int by) { return blocks[size_t(by) * grid_w + bx]; }
};

// References bracketing the frame to interpolate; tau is its normalized
// temporal position between them.
struct InterpolationContext {
    const Frame* back = nullptr;
    const Frame* fwd = nullptr;
    double tau = 0.5;
};

// (2w-1) x (2h-1) plane holding bilinearly upsampled half-pel samples;
// integer-pel samples sit at even coordinates.
struct HalfPelPlane {
    int w = 0;
    int h = 0;
    std::vector<uint8_t> s;

    uint8_t sample(int x, int y) const {
        x = x < 0 ? 0 : (x >= w ? w - 1 : x);
        y = y < 0 ? 0 : (y >= h ? h - 1 : y);
        return s[size_t(y) * w + x];
    }
};

HalfPelPlane upsample_half(const Frame& f);

// Exhaustive integer-pel SAD search matching each 16x16 block of the forward
// reference into the backward one. Offsets are capped at +/-range pixels and
// candidate windows stay inside the frame; ties prefer the shortest vector
// (|dx|+|dy|, then dy, then dx). Vectors are stored in half-pel units.
MotionField forward_me(const InterpolationContext& ctx, int block = 16, int range = 32);

// Bidirectional field for the interpolated frame. At block=16 `prev` is the
// forward-ME field: each block adopts the candidate whose motion trajectory
// passes nearest its center and splits it across the references by tau. At
// block=8 `prev` is the 16x16 bidirectional field and each block inherits its
// parent's pair. Either way the pair is then refined by a symmetric half-pel
// search (+/-2 steps, widened to +/-4 where neighboring blocks disagree by
// more than 4 half-pel units).
MotionField bidirectional_me(const InterpolationContext& ctx, const MotionField& prev,
                             int block, const HalfPelPlane& half_b, const HalfPelPlane& half_f);

// Weighted vector-median smoothing over the 3x3 neighborhood; low-SAD
// neighbors weigh more, and the output pair is always one of the inputs.
MotionField smooth_motion(const MotionField& field);

// Bidirectional compensation: round((1-tau)*P_b + tau*P_f) per pixel.
Frame interpolate(const InterpolationContext& ctx, const MotionField& field,
                  const HalfPelPlane& half_b, const HalfPelPlane& half_f);
Frame interpolate(const InterpolationContext& ctx, const MotionField& field);

// Half the motion-compensated reference difference, (P_b - P_f)/2 — the
// correlation-noise observation fed to the Laplacian fit.
std::vector<double> residual_frame(const InterpolationContext& ctx, const MotionField& field,
                                   const HalfPelPlane& half_b, const HalfPelPlane& half_f);
std::vector<double> residual_frame(const InterpolationContext& ctx, const MotionField& field);

// One interpolation assignment inside a GOP, indices local to it (0 and gop
// are the bracketing key frames).
struct InterpStep {
    int target = 0;
    int back_ref = 0;
    int fwd_ref = 0;
    double tau = 0.5;
};

// Dyadic schedule: the floor-midpoint frame is interpolated from the keys
// first, then each half recursively, so every step's references are already
// decoded when it runs.
std::vector<InterpStep> plan_interpolation(int gop);

// Whole estimation chain (Figure-style 16 -> 8 hierarchy with smoothing):
// forward ME, two bidirectional passes, vector-median smoothing, then
// compensation. Returns the SI frame and the noise-model residual.
struct SideInfo {
    Frame frame;
    std::vector<double> residual;
    MotionField field;
};
SideInfo estimate_side_info(const InterpolationContext& ctx);

}  // namespace wz
