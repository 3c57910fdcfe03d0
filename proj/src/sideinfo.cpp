#include "wz/sideinfo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wz/parallel.hpp"

namespace wz {

namespace {

void check_ctx(const InterpolationContext& ctx) {
    if (!ctx.back || !ctx.fwd) throw Error("interpolation context missing references");
    if (ctx.back->width != ctx.fwd->width || ctx.back->height != ctx.fwd->height)
        throw DimensionMismatch("reference frames differ in size");
    if (!(ctx.tau > 0.0 && ctx.tau < 1.0)) throw Error("tau must lie strictly inside (0,1)");
}

uint32_t sad_intpel(const Frame& a, int ax, int ay, const Frame& b, int bx, int by, int block) {
    uint32_t sad = 0;
    for (int y = 0; y < block; ++y) {
        const uint8_t* pa = a.luma.data() + size_t(ay + y) * a.width + ax;
        const uint8_t* pb = b.luma.data() + size_t(by + y) * b.width + bx;
        for (int x = 0; x < block; ++x) sad += uint32_t(std::abs(int(pa[x]) - int(pb[x])));
    }
    return sad;
}

// SAD between the two half-pel-compensated reference blocks of an
// interpolated block at pixel position (px, py).
uint32_t sad_bidir(const HalfPelPlane& hb, const HalfPelPlane& hf, int px, int py, int block,
                   MotionVec vb, MotionVec vf) {
    uint32_t sad = 0;
    int bx = 2 * px + vb.dx, by = 2 * py + vb.dy;
    int fx = 2 * px + vf.dx, fy = 2 * py + vf.dy;
    bool inside = bx >= 0 && by >= 0 && fx >= 0 && fy >= 0 && bx + 2 * (block - 1) < hb.w &&
                  by + 2 * (block - 1) < hb.h && fx + 2 * (block - 1) < hf.w &&
                  fy + 2 * (block - 1) < hf.h;
    if (inside) {
        for (int y = 0; y < block; ++y) {
            const uint8_t* pb = hb.s.data() + size_t(by + 2 * y) * hb.w + bx;
            const uint8_t* pf = hf.s.data() + size_t(fy + 2 * y) * hf.w + fx;
            for (int x = 0; x < block; ++x)
                sad += uint32_t(std::abs(int(pb[2 * x]) - int(pf[2 * x])));
        }
    } else {
        for (int y = 0; y < block; ++y)
            for (int x = 0; x < block; ++x)
                sad += uint32_t(std::abs(int(hb.sample(bx + 2 * x, by + 2 * y)) -
                                         int(hf.sample(fx + 2 * x, fy + 2 * y))));
    }
    return sad;
}

bool shorter(MotionVec a, MotionVec b) {
    int la = std::abs(a.dx) + std::abs(a.dy);
    int lb = std::abs(b.dx) + std::abs(b.dy);
    if (la != lb) return la < lb;
    if (a.dy != b.dy) return a.dy < b.dy;
    return a.dx < b.dx;
}

int scale_round(int v, double factor) {
    return int(std::llround(v * factor));
}

}  // namespace

HalfPelPlane upsample_half(const Frame& f) {
    HalfPelPlane h;
    h.w = 2 * f.width - 1;
    h.h = 2 * f.height - 1;
    h.s.resize(size_t(h.w) * h.h);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            int a = f.at(x, y);
            h.s[size_t(2 * y) * h.w + 2 * x] = uint8_t(a);
            if (x + 1 < f.width)
                h.s[size_t(2 * y) * h.w + 2 * x + 1] = uint8_t((a + f.at(x + 1, y) + 1) >> 1);
            if (y + 1 < f.height)
                h.s[size_t(2 * y + 1) * h.w + 2 * x] = uint8_t((a + f.at(x, y + 1) + 1) >> 1);
            if (x + 1 < f.width && y + 1 < f.height)
                h.s[size_t(2 * y + 1) * h.w + 2 * x + 1] = uint8_t(
                    (a + f.at(x + 1, y) + f.at(x, y + 1) + f.at(x + 1, y + 1) + 2) >> 2);
        }
    return h;
}

MotionField forward_me(const InterpolationContext& ctx, int block, int range) {
    check_ctx(ctx);
    const Frame& xb = *ctx.back;
    const Frame& xf = *ctx.fwd;
    if (xf.width % block != 0 || xf.height % block != 0)
        throw BadBlockSize("ME block must tile the frame");
    MotionField field;
    field.block = block;
    field.grid_w = xf.width / block;
    field.grid_h = xf.height / block;
    field.blocks.resize(size_t(field.grid_w) * field.grid_h);
    parallel_for(int(field.blocks.size()), [&](int bi) {
        int px = (bi % field.grid_w) * block;
        int py = (bi / field.grid_w) * block;
        uint32_t best_sad = std::numeric_limits<uint32_t>::max();
        MotionVec best{0, 0};
        int dy_lo = std::max(-range, -py), dy_hi = std::min(range, xb.height - block - py);
        int dx_lo = std::max(-range, -px), dx_hi = std::min(range, xb.width - block - px);
        for (int dy = dy_lo; dy <= dy_hi; ++dy)
            for (int dx = dx_lo; dx <= dx_hi; ++dx) {
                uint32_t sad = sad_intpel(xf, px, py, xb, px + dx, py + dy, block);
                MotionVec cand{dx, dy};
                if (sad < best_sad || (sad == best_sad && shorter(cand, best))) {
                    best_sad = sad;
                    best = cand;
                }
            }
        BlockMotion& bm = field.blocks[bi];
        bm.fwd = {2 * best.dx, 2 * best.dy};  // half-pel units
        bm.bwd = {0, 0};
        bm.cost = best_sad;
    });
    return field;
}

MotionField bidirectional_me(const InterpolationContext& ctx, const MotionField& prev,
                             int block, const HalfPelPlane& half_b, const HalfPelPlane& half_f) {
    check_ctx(ctx);
    const Frame& xf = *ctx.fwd;
    if (xf.width % block != 0 || xf.height % block != 0)
        throw BadBlockSize("ME block must tile the frame");
    double tau = ctx.tau;

    MotionField field;
    field.block = block;
    field.grid_w = xf.width / block;
    field.grid_h = xf.height / block;
    field.blocks.resize(size_t(field.grid_w) * field.grid_h);

    if (block == prev.block) {
        // First bidirectional pass: pick, per block, the forward-ME candidate
        // whose motion trajectory passes closest to the block center, then
        // split the implied content motion d = -v across the references.
        parallel_for(int(field.blocks.size()), [&](int bi) {
            int bx = bi % field.grid_w, by = bi / field.grid_w;
            double cx = bx * block + (block - 1) / 2.0;
            double cy = by * block + (block - 1) / 2.0;
            double best_dist = std::numeric_limits<double>::max();
            MotionVec best{0, 0};
            for (size_t j = 0; j < prev.blocks.size(); ++j) {
                int jx = int(j) % prev.grid_w, jy = int(j) / prev.grid_w;
                double ox = jx * prev.block + (prev.block - 1) / 2.0;
                double oy = jy * prev.block + (prev.block - 1) / 2.0;
                MotionVec v = prev.blocks[j].fwd;
                double dist;
                if (v.dx == 0 && v.dy == 0) {
                    dist = std::hypot(cx - ox, cy - oy);
                } else {
                    // Trajectory from (center + v) in x_b to center in x_f;
                    // direction -v. Perpendicular distance of (cx, cy).
                    double vx = -v.dx / 2.0, vy = -v.dy / 2.0;
                    double ax = ox + v.dx / 2.0, ay = oy + v.dy / 2.0;
                    double cross = vx * (cy - ay) - vy * (cx - ax);
                    dist = std::abs(cross) / std::hypot(vx, vy);
                }
                if (dist < best_dist) {
                    best_dist = dist;
                    best = v;
                }
            }
            MotionVec d{-best.dx, -best.dy};  // content motion, half-pel
            field.blocks[bi].fwd = {scale_round(d.dx, 1.0 - tau), scale_round(d.dy, 1.0 - tau)};
            field.blocks[bi].bwd = {scale_round(d.dx, -tau), scale_round(d.dy, -tau)};
        });
    } else if (2 * block == prev.block) {
        // Hierarchy step: each child inherits its parent's refined pair.
        for (int by = 0; by < field.grid_h; ++by)
            for (int bx = 0; bx < field.grid_w; ++bx)
                field.at(bx, by) = prev.at(bx / 2, by / 2);
    } else {
        throw BadBlockSize("bidirectional pass expects same or half the previous block size");
    }

    // Symmetric half-pel refinement around the initial pair. The window grows
    // where the initial field disagrees with a 4-neighbor by more than 4
    // half-pel units in either component.
    std::vector<BlockMotion> initial = field.blocks;
    double back_scale = -tau / (1.0 - tau);
    parallel_for(int(field.blocks.size()), [&](int bi) {
        int bx = bi % field.grid_w, by = bi / field.grid_w;
        MotionVec base_f = initial[bi].fwd;
        MotionVec base_b = initial[bi].bwd;
        int window = 2;
        const int nx[4] = {bx - 1, bx + 1, bx, bx};
        const int ny[4] = {by, by, by - 1, by + 1};
        for (int i = 0; i < 4; ++i) {
            if (nx[i] < 0 || ny[i] < 0 || nx[i] >= field.grid_w || ny[i] >= field.grid_h)
                continue;
            MotionVec nv = initial[size_t(ny[i]) * field.grid_w + nx[i]].fwd;
            if (std::abs(nv.dx - base_f.dx) > 4 || std::abs(nv.dy - base_f.dy) > 4) {
                window = 4;
                break;
            }
        }
        int px = bx * block, py = by * block;
        uint32_t best_sad = std::numeric_limits<uint32_t>::max();
        MotionVec best_d{0, 0};
        BlockMotion best{};
        for (int dy = -window; dy <= window; ++dy)
            for (int dx = -window; dx <= window; ++dx) {
                MotionVec vf{base_f.dx + dx, base_f.dy + dy};
                MotionVec vb{base_b.dx + scale_round(dx, back_scale),
                             base_b.dy + scale_round(dy, back_scale)};
                uint32_t sad = sad_bidir(half_b, half_f, px, py, block, vb, vf);
                MotionVec d{dx, dy};
                if (sad < best_sad || (sad == best_sad && shorter(d, best_d))) {
                    best_sad = sad;
                    best_d = d;
                    best = {vf, vb, sad};
                }
            }
        field.blocks[bi] = best;
    });
    return field;
}

MotionField smooth_motion(const MotionField& field) {
    MotionField out = field;
    double area = double(field.block) * field.block;
    for (int by = 0; by < field.grid_h; ++by)
        for (int bx = 0; bx < field.grid_w; ++bx) {
            // Gather the 3x3 neighborhood (raster order, center included).
            BlockMotion neigh[9];
            double weight[9];
            int count = 0;
            for (int oy = -1; oy <= 1; ++oy)
                for (int ox = -1; ox <= 1; ++ox) {
                    int nx = bx + ox, ny = by + oy;
                    if (nx < 0 || ny < 0 || nx >= field.grid_w || ny >= field.grid_h) continue;
                    const BlockMotion& bm = field.at(nx, ny);
                    neigh[count] = bm;
                    weight[count] = 1.0 / (1.0 + bm.cost / area);
                    ++count;
                }
            // Weighted vector median over the candidates themselves.
            double best_cost = std::numeric_limits<double>::max();
            int best = 0;
            for (int c = 0; c < count; ++c) {
                double cost = 0.0;
                for (int j = 0; j < count; ++j) {
                    double ddx = neigh[c].fwd.dx - neigh[j].fwd.dx;
                    double ddy = neigh[c].fwd.dy - neigh[j].fwd.dy;
                    cost += weight[j] * std::sqrt(ddx * ddx + ddy * ddy);
                }
                if (cost < best_cost) {
                    best_cost = cost;
                    best = c;
                }
            }
            out.at(bx, by) = neigh[best];
        }
    return out;
}

Frame interpolate(const InterpolationContext& ctx, const MotionField& field,
                  const HalfPelPlane& half_b, const HalfPelPlane& half_f) {
    check_ctx(ctx);
    const Frame& xf = *ctx.fwd;
    Frame out;
    out.width = xf.width;
    out.height = xf.height;
    out.luma.resize(size_t(out.width) * out.height);
    int block = field.block;
    double tau = ctx.tau;
    for (int by = 0; by < field.grid_h; ++by)
        for (int bx = 0; bx < field.grid_w; ++bx) {
            const BlockMotion& bm = field.at(bx, by);
            int px = bx * block, py = by * block;
            for (int y = 0; y < block; ++y)
                for (int x = 0; x < block; ++x) {
                    double pb = half_b.sample(2 * (px + x) + bm.bwd.dx, 2 * (py + y) + bm.bwd.dy);
                    double pf = half_f.sample(2 * (px + x) + bm.fwd.dx, 2 * (py + y) + bm.fwd.dy);
                    long v = std::lround((1.0 - tau) * pb + tau * pf);
                    out.at(px + x, py + y) = uint8_t(std::clamp(v, 0L, 255L));
                }
        }
    return out;
}

Frame interpolate(const InterpolationContext& ctx, const MotionField& field) {
    return interpolate(ctx, field, upsample_half(*ctx.back), upsample_half(*ctx.fwd));
}

std::vector<double> residual_frame(const InterpolationContext& ctx, const MotionField& field,
                                   const HalfPelPlane& half_b, const HalfPelPlane& half_f) {
    check_ctx(ctx);
    const Frame& xf = *ctx.fwd;
    std::vector<double> out(size_t(xf.width) * xf.height);
    int block = field.block;
    for (int by = 0; by < field.grid_h; ++by)
        for (int bx = 0; bx < field.grid_w; ++bx) {
            const BlockMotion& bm = field.at(bx, by);
            int px = bx * block, py = by * block;
            for (int y = 0; y < block; ++y)
                for (int x = 0; x < block; ++x) {
                    double pb = half_b.sample(2 * (px + x) + bm.bwd.dx, 2 * (py + y) + bm.bwd.dy);
                    double pf = half_f.sample(2 * (px + x) + bm.fwd.dx, 2 * (py + y) + bm.fwd.dy);
                    out[size_t(py + y) * xf.width + px + x] = (pb - pf) / 2.0;
                }
        }
    return out;
}

std::vector<double> residual_frame(const InterpolationContext& ctx, const MotionField& field) {
    return residual_frame(ctx, field, upsample_half(*ctx.back), upsample_half(*ctx.fwd));
}

namespace {
void plan_recurse(int lo, int hi, std::vector<InterpStep>& out) {
    if (hi - lo < 2) return;
    int mid = (lo + hi) / 2;
    out.push_back({mid, lo, hi, double(mid - lo) / (hi - lo)});
    plan_recurse(lo, mid, out);
    plan_recurse(mid, hi, out);
}
}  // namespace

std::vector<InterpStep> plan_interpolation(int gop) {
    if (gop < 1) throw Error("GOP size must be >= 1");
    std::vector<InterpStep> steps;
    plan_recurse(0, gop, steps);
    return steps;
}

SideInfo estimate_side_info(const InterpolationContext& ctx) {
    check_ctx(ctx);
    HalfPelPlane hb = upsample_half(*ctx.back);
    HalfPelPlane hf = upsample_half(*ctx.fwd);
    MotionField f16 = forward_me(ctx, 16, 32);
    MotionField b16 = bidirectional_me(ctx, f16, 16, hb, hf);
    MotionField b8 = bidirectional_me(ctx, b16, 8, hb, hf);
    MotionField sm = smooth_motion(b8);
    SideInfo si;
    si.frame = interpolate(ctx, sm, hb, hf);
    si.residual = residual_frame(ctx, sm, hb, hf);
    si.field = std::move(sm);
    return si;
}

}  // namespace wz
