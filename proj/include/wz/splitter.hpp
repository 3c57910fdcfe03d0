#pragma once

#include <array>
#include <vector>

#include "wz/frame.hpp"

namespace wz {

// Result of GOP planning: sizes[g] frames per group, the first frame of each
// group is intra-coded, the rest are coded as WZ frames.
struct GopPlan {
    std::vector<int> sizes;
    int total = 0;
};

// Tuning for the adaptive splitter. Weights apply, in order, to
// diff_of_histograms, histogram_of_difference, block_histogram_difference
// and block_variance_difference, and must sum to 1.
struct ActivityConfig {
    double threshold = 0.35;
    int max_gop = 8;
    std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
    int block_size = 8;
};

// Frame-activity metrics. All return 0 for identical frames; the first three
// are bounded by 1, the variance metric is normalized by the 255^2 peak.
double diff_of_histograms(const Frame& f1, const Frame& f2);
double histogram_of_difference(const Frame& f1, const Frame& f2);
double block_histogram_difference(const Frame& f1, const Frame& f2, int block);
double block_variance_difference(const Frame& f1, const Frame& f2, int block);

// Weighted combination of the four metrics per cfg.weights.
double motion_activity(const Frame& f1, const Frame& f2, const ActivityConfig& cfg);

// Greedy scan: a GOP closes as soon as adding the next frame-pair activity
// would reach cfg.threshold, or when it holds cfg.max_gop frames. The last
// GOP may be short.
GopPlan plan_gops(const Sequence& seq, const ActivityConfig& cfg);

// Metric-free planning with a constant GOP length.
GopPlan plan_fixed_gops(int frame_count, int gop);

}  // namespace wz
