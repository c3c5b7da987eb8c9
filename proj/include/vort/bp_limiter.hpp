#pragma once

#include <span>
#include <vector>

#include "vort/grid.hpp"

namespace vort {

struct BpBounds {
    double m = 0.0, M = 1.0;
};

/// Circular run of indices on a periodic line: begin, begin+1, ..., begin+len-1 (mod n).
struct IndexRun {
    int begin = 0;
    int len = 0;
};

/// Decomposition of a periodic line into saw-tooth sets (class I) and their
/// complements (class II), given bounds [m, M]:
///  - a class-I set is a maximal run of out-of-range values containing both an
///    undershoot and an overshoot, extended by the flanking in-range points;
///  - class-II sets span from one class-I boundary point to the next
///    (endpoints shared); with no class-I sets the whole line is one class-II
///    set. When a mixed run cannot gain two distinct flanking points (fewer
///    than two points in range), the whole line degenerates to one class-II
///    set (degenerate flag set).
struct SetDecomposition {
    std::vector<IndexRun> class1;
    std::vector<IndexRun> class2;
    bool degenerate = false;
};

SetDecomposition classify_sets(std::span<const double> u, BpBounds b);

struct BpLineStats {
    int class1_sets = 0;
    int limited_points = 0;
    int precondition_violations = 0;
    // Per class-I set: sum the redistribution must reproduce (post-donation,
    // pre-clamp) and the actually achieved sum.
    std::vector<double> set_target_sums, set_final_sums;
};

/// In-place scale-invariant limiter for one periodic line whose weighted
/// averages (u_{i-1} + a u_i + u_{i+1})/(a+2) lie in [m, M]:
///  - separated out-of-range points donate their surplus/deficit to their
///    in-range neighbors, weighted by the neighbors' headroom (class II);
///  - saw-tooth sets are clamped and the clamping error is redistributed
///    proportionally to the remaining headroom within the set (class I);
///  - mixed excursions without two distinct flanks (possible on very short
///    lines) are clamped and redistributed over the whole circle.
/// Output lies in [m, M] and the line sum is conserved. Precondition
/// violations degrade to clamping with best-effort redistribution and are
/// counted, never fatal. Requires a >= 2 and m < M.
void bp_limit_line(std::span<double> u, BpBounds b, double a, BpLineStats* stats = nullptr);

struct BpFieldStats {
    long precondition_violations = 0;
    long limited_points = 0;
};

/// Dimension-by-dimension limiting of point values whose weighted average
/// W1x W1y omega lies in [m, M]: limit x-lines of W1y omega with a = 4,
/// recover through W1y^{-1}, limit y-lines with a = 4.
Field2D bp_limit_2d_euler(const Field2D& omega, BpBounds b, BpFieldStats* stats = nullptr);

/// Two-stage variant for the viscous scheme, for omega whose doubly weighted
/// average W2 W1 omega lies in [m, M]: stage one limits W2x W2y omega with
/// a = 4 (W1 recovery pattern), stage two recovers through W2^{-1} and limits
/// with a = 10.
Field2D bp_limit_2d_ns(const Field2D& omega, BpBounds b, BpFieldStats* stats = nullptr);

}  // namespace vort
