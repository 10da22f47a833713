#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "lakefind/common.hpp"

namespace lakefind {

/// Two-sample Kolmogorov-Smirnov statistic: the supremum gap between the
/// empirical CDFs of two sorted samples. Ties are handled by advancing both
/// walks through equal values before the gap is measured.
inline double ks_statistic(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw ParamError("ks_statistic needs non-empty samples");
    const double step_a = 1.0 / static_cast<double>(a.size());
    const double step_b = 1.0 / static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double fa = 0.0, fb = 0.0, sup = 0.0;
    while (ia < a.size() && ib < b.size()) {
        double x = a[ia] < b[ib] ? a[ia] : b[ib];
        while (ia < a.size() && a[ia] == x) {
            fa += step_a;
            ++ia;
        }
        while (ib < b.size() && b[ib] == x) {
            fb += step_b;
            ++ib;
        }
        double gap = std::fabs(fa - fb);
        if (gap > sup) sup = gap;
    }
    // whichever sample remains, the other CDF is already at 1
    if (ia < a.size() || ib < b.size()) {
        double gap = std::fabs((ia < a.size() ? fa : 1.0) - (ib < b.size() ? fb : 1.0));
        if (gap > sup) sup = gap;
    }
    return sup > 1.0 ? 1.0 : sup;
}

/// Distribution distance between two numeric extents under the index-evidence
/// guard: the KS statistic when the guard holds and both samples have at
/// least two values, otherwise 1 (maximally distant / insufficient sample).
inline double numeric_distance(const std::vector<double>& a_sorted,
                               const std::vector<double>& b_sorted, bool guard_satisfied) {
    if (!guard_satisfied) return 1.0;
    if (a_sorted.size() < 2 || b_sorted.size() < 2) return 1.0;
    return ks_statistic(a_sorted, b_sorted);
}

}  // namespace lakefind
