// jump_detect.hpp — detector for sudden steps in sampled curves, used to
// locate transition points in sweep outputs.

#pragma once

#include <utility>
#include <vector>

namespace qpt {

// Detector thresholds (recorded in run summaries for auditability).
inline constexpr int kJumpWindow = 10;          // neighbor half-window in steps
inline constexpr double kJumpSigmaFactor = 5.0; // mean + 5·stddev local test
inline constexpr double kJumpFloorFactor = 10.0;  // absolute floor: 10 × median

struct Jump {
    double x = 0.0;          // midpoint of the flagged interval
    double magnitude = 0.0;  // |Δy| across it
};

// Flags interval i when |Δy_i| exceeds mean + 5·stddev of the neighboring
// |Δy| (±10 intervals, excluding i) and exceeds 10× the median |Δy| of the
// whole curve. Requires ≥ 3 points sorted in x.
std::vector<Jump> detect_jump(const std::vector<double>& xs,
                              const std::vector<double>& ys);
std::vector<Jump> detect_jump(const std::vector<std::pair<double, double>>& curve);

}  // namespace qpt
