#pragma once

#include <cmath>

#include "popdyn/types.hpp"

namespace popdyn {

/// Reduce an angle to the half-open interval (-pi, pi].
/// wrap_angle(pi) == pi and wrap_angle(-pi) == pi. Values already in
/// range pass through unchanged (bit-exact).
inline double wrap_angle(double x) {
    if (x > -kPi && x <= kPi) return x;
    double y = std::fmod(x + kPi, kTwoPi);
    if (y <= 0.0) y += kTwoPi;
    return y - kPi;
}

/// Sign with sgn(0) = 0.
inline double sgn(double x) { return (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Representative of x mod 2*pi in [0, 2*pi).
inline double positive_arc(double x) {
    double y = x - kTwoPi * std::floor(x / kTwoPi);
    if (y >= kTwoPi) y -= kTwoPi;  // floor rounding at the seam
    if (y < 0.0) y += kTwoPi;
    return y;
}

/// Distance between two circle points, in [0, pi].
inline double circle_dist(double a, double b) { return std::abs(wrap_angle(a - b)); }

inline AngleConfig wrap_angles(const AngleConfig& t) {
    return {wrap_angle(t.theta1), wrap_angle(t.theta2)};
}

}  // namespace popdyn
