#pragma once

#include <array>
#include <cmath>
#include <random>

#include "popdyn/angles.hpp"
#include "popdyn/linkage.hpp"
#include "popdyn/types.hpp"

namespace popdyn::test {

// Deterministic generators; every test seeds its own engine.
inline std::mt19937 rng(unsigned seed) { return std::mt19937(seed); }

inline double uniform(std::mt19937& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline AngleConfig random_angles(std::mt19937& g, double margin = 0.0) {
    return {uniform(g, -kPi + margin, kPi - margin), uniform(g, -kPi + margin, kPi - margin)};
}

inline BarLengths random_bars(std::mt19937& g, double lo = 0.2, double hi = 3.0) {
    return {uniform(g, lo, hi), uniform(g, lo, hi), uniform(g, lo, hi)};
}

// Bars with the floating link extremal (the dense-orbit length condition),
// plus an L drawn from the interior of Lambda.
inline Linkage random_theorem_linkage(std::mt19937& g) {
    double l1 = uniform(g, 0.5, 2.5);
    double l3 = uniform(g, 0.5, 2.5);
    double l2 = (uniform(g, 0.0, 1.0) < 0.5) ? std::max(l1, l3) + uniform(g, 0.1, 2.0)
                                             : std::min(l1, l3) * uniform(g, 0.2, 0.9);
    BarLengths b{l1, l2, l3};
    auto [lo, hi] = lambda_interval(b);
    double L = lo + (hi - lo) * uniform(g, 0.15, 0.85);
    return {l1, l2, l3, L};
}

// Central finite-difference Jacobian of an angle map, wrap-aware.
template <typename Map>
std::array<double, 4> fd_jacobian(Map&& map, const AngleConfig& t, double h = 1e-6) {
    auto diff = [](double a, double b) { return wrap_angle(a - b); };
    AngleConfig px = map(AngleConfig{t.theta1 + h, t.theta2});
    AngleConfig mx = map(AngleConfig{t.theta1 - h, t.theta2});
    AngleConfig py = map(AngleConfig{t.theta1, t.theta2 + h});
    AngleConfig my = map(AngleConfig{t.theta1, t.theta2 - h});
    return {diff(px.theta1, mx.theta1) / (2 * h), diff(py.theta1, my.theta1) / (2 * h),
            diff(px.theta2, mx.theta2) / (2 * h), diff(py.theta2, my.theta2) / (2 * h)};
}

inline double fd_det(const std::array<double, 4>& j) { return j[0] * j[3] - j[1] * j[2]; }

// theta2 with lbar(theta1, theta2) = L, found by bisection in [lo, hi].
// The bracket must contain exactly one sign change.
inline double solve_theta2_on_gamma(const BarLengths& b, double L, double theta1, double lo,
                                    double hi) {
    auto f = [&](double t2) { return lbar_squared(b, {theta1, t2}) - L * L; };
    double flo = f(lo);
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((f(mid) > 0) == (flo > 0)) {
            lo = mid;
            flo = f(mid);
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace popdyn::test
