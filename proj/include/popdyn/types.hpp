#pragma once

#include <cmath>

namespace popdyn {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

// Lengths of the three mobile bars (input, floating, output).
struct BarLengths {
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;

    double sum() const { return l1 + l2 + l3; }
};

// A four-bar linkage: three mobile bars plus the fixed ground bar of
// length L.
struct Linkage {
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
    double L = 0.0;

    BarLengths bars() const { return {l1, l2, l3}; }
};

// Relative turning angles, both in (-pi, pi]: theta1 turns bar 1 into
// bar 2, theta2 turns bar 2 into bar 3.
struct AngleConfig {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

// Absolute joint positions; a is the origin of bar 1 and d the far end of
// bar 3 (the two ground anchors).
struct PlanarConfig {
    Vec2 a, b, c, d;
};

// Closure length L and ray angle phi of the polar-type coordinates.
struct PolarConfig {
    double L = 0.0;
    double phi = 0.0;
};

enum class MotionKind {
    ZeroPiDoubleRocker,
    OtherNonGrashof,
    Grashof,
    DegenerateBoundary,
};

// Signs of the three classifying terms plus the derived motion kind.
struct MotionClass {
    double t1 = 0.0;
    double t2 = 0.0;
    double t3 = 0.0;
    bool grashof = false;
    MotionKind kind = MotionKind::OtherNonGrashof;
};

const char* to_string(MotionKind kind);

}  // namespace popdyn
