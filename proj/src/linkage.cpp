#include "popdyn/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "popdyn/angles.hpp"
#include "popdyn/errors.hpp"

namespace popdyn {

const char* to_string(MotionKind kind) {
    switch (kind) {
        case MotionKind::ZeroPiDoubleRocker: return "ZeroPiDoubleRocker";
        case MotionKind::OtherNonGrashof: return "OtherNonGrashof";
        case MotionKind::Grashof: return "Grashof";
        case MotionKind::DegenerateBoundary: return "DegenerateBoundary";
    }
    return "?";
}

double lbar_squared(const BarLengths& b, const AngleConfig& t) {
    return b.l1 * b.l1 + b.l2 * b.l2 + b.l3 * b.l3
         + 2.0 * b.l1 * b.l2 * std::cos(t.theta1)
         + 2.0 * b.l2 * b.l3 * std::cos(t.theta2)
         + 2.0 * b.l1 * b.l3 * std::cos(t.theta1 + t.theta2);
}

double lbar(const BarLengths& b, const AngleConfig& t) {
    double s = lbar_squared(b, t);
    if (s < 0.0) s = 0.0;  // round-off only; the exact value is a squared distance
    return std::sqrt(s);
}

std::string feasibility_violation(const Linkage& lk) {
    std::ostringstream os;
    os.precision(17);
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            os << name << " must be positive and finite, got " << v;
            return false;
        }
        return true;
    };
    if (!positive(lk.l1, "l1") || !positive(lk.l2, "l2") || !positive(lk.l3, "l3") ||
        !positive(lk.L, "L"))
        return os.str();

    double lower = std::max({0.0, lk.l1 - lk.l2 - lk.l3, -lk.l1 + lk.l2 - lk.l3,
                             -lk.l1 - lk.l2 + lk.l3});
    double upper = lk.l1 + lk.l2 + lk.l3;
    if (!(lk.L < upper)) {
        os << "L = " << lk.L << " violates L < l1+l2+l3 = " << upper;
        return os.str();
    }
    if (!(lk.L > lower)) {
        os << "L = " << lk.L << " violates L > max{0, l1-l2-l3, -l1+l2-l3, -l1-l2+l3} = "
           << lower;
        return os.str();
    }
    return {};
}

bool feasible(const Linkage& lk) { return feasibility_violation(lk).empty(); }

void require_feasible(const Linkage& lk) {
    std::string why = feasibility_violation(lk);
    if (!why.empty()) throw InfeasibleLinkage(why);
}

MotionClass classify(const Linkage& lk) {
    MotionClass mc;
    mc.t1 = -lk.l1 + lk.l2 - lk.l3 + lk.L;
    mc.t2 = -lk.l1 - lk.l2 + lk.l3 + lk.L;
    mc.t3 = -lk.l1 + lk.l2 + lk.l3 - lk.L;
    mc.grashof = mc.t1 * mc.t2 * mc.t3 > 0.0;

    double tol = 1e-12 * (lk.l1 + lk.l2 + lk.l3);
    if (std::abs(mc.t1) < tol || std::abs(mc.t2) < tol || std::abs(mc.t3) < tol) {
        mc.kind = MotionKind::DegenerateBoundary;
        mc.grashof = false;
    } else if (mc.grashof) {
        mc.kind = MotionKind::Grashof;
    } else if (mc.t1 > 0.0 && mc.t2 > 0.0 && mc.t3 < 0.0) {
        mc.kind = MotionKind::ZeroPiDoubleRocker;
    } else {
        mc.kind = MotionKind::OtherNonGrashof;
    }
    return mc;
}

bool theorem_conditions(const Linkage& lk) {
    if (classify(lk).kind != MotionKind::ZeroPiDoubleRocker) return false;
    double lo = std::min(lk.l1, lk.l3);
    double hi = std::max(lk.l1, lk.l3);
    return lk.l2 <= lo || lk.l2 >= hi;
}

bool strict_theorem_conditions(const Linkage& lk) {
    return theorem_conditions(lk) && !(lk.l1 == lk.l2 && lk.l2 == lk.l3);
}

bool on_gamma(const Linkage& lk, const AngleConfig& t, double tol) {
    return std::abs(lbar(lk.bars(), t) - lk.L) <= tol;
}

std::pair<double, double> lambda_interval(const BarLengths& b) {
    double lower = std::max({-b.l1 + b.l2 + b.l3, b.l1 - b.l2 + b.l3, b.l1 + b.l2 - b.l3});
    return {lower, b.sum()};
}

bool in_lambda(const BarLengths& b, double L) {
    auto [lo, hi] = lambda_interval(b);
    return L > lo && L < hi;
}

void require_in_lambda(const BarLengths& b, double L) {
    auto [lo, hi] = lambda_interval(b);
    if (L > lo && L < hi) return;
    std::ostringstream os;
    os.precision(17);
    if (!(L < hi))
        os << "L = " << L << " violates L < l1+l2+l3 = " << hi;
    else
        os << "L = " << L << " violates L > max{-l1+l2+l3, l1-l2+l3, l1+l2-l3} = " << lo;
    throw OutsideLambda(os.str());
}

PlanarConfig forward_kinematics(const Linkage& lk, const AngleConfig& t, double tol) {
    Vec2 a{0.0, 0.0};
    Vec2 b{lk.l1, 0.0};
    double h2 = t.theta1;
    double h3 = t.theta1 + t.theta2;
    Vec2 c = b + Vec2{lk.l2 * std::cos(h2), lk.l2 * std::sin(h2)};
    Vec2 d = c + Vec2{lk.l3 * std::cos(h3), lk.l3 * std::sin(h3)};

    double r = norm(d);
    if (std::abs(r - lk.L) > tol) {
        std::ostringstream os;
        os.precision(17);
        os << "chain does not close: |lbar - L| = " << std::abs(r - lk.L) << " > " << tol;
        throw NotOnManifold(os.str());
    }

    // Rotate about a so the endpoint lands on the positive x axis.
    double cs = d.x / r, sn = d.y / r;
    auto rot = [&](const Vec2& p) { return Vec2{cs * p.x + sn * p.y, -sn * p.x + cs * p.y}; };
    return {a, rot(b), rot(c), Vec2{r, 0.0}};
}

AngleConfig angles_of(const PlanarConfig& p) {
    double h1 = std::atan2(p.b.y - p.a.y, p.b.x - p.a.x);
    double h2 = std::atan2(p.c.y - p.b.y, p.c.x - p.b.x);
    double h3 = std::atan2(p.d.y - p.c.y, p.d.x - p.c.x);
    return {wrap_angle(h2 - h1), wrap_angle(h3 - h2)};
}

RaySolve solve_gamma_on_ray(const BarLengths& b, double L, double dir_x, double dir_y) {
    require_in_lambda(b, L);

    // First ray parameter hitting the boundary of (-pi, pi]^2.
    double gmax = kPi / std::max(std::abs(dir_x), std::abs(dir_y));
    double target = L * L;
    auto psi = [&](double g) {
        return lbar_squared(b, {g * dir_x, g * dir_y}) - target;
    };
    auto dpsi = [&](double g) {
        double u = g * dir_x, v = g * dir_y;
        return -2.0 * b.l1 * b.l2 * dir_x * std::sin(u)
             - 2.0 * b.l2 * b.l3 * dir_y * std::sin(v)
             - 2.0 * b.l1 * b.l3 * (dir_x + dir_y) * std::sin(u + v);
    };

    // psi decreases strictly from psi(0) > 0 to psi(gmax) < 0; bisect to a
    // short bracket, then polish with safeguarded Newton.
    RaySolve out;
    double lo = 0.0, hi = gmax;
    for (int i = 0; i < 30; ++i) {
        double mid = 0.5 * (lo + hi);
        ++out.iterations;
        (psi(mid) > 0.0 ? lo : hi) = mid;
    }
    double g = 0.5 * (lo + hi);
    for (int i = 0; i < 12; ++i) {
        double f = psi(g);
        double df = dpsi(g);
        ++out.iterations;
        if (f > 0.0) lo = g; else hi = g;
        double step = (df != 0.0) ? -f / df : 0.0;
        double next = g + step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - g) <= 1e-16 * gmax) {
            g = next;
            break;
        }
        g = next;
    }
    out.gamma = g;
    return out;
}

}  // namespace popdyn
