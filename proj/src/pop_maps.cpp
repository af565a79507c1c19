#include "popdyn/pop_maps.hpp"

#include <cmath>
#include <sstream>

#include "popdyn/angles.hpp"
#include "popdyn/errors.hpp"
#include "popdyn/linkage.hpp"

namespace popdyn {

const char* to_string(PopLabel label) { return label == PopLabel::P12 ? "P12" : "P23"; }

double opening_angle(double l_out, double l_adj, double turn) {
    double d2 = l_out * l_out + l_adj * l_adj + 2.0 * l_out * l_adj * std::cos(turn);
    double scale = l_out + l_adj;
    if (d2 <= 1e-30 * scale * scale)
        throw DegenerateDiagonal("zero diagonal: opening angle undefined (l_out = l_adj, turn = pi)");
    double arg = (l_adj + l_out * std::cos(turn)) / std::sqrt(d2);
    if (arg > 1.0) {
        if (arg > 1.0 + 1e-12) throw DegenerateDiagonal("arccos argument above 1 beyond round-off");
        arg = 1.0;
    } else if (arg < -1.0) {
        if (arg < -1.0 - 1e-12) throw DegenerateDiagonal("arccos argument below -1 beyond round-off");
        arg = -1.0;
    }
    return std::acos(arg);
}

PopGeometry pop_geometry(double l_out, double l_adj, double turn) {
    PopGeometry g;
    g.alpha = opening_angle(l_out, l_adj, turn);
    g.d = std::sqrt(l_out * l_out + l_adj * l_adj + 2.0 * l_out * l_adj * std::cos(turn));
    g.delta = sgn(turn) * 2.0 * g.alpha;
    return g;
}

AngleConfig pop12_unwrapped(const BarLengths& b, const AngleConfig& t) {
    double a = opening_angle(b.l1, b.l2, t.theta1);
    return {-t.theta1, t.theta2 + sgn(t.theta1) * 2.0 * a};
}

AngleConfig pop12(const BarLengths& b, const AngleConfig& t) {
    return wrap_angles(pop12_unwrapped(b, t));
}

AngleConfig pop23_unwrapped(const BarLengths& b, const AngleConfig& t, Pop23Variant variant) {
    double a = (variant == Pop23Variant::DiagonalBars23)
                   ? opening_angle(b.l3, b.l2, t.theta2)
                   : opening_angle(b.l1, b.l2, t.theta2);
    return {t.theta1 + sgn(t.theta2) * 2.0 * a, -t.theta2};
}

AngleConfig pop23(const BarLengths& b, const AngleConfig& t, Pop23Variant variant) {
    return wrap_angles(pop23_unwrapped(b, t, variant));
}

namespace {

Vec2 reflect_across(const Vec2& p, const Vec2& q, const Vec2& r) {
    Vec2 u = r - q;
    double n2 = dot(u, u);
    double scale = norm(q) + norm(r) + 1.0;
    if (n2 <= 1e-28 * scale * scale)
        throw CollinearNeighbors("reflection line undefined: neighbor joints coincide");
    Vec2 v = p - q;
    double s = dot(v, u) / n2;
    Vec2 foot = q + u * s;
    return foot * 2.0 - p;
}

}  // namespace

PlanarConfig pop_geometric(const PlanarConfig& cfg, PopVertex vertex) {
    PlanarConfig out = cfg;
    if (vertex == PopVertex::B)
        out.b = reflect_across(cfg.b, cfg.a, cfg.c);
    else
        out.c = reflect_across(cfg.c, cfg.b, cfg.d);
    return out;
}

OrbitTrace orbit(const Linkage& lk, const AngleConfig& start, long n_pops, PopLabel first,
                 const OrbitOptions& opt) {
    const BarLengths b = lk.bars();
    const double bound = opt.drift_bound_rel * lk.L;

    OrbitTrace trace;
    trace.start = start;
    trace.start_residual = std::abs(lbar(b, start) - lk.L);
    if (trace.start_residual > bound) {
        std::ostringstream os;
        os.precision(17);
        os << "start residual " << trace.start_residual << " exceeds drift bound " << bound;
        throw DriftExceeded(0, os.str());
    }

    trace.steps.reserve(static_cast<size_t>(n_pops > 0 ? n_pops : 0));
    AngleConfig cur = start;
    PopLabel label = first;
    for (long k = 1; k <= n_pops; ++k) {
        cur = (label == PopLabel::P12) ? pop12(b, cur) : pop23(b, cur);
        if (opt.renormalize) cur = project_to_gamma(b, lk.L, cur);
        double res = std::abs(lbar(b, cur) - lk.L);
        if (res > bound) {
            std::ostringstream os;
            os.precision(17);
            os << "residual " << res << " exceeds drift bound " << bound << " at pop " << k;
            throw DriftExceeded(k, os.str());
        }
        trace.steps.push_back({label, cur, res});
        label = other(label);
    }
    return trace;
}

AngleConfig project_to_gamma(const BarLengths& b, double L, const AngleConfig& near) {
    if (near.theta1 == 0.0 && near.theta2 == 0.0)
        throw OriginUndefined("cannot project (0,0): ray direction undefined");
    double r = std::hypot(near.theta1, near.theta2);
    double cx = near.theta1 / r, cy = near.theta2 / r;
    RaySolve s = solve_gamma_on_ray(b, L, cx, cy);
    return {s.gamma * cx, s.gamma * cy};
}

}  // namespace popdyn
