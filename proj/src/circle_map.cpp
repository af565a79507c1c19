#include "popdyn/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "popdyn/angles.hpp"
#include "popdyn/errors.hpp"
#include "popdyn/quadrature.hpp"

namespace popdyn {

const char* to_string(RhoMethod method) {
    return method == RhoMethod::OrbitAverage ? "OrbitAverage" : "MeasureIntegral";
}

PolarConfig to_polar(const BarLengths& b, const AngleConfig& t) {
    if (t.theta1 == 0.0 && t.theta2 == 0.0)
        throw OriginUndefined("(0,0) has no polar angle");
    return {lbar(b, t), std::atan2(t.theta2, t.theta1)};
}

FromPolarResult from_polar_traced(const BarLengths& b, double L, double phi) {
    double w = wrap_angle(phi);
    double cx = std::cos(w), cy = std::sin(w);
    RaySolve s = solve_gamma_on_ray(b, L, cx, cy);
    return {{s.gamma * cx, s.gamma * cy}, s.iterations};
}

AngleConfig from_polar(const BarLengths& b, double L, double phi) {
    return from_polar_traced(b, L, phi).angles;
}

double polar_jacobian_det(const BarLengths& b, const AngleConfig& t) {
    if (t.theta1 == 0.0 && t.theta2 == 0.0)
        throw OriginUndefined("(0,0) has no polar angle");
    double num = b.l1 * b.l2 * t.theta1 * std::sin(t.theta1)
               + b.l2 * b.l3 * t.theta2 * std::sin(t.theta2)
               + b.l1 * b.l3 * (t.theta1 + t.theta2) * std::sin(t.theta1 + t.theta2);
    return -num / (lbar(b, t) * (t.theta1 * t.theta1 + t.theta2 * t.theta2));
}

double circle_pop12(const BarLengths& b, double L, double phi) {
    AngleConfig t = pop12(b, from_polar(b, L, phi));
    return std::atan2(t.theta2, t.theta1);
}

double circle_pop23(const BarLengths& b, double L, double phi) {
    AngleConfig t = pop23(b, from_polar(b, L, phi));
    return std::atan2(t.theta2, t.theta1);
}

double circle_map(const BarLengths& b, double L, double phi) {
    AngleConfig t = pop23(b, pop12(b, from_polar(b, L, phi)));
    return std::atan2(t.theta2, t.theta1);
}

namespace {

double checked_branch(double delta, const char* what) {
    if (std::abs(delta) >= kPi - kBranchMargin) {
        std::ostringstream os;
        os.precision(17);
        os << what << " moved phi by " << delta << "; winding ambiguous, sub-sample the step";
        throw BranchAmbiguity(os.str());
    }
    return delta;
}

}  // namespace

double lift_step(const BarLengths& b, double L, double x) {
    double w = wrap_angle(x);
    double d = checked_branch(wrap_angle(circle_map(b, L, w) - w), "composed pop step");
    return x + d;
}

double lift_step_split(const BarLengths& b, double L, double x) {
    double w = wrap_angle(x);
    double mid = circle_pop12(b, L, w);
    double d1 = checked_branch(wrap_angle(mid - w), "pop12 step");
    double d2 = checked_branch(wrap_angle(circle_pop23(b, L, mid) - mid), "pop23 step");
    return x + d1 + d2;
}

RotationEstimate rotation_number_orbit(const BarLengths& b, double L, long n, double phi0) {
    AngleConfig t = from_polar(b, L, phi0);
    double prev = std::atan2(t.theta2, t.theta1);
    double total = 0.0;
    for (long k = 0; k < n; ++k) {
        t = pop23(b, pop12(b, t));
        double cur = std::atan2(t.theta2, t.theta1);
        total += positive_arc(cur - prev);
        prev = cur;
    }
    double raw = total / (kTwoPi * static_cast<double>(n));
    double rho = raw - std::floor(raw);
    if (rho >= 1.0) rho = 0.0;
    return {rho, RhoMethod::OrbitAverage, 1.0 / static_cast<double>(n), n, raw};
}

double invariant_measure(const BarLengths& b, double L, double phi_a, double phi_b,
                         double abs_tol, long node_budget) {
    require_in_lambda(b, L);
    if (phi_a == phi_b) return 0.0;
    double lo = std::min(phi_a, phi_b), hi = std::max(phi_a, phi_b);
    auto density = [&](double p) {
        return 1.0 / std::abs(polar_jacobian_det(b, from_polar(b, L, p)));
    };
    return adaptive_simpson(density, lo, hi, abs_tol, node_budget).value;
}

RotationEstimate rotation_number_integral(const BarLengths& b, double L, double phi,
                                          double abs_tol) {
    require_in_lambda(b, L);
    double w = wrap_angle(phi);
    double arc = positive_arc(circle_map(b, L, w) - w);
    auto density = [&](double p) {
        return 1.0 / std::abs(polar_jacobian_det(b, from_polar(b, L, p)));
    };
    QuadResult num = adaptive_simpson(density, w, w + arc, abs_tol);
    QuadResult den = adaptive_simpson(density, -kPi, kPi, abs_tol);
    double rho = num.value / den.value;
    if (rho >= 1.0) rho -= 1.0;
    if (rho < 0.0) rho = 0.0;
    double bound = abs_tol * (1.0 + rho) / den.value;
    return {rho, RhoMethod::MeasureIntegral, bound, num.nodes + den.nodes, num.value / den.value};
}

double periodicity_defect(const BarLengths& b, double L, long q, int n_samples) {
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double phi = -kPi + kTwoPi * (i + 0.5) / n_samples;
        AngleConfig t = from_polar(b, L, phi);
        for (long k = 0; k < q; ++k) t = pop23(b, pop12(b, t));
        worst = std::max(worst, circle_dist(std::atan2(t.theta2, t.theta1), phi));
    }
    return worst;
}

namespace {

// Continued-fraction convergents p/q of x in [0,1), denominators <= q_max.
std::vector<std::pair<long, long>> convergents(double x, long q_max) {
    std::vector<std::pair<long, long>> out;
    long p_prev = 1, q_prev = 0;
    long p = 0, q = 1;
    long double y = x;
    for (int i = 0; i < 40; ++i) {
        if (q <= q_max && (out.empty() || out.back() != std::make_pair(p, q)))
            out.emplace_back(p, q);
        long double frac = y - std::floor(static_cast<double>(y));
        if (frac < 1e-15L) break;
        y = 1.0L / frac;
        long term = static_cast<long>(std::floor(static_cast<double>(y)));
        long p_next = term * p + p_prev;
        long q_next = term * q + q_prev;
        if (q_next > q_max || q_next < 0) break;
        p_prev = p; q_prev = q;
        p = p_next; q = q_next;
    }
    if (q <= q_max && (out.empty() || out.back() != std::make_pair(p, q)))
        out.emplace_back(p, q);
    return out;
}

}  // namespace

PeriodicityReport detect_periodicity(const BarLengths& b, double L, long q_max, double tol) {
    require_in_lambda(b, L);
    long n = std::max<long>(10000, 50 * q_max * q_max);
    double rho = rotation_number_orbit(b, L, n, 0.3).rho;

    PeriodicityReport report;
    report.max_defect = std::numeric_limits<double>::infinity();
    for (auto [p, q] : convergents(rho, q_max)) {
        if (q < 1) continue;
        double defect = periodicity_defect(b, L, q);
        if (defect <= tol) {
            long g = std::gcd(p, q);
            report.rational = std::make_pair((p / g) % (q / g), q / g);
            report.max_defect = defect;
            return report;
        }
        report.max_defect = std::min(report.max_defect, defect);
    }
    return report;
}

}  // namespace popdyn
