// Acceptance suite: every check prints one [PASS]/[FAIL] line; the process
// exits nonzero if any check fails. Thresholds are fixed here, not tuned
// at run time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "popdyn/analysis.hpp"
#include "popdyn/angles.hpp"
#include "popdyn/circle_map.hpp"
#include "popdyn/linkage.hpp"
#include "popdyn/pop_maps.hpp"
#include "../tests/support.hpp"

using namespace popdyn;
using namespace popdyn::test;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void run_criterion(int number, const std::string& title, double time_limit_s,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto t0 = Clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (elapsed > time_limit_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
    }
    std::printf("[%s] %2d. %s (%s%.2fs/%.0fs)\n", ok ? "PASS" : "FAIL", number, title.c_str(),
                detail.empty() ? "" : (detail + "; ").c_str(), elapsed, time_limit_s);
    if (!ok) ++g_failures;
}

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

}  // namespace

int main() {
    // 1. Equal lengths recover the start after 6 pops.
    run_criterion(1, "equal-length 6-pop identity", 1.0, [](std::string& detail) {
        Linkage lk{1, 1, 1, 1.2};
        auto g = rng(11);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            AngleConfig start = from_polar(lk.bars(), lk.L, uniform(g, -kPi, kPi));
            OrbitTrace tr = orbit(lk, start, 6, PopLabel::P12);
            worst = std::max(worst, std::abs(tr.steps.back().angles.theta1 - start.theta1));
            worst = std::max(worst, std::abs(tr.steps.back().angles.theta2 - start.theta2));
        }
        detail = fmt("worst angle error %.2e", worst);
        return worst <= 1e-12;
    });

    // 2. Pops preserve the closure length.
    run_criterion(2, "level-set invariance of both pops", 1.0, [](std::string& detail) {
        auto g = rng(22);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            BarLengths b = random_bars(g);
            AngleConfig t = random_angles(g);
            double before = lbar(b, t);
            worst = std::max(worst, std::abs(lbar(b, pop12(b, t)) - before) / before);
            worst = std::max(worst, std::abs(lbar(b, pop23(b, t)) - before) / before);
        }
        detail = fmt("worst relative drift %.2e", worst);
        return worst < 1e-10;
    });

    // 3. Finite-difference Jacobian determinant of both pops is -1.
    run_criterion(3, "pop Jacobian determinant -1", 1.0, [](std::string& detail) {
        auto g = rng(33);
        const BarLengths sets[] = {{1, 3, 1}, {3, 1, 3}, {1, 2, 3}, {2.2, 0.7, 1.4}};
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const BarLengths& b = sets[i % 4];
            AngleConfig t = random_angles(g, 0.05);
            double d12 = fd_det(fd_jacobian([&](const AngleConfig& u) { return pop12(b, u); }, t));
            double d23 = fd_det(fd_jacobian([&](const AngleConfig& u) { return pop23(b, u); }, t));
            worst = std::max({worst, std::abs(d12 + 1.0), std::abs(d23 + 1.0)});
        }
        detail = fmt("worst |det+1| %.2e", worst);
        return worst <= 1e-6;
    });

    // 4. Angle-space pops match the geometric reflection oracle; this also
    // fixes the diagonal reading of the 2-3 pop (bars 2 and 3, not 1 and 2).
    run_criterion(4, "geometric reflection oracle equivalence", 1.0, [](std::string& detail) {
        auto g = rng(44);
        Linkage lk{1, 3, 1, 4};
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            AngleConfig t = from_polar(lk.bars(), lk.L, uniform(g, -kPi, kPi));
            PlanarConfig cfg = forward_kinematics(lk, t);
            AngleConfig rb = angles_of(pop_geometric(cfg, PopVertex::B));
            AngleConfig ab = pop12(lk.bars(), t);
            AngleConfig rc = angles_of(pop_geometric(cfg, PopVertex::C));
            AngleConfig ac = pop23(lk.bars(), t);
            worst = std::max({worst, circle_dist(rb.theta1, ab.theta1),
                              circle_dist(rb.theta2, ab.theta2), circle_dist(rc.theta1, ac.theta1),
                              circle_dist(rc.theta2, ac.theta2)});
        }

        // The two diagonal readings coincide when l1 == l3; an asymmetric
        // linkage separates them, and only the bars-2-3 reading survives.
        Linkage asym{1, 2, 3, 4.5};
        double worst23 = 0.0, best12 = 1e9;
        for (int i = 0; i < 200; ++i) {
            AngleConfig t = from_polar(asym.bars(), asym.L, uniform(g, -kPi, kPi));
            PlanarConfig cfg = forward_kinematics(asym, t);
            AngleConfig oracle = angles_of(pop_geometric(cfg, PopVertex::C));
            AngleConfig a23 = pop23(asym.bars(), t, Pop23Variant::DiagonalBars23);
            AngleConfig a12 = pop23(asym.bars(), t, Pop23Variant::DiagonalBars12);
            worst23 = std::max({worst23, circle_dist(oracle.theta1, a23.theta1),
                                circle_dist(oracle.theta2, a23.theta2)});
            best12 = std::min(best12, circle_dist(oracle.theta1, a12.theta1));
        }
        detail = fmt("worst mismatch %.2e; bars-2-3 reading %.1e off oracle", worst, worst23) +
                 fmt(", bars-1-2 reading >= %.1e off", best12);
        return worst < 1e-9 && worst23 < 1e-9 && best12 > 1e-3;
    });

    // 5. Polar coordinates are a bijection; the ray solve stays within its
    // iteration budget across the admissible interval.
    run_criterion(5, "polar bijection round trips", 1.0, [](std::string& detail) {
        auto g = rng(55);
        const BarLengths sets[] = {{1, 3, 1}, {3, 1, 3}, {1, 2, 3}};
        double worst = 0.0;
        int worst_iters = 0;
        for (int i = 0; i < 1000; ++i) {
            const BarLengths& b = sets[i % 3];
            auto [lo, hi] = lambda_interval(b);
            double L = lo + (hi - lo) * uniform(g, 0.02, 0.98);
            double phi = uniform(g, -kPi, kPi);
            FromPolarResult fp = from_polar_traced(b, L, phi);
            worst_iters = std::max(worst_iters, fp.iterations);
            PolarConfig p = to_polar(b, fp.angles);
            worst = std::max(worst, std::abs(p.L - L));
            worst = std::max(worst, circle_dist(p.phi, phi));
            AngleConfig t2 = from_polar(b, p.L, p.phi);
            worst = std::max({worst, std::abs(t2.theta1 - fp.angles.theta1),
                              std::abs(t2.theta2 - fp.angles.theta2)});
        }
        detail = fmt("worst round-trip error %.2e, max iterations %.0f", worst,
                     static_cast<double>(worst_iters));
        return worst < 1e-10 && worst_iters <= 200;
    });

    // 6. The composed map preserves orientation and its phi derivative is
    // the ratio of coordinate-change determinants.
    run_criterion(6, "orientation and derivative identity", 5.0, [](std::string& detail) {
        auto g = rng(66);
        double min_fd = 1e9, worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Linkage lk = random_theorem_linkage(g);
            const BarLengths b = lk.bars();
            for (int i = 0; i < 100; ++i) {
                double phi = uniform(g, -kPi, kPi);
                double h = 1e-6;
                double fd =
                    wrap_angle(circle_map(b, lk.L, phi + h) - circle_map(b, lk.L, phi - h)) / (2 * h);
                min_fd = std::min(min_fd, fd);
                AngleConfig t = from_polar(b, lk.L, phi);
                AngleConfig tpp = pop23(b, pop12(b, t));
                double ratio = polar_jacobian_det(b, tpp) / polar_jacobian_det(b, t);
                worst = std::max(worst, std::abs(fd - ratio) / std::max(1.0, std::abs(ratio)));
            }
        }
        detail = fmt("min df/dphi %.3g, worst identity error %.2e", min_fd, worst);
        return min_fd > 0.0 && worst <= 1e-5;
    });

    // 7. The measure with density 1/|det Jg| is preserved by the map.
    run_criterion(7, "invariant measure invariance", 10.0, [](std::string& detail) {
        auto g = rng(77);
        BarLengths b{1, 3, 1};
        const double quad_tol = 1e-10;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            double a = uniform(g, -kPi, kPi);
            double width = uniform(g, 0.02, kTwoPi - 0.02);
            double fa = circle_map(b, 4.0, a);
            double fb = fa + positive_arc(circle_map(b, 4.0, wrap_angle(a + width)) - fa);
            double before = invariant_measure(b, 4.0, a, a + width, quad_tol);
            double after = invariant_measure(b, 4.0, fa, fb, quad_tol);
            worst = std::max(worst, std::abs(after - before));
        }
        detail = fmt("worst |mu(f(arc)) - mu(arc)| %.2e", worst);
        return worst <= 10.0 * quad_tol;
    });

    // 8. Orbit-average and measure-integral rotation numbers agree; the
    // equal-length family is exactly rational. Under the fixed conventions
    // (phi = atan2(theta2, theta1), pop23 after pop12) the period-3 value
    // is 2/3, i.e. one third of a turn clockwise.
    run_criterion(8, "rotation-number method agreement", 60.0, [](std::string& detail) {
        auto g = rng(88);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            Linkage lk = random_theorem_linkage(g);
            double phi0 = uniform(g, -kPi, kPi);
            RotationEstimate orbit_est = rotation_number_orbit(lk.bars(), lk.L, 1000000, phi0);
            RotationEstimate integral_est = rotation_number_integral(lk.bars(), lk.L, phi0, 1e-10);
            worst = std::max(worst, std::abs(orbit_est.rho - integral_est.rho));
        }
        RotationEstimate eq_orbit = rotation_number_orbit({1, 1, 1}, 1.2, 999999, 0.4);
        RotationEstimate eq_integral = rotation_number_integral({1, 1, 1}, 1.2, 0.4, 1e-10);
        double eq_err = std::max(std::abs(eq_orbit.rho - 2.0 / 3.0),
                                 std::abs(eq_integral.rho - 2.0 / 3.0));
        detail = fmt("worst cross-method gap %.2e, equal-length |rho - 2/3| %.2e", worst, eq_err);
        return worst <= 1e-6 && eq_err <= 1e-9;
    });

    // 9. rho(L) is strictly monotone for extremal floating bar, with margin.
    run_criterion(9, "monotone rotation number in L", 120.0, [](std::string& detail) {
        ScanOptions opt;
        opt.q_max = 0;
        opt.quad_tol = 1e-10;
        double min_margin = 1e9;
        for (auto [bars, lo, hi] :
             {std::tuple<BarLengths, double, double>{{1, 3, 1}, 3.05, 4.95},
              std::tuple<BarLengths, double, double>{{3, 1, 3}, 5.05, 6.95}}) {
            std::vector<double> grid;
            for (int i = 0; i < 50; ++i) grid.push_back(lo + (hi - lo) * i / 49.0);
            ScanResult r = scan_rotation(bars, grid, opt);
            if (r.verdict != MonotonicityVerdict::Monotone) {
                detail = "scan verdict not monotone";
                return false;
            }
            double bound = 0.0;
            for (const ScanRow& row : r.rows) bound = std::max(bound, row.estimate.error_bound);
            min_margin = std::min(min_margin, r.min_adjacent_step / (10.0 * 2.0 * bound));
        }
        detail = fmt("min step / (10 x error bound) = %.3g", min_margin);
        return min_margin > 1.0;
    });

    // 10. Orbit gaps shrink by 10x between n=1e3 and n=1e5 in the
    // irrational regime; the equal-length control never beats its 3 points.
    run_criterion(10, "density growth and periodic control", 60.0, [](std::string& detail) {
        DensityReport dense = density_report({1, 3, 1, 4}, 0.3, 100000);
        double g3 = 0, g5 = 0;
        for (auto& [n, gap] : dense.gap_history) {
            if (n == 1000) g3 = gap;
            if (n == 100000) g5 = gap;
        }
        DensityReport control = density_report({1, 1, 1, 1.2}, 0.9, 100000);
        bool stalled = true;
        for (auto& [n, gap] : control.gap_history)
            if (gap < kTwoPi / 3.0 - 1e-9) stalled = false;
        if (std::abs(control.gap_history.back().second - control.gap_history.front().second) > 1e-12)
            stalled = false;
        detail = fmt("gap(1e3)=%.3g gap(1e5)=%.3g", g3, g5) +
                 fmt(", control stalls at %.4f >= 2pi/3", control.max_gap_phi);
        return g5 * 10.0 <= g3 && stalled;
    });

    // 11. The Grashof case (T1<0, T2>0, T3<0) has a split level set and the
    // orbit never changes component.
    run_criterion(11, "Grashof confinement and component counts", 60.0, [](std::string& detail) {
        Linkage lk{4, 1, 4, 2};
        MotionClass mc = classify(lk);
        if (!(mc.t1 < 0 && mc.t2 > 0 && mc.t3 < 0)) {
            detail = "wrong sign pattern";
            return false;
        }
        GammaGeometry split = gamma_geometry(lk, 0, ExecutionPolicy::Parallel, 4096);
        GammaGeometry single = gamma_geometry({1, 3, 1, 4}, 0, ExecutionPolicy::Parallel, 4096);
        double t2 = solve_theta2_on_gamma(lk.bars(), lk.L, 2.0, 0.5, 1.5);
        bool confined = confinement_check(lk, {2.0, t2}, 100000);
        detail = fmt("components: split=%.0f single=%.0f", split.components, single.components) +
                 (confined ? ", orbit confined" : ", orbit escaped");
        return split.components >= 2 && single.components == 1 && confined;
    });

    // 12. Every non-Grashof labeling admits a cyclic rotation into the
    // 0pi double-rocker sign pattern.
    run_criterion(12, "cyclic relabeling of non-Grashof linkages", 1.0, [](std::string& detail) {
        auto g = rng(1212);
        int found = 0;
        while (found < 100) {
            Linkage lk{uniform(g, 0.3, 3.0), uniform(g, 0.3, 3.0), uniform(g, 0.3, 3.0),
                       uniform(g, 0.3, 3.0)};
            if (!feasible(lk)) continue;
            MotionClass mc = classify(lk);
            if (mc.kind == MotionKind::DegenerateBoundary || mc.t1 * mc.t2 * mc.t3 >= 0.0) continue;
            ++found;
            auto rel = relabel_for_theorem(lk);
            if (!rel) {
                detail = "no rotation found";
                return false;
            }
            MotionClass check = classify(rel->relabeled);
            if (!(check.t1 > 0 && check.t2 > 0 && check.t3 < 0)) {
                detail = "rotation fails direct evaluation";
                return false;
            }
        }
        detail = "100 random non-Grashof linkages relabeled";
        return true;
    });

    std::printf("%s: %d of 12 criteria failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
