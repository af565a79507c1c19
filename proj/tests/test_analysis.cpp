#include <doctest.h>

#include <cmath>
#include <vector>

#include "popdyn/analysis.hpp"
#include "popdyn/angles.hpp"
#include "popdyn/circle_map.hpp"
#include "popdyn/errors.hpp"
#include "popdyn/linkage.hpp"
#include "popdyn/pop_maps.hpp"
#include "support.hpp"

using namespace popdyn;
using namespace popdyn::test;

TEST_CASE("density_report: gaps shrink in the irrational regime") {
    DensityReport r = density_report({1, 3, 1, 4}, 0.3, 10000);
    REQUIRE(r.gap_history.size() >= 3);
    for (std::size_t i = 1; i < r.gap_history.size(); ++i)
        CHECK(r.gap_history[i].second <= r.gap_history[i - 1].second + 1e-15);
    CHECK(r.max_gap_phi > 0.0);
    CHECK(r.max_gap_phi <= kTwoPi);
    // n = 10^4 strictly below n = 10^3
    double g3 = 0, g4 = 0;
    for (auto& [n, gap] : r.gap_history) {
        if (n == 1000) g3 = gap;
        if (n == 10000) g4 = gap;
    }
    CHECK(g4 < g3);
}

TEST_CASE("density_report: the equal-length orbit never improves past three points") {
    DensityReport r = density_report({1, 1, 1, 1.2}, 0.9, 5000);
    for (auto& [n, gap] : r.gap_history) CHECK(gap >= kTwoPi / 3.0 - 1e-9);
    // stalls: later checkpoints equal the first
    CHECK(r.gap_history.back().second ==
          doctest::Approx(r.gap_history.front().second).epsilon(1e-12));
}

TEST_CASE("scan_rotation: strict monotonicity for extremal floating bar") {
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(3.1 + 1.8 * i / 19.0);
    ScanOptions opt;
    opt.q_max = 0;
    ScanResult r = scan_rotation({1, 3, 1}, grid, opt);
    CHECK(r.verdict == MonotonicityVerdict::Monotone);
    REQUIRE(r.rows.size() == 20);
    for (std::size_t i = 1; i < r.rows.size(); ++i)
        CHECK(r.rows[i].estimate.rho > r.rows[i - 1].estimate.rho);
    CHECK(r.min_adjacent_step > 10.0 * 2.0 * r.rows[0].estimate.error_bound);
}

TEST_CASE("scan_rotation: single-point grid is trivially monotone") {
    std::vector<double> grid{4.0};
    ScanOptions opt;
    opt.q_max = 0;
    ScanResult r = scan_rotation({1, 3, 1}, grid, opt);
    CHECK(r.verdict == MonotonicityVerdict::Monotone);
}

TEST_CASE("scan_rotation: equal lengths skip the monotonicity assertion") {
    std::vector<double> grid{1.1, 1.5, 2.0, 2.5};
    ScanOptions opt;
    opt.q_max = 10;
    ScanResult r = scan_rotation({1, 1, 1}, grid, opt);
    CHECK(r.verdict == MonotonicityVerdict::Skipped);
    for (const ScanRow& row : r.rows) {
        CHECK(std::abs(row.estimate.rho - 2.0 / 3.0) < 1e-9);
        REQUIRE(row.periodic.has_value());
        CHECK(row.periodic->second == 3);
    }
}

TEST_CASE("scan_rotation: serial and parallel agree bitwise") {
    std::vector<double> grid;
    for (int i = 0; i < 8; ++i) grid.push_back(3.3 + 0.2 * i);
    ScanOptions opt;
    opt.q_max = 0;
    ScanResult serial = scan_rotation({1, 3, 1}, grid, opt, ExecutionPolicy::Serial);
    ScanResult parallel = scan_rotation({1, 3, 1}, grid, opt, ExecutionPolicy::Parallel);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i)
        CHECK(serial.rows[i].estimate.rho == parallel.rows[i].estimate.rho);
    CHECK(serial.verdict == parallel.verdict);
}

TEST_CASE("scan_rotation: grid values outside Lambda throw") {
    std::vector<double> grid{2.0, 4.0};
    CHECK_THROWS_AS(scan_rotation({1, 3, 1}, grid, {}), OutsideLambda);
}

TEST_CASE("relabel_for_theorem: identity for a 0pi double-rocker") {
    auto r = relabel_for_theorem({1, 3, 1, 4});
    REQUIRE(r.has_value());
    CHECK(r->rotation == 0);
    CHECK(r->relabeled_class.t1 > 0);
    CHECK(r->relabeled_class.t2 > 0);
    CHECK(r->relabeled_class.t3 < 0);
}

TEST_CASE("relabel_for_theorem: non-Grashof inputs always admit a rotation") {
    auto g = rng(401);
    int found = 0;
    while (found < 100) {
        Linkage lk{uniform(g, 0.3, 3.0), uniform(g, 0.3, 3.0), uniform(g, 0.3, 3.0),
                   uniform(g, 0.3, 3.0)};
        if (!feasible(lk)) continue;
        MotionClass mc = classify(lk);
        if (mc.kind == MotionKind::DegenerateBoundary || mc.t1 * mc.t2 * mc.t3 >= 0.0) continue;
        ++found;
        auto r = relabel_for_theorem(lk);
        REQUIRE(r.has_value());
        CHECK(r->relabeled_class.t1 > 0);
        CHECK(r->relabeled_class.t2 > 0);
        CHECK(r->relabeled_class.t3 < 0);
        // direct re-evaluation from the relabeled lengths
        MotionClass direct = classify(r->relabeled);
        CHECK(direct.t1 == r->relabeled_class.t1);
        // the outer condition transfers to the relabeled theorem condition
        if (r->outer_condition_before) CHECK(r->theorem_condition_after);
    }
}

TEST_CASE("relabel_for_theorem: Grashof input has no qualifying rotation") {
    CHECK_FALSE(relabel_for_theorem({4, 1, 4, 2}).has_value());
}

TEST_CASE("gamma_geometry: single loop near the top of the feasible range") {
    GammaGeometry geo = gamma_geometry({1, 3, 1, 4.999}, 512);
    CHECK(geo.components == 1);
    for (const auto& line : geo.polylines)
        for (const AngleConfig& v : line) CHECK(std::hypot(v.theta1, v.theta2) < 0.2);
}

TEST_CASE("gamma_geometry: component counts") {
    GammaGeometry one = gamma_geometry({1, 3, 1, 4}, 1024);
    CHECK(one.components == 1);
    GammaGeometry two = gamma_geometry({4, 1, 4, 2}, 1024);
    CHECK(two.components >= 2);
    // two resolutions agree
    CHECK(gamma_geometry({1, 3, 1, 4}, 512).components == 1);
    CHECK(gamma_geometry({4, 1, 4, 2}, 512).components == two.components);
}

TEST_CASE("gamma_geometry: vertices sit on the level set") {
    GammaGeometry geo = gamma_geometry({1, 3, 1, 4}, 1024);
    double cell = kTwoPi / geo.resolution;
    double tol = 20.0 * cell * cell;  // linear edge interpolation error scale
    for (const auto& line : geo.polylines)
        for (const AngleConfig& v : line)
            CHECK(std::abs(lbar({1, 3, 1}, v) - 4.0) <= tol);
}

TEST_CASE("gamma_geometry: pops map polyline points near the polylines") {
    Linkage lk{1, 3, 1, 4};
    GammaGeometry geo = gamma_geometry(lk, 512);
    double cell = kTwoPi / geo.resolution;
    int step = 37;
    for (const auto& line : geo.polylines) {
        for (std::size_t i = 0; i < line.size(); i += step) {
            AngleConfig on = project_to_gamma(lk.bars(), lk.L, line[i]);
            for (const AngleConfig& image : {pop12(lk.bars(), on), pop23(lk.bars(), on)}) {
                double d;
                nearest_component(geo, image, &d, nullptr);
                CHECK(d < 2.0 * cell);
            }
        }
    }
}

TEST_CASE("gamma_geometry: automatic refinement reports stable counts") {
    GammaGeometry geo = gamma_geometry({4, 1, 4, 2}, 0, ExecutionPolicy::Parallel, 4096);
    CHECK(geo.components == 2);
}

TEST_CASE("gamma_geometry: microscopic loop triggers ResolutionTooCoarse") {
    CHECK_THROWS_AS(gamma_geometry({1, 3, 1, 5.0 - 1e-12}, 0, ExecutionPolicy::Parallel, 256),
                    ResolutionTooCoarse);
}

TEST_CASE("fill_gamma_field: serial and parallel identical") {
    int n = 64;
    std::vector<double> serial(n * n), parallel(n * n);
    fill_gamma_field({1, 3, 1}, 4.0, n, serial, ExecutionPolicy::Serial);
    fill_gamma_field({1, 3, 1}, 4.0, n, parallel, ExecutionPolicy::Parallel);
    CHECK(serial == parallel);
}

TEST_CASE("confinement_check: Grashof orbit stays in its component") {
    Linkage lk{4, 1, 4, 2};
    REQUIRE(classify(lk).t1 < 0);
    REQUIRE(classify(lk).t2 > 0);
    REQUIRE(classify(lk).t3 < 0);
    double t2 = solve_theta2_on_gamma(lk.bars(), lk.L, 2.0, 0.5, 1.5);
    AngleConfig start{2.0, t2};
    REQUIRE(on_gamma(lk, start, 1e-10));

    CHECK(confinement_check(lk, start, 0));
    CHECK(confinement_check(lk, start, 500));
    // mirrored start stays in the mirrored component
    CHECK(confinement_check(lk, {-start.theta1, -start.theta2}, 500));
}

TEST_CASE("nearest_component separates the two Grashof loops") {
    Linkage lk{4, 1, 4, 2};
    GammaGeometry geo = gamma_geometry(lk, 1024);
    REQUIRE(geo.components == 2);
    double t2 = solve_theta2_on_gamma(lk.bars(), lk.L, 2.0, 0.5, 1.5);
    double da, db;
    int ca = nearest_component(geo, {2.0, t2}, &da, &db);
    int cb = nearest_component(geo, {-2.0, -t2}, &da, &db);
    CHECK(ca != cb);
    CHECK(db > 0.1);  // the other loop is far
}
