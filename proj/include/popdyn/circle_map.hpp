#pragma once

#include <optional>
#include <utility>

#include "popdyn/linkage.hpp"
#include "popdyn/pop_maps.hpp"
#include "popdyn/types.hpp"

namespace popdyn {

/// Polar-type coordinates (L, phi) = (lbar(theta), atan2(theta2, theta1)).
/// Throws OriginUndefined at (0,0).
PolarConfig to_polar(const BarLengths& bars, const AngleConfig& angles);

/// Inverse change of coordinates: the unique point gamma*(cos phi, sin phi)
/// with lbar = L, found by bisection plus Newton along the ray (lbar^2
/// decreases strictly in gamma, so the root is unique). Requires L in
/// Lambda; round trips with to_polar hold to ~1e-10 or better.
AngleConfig from_polar(const BarLengths& bars, double L, double phi);

struct FromPolarResult {
    AngleConfig angles;
    int iterations = 0;
};
FromPolarResult from_polar_traced(const BarLengths& bars, double L, double phi);

/// Determinant of the Jacobian of the angle->polar change of coordinates:
///   -(l1 l2 t1 sin t1 + l2 l3 t2 sin t2 + l1 l3 (t1+t2) sin(t1+t2))
///     / (lbar * (t1^2 + t2^2)).
/// Nonpositive on the admissible region; zero only at (0,0), (0,pi),
/// (pi,0), (pi,pi). Throws OriginUndefined at (0,0).
double polar_jacobian_det(const BarLengths& bars, const AngleConfig& angles);

/// The two pops viewed on the circle of ray angles at fixed L. Each is an
/// involution; L is preserved exactly because the pops preserve lbar.
double circle_pop12(const BarLengths& bars, double L, double phi);
double circle_pop23(const BarLengths& bars, double L, double phi);

/// One alternating round: circle_pop23 after circle_pop12. Continuous and
/// orientation-preserving whenever L is in Lambda.
double circle_map(const BarLengths& bars, double L, double phi);

// Margin for nearest-branch continuation: a single step must move phi by
// less than pi - kBranchMargin or the winding is ambiguous.
inline constexpr double kBranchMargin = 1e-3;

/// Lift of circle_map by nearest-branch continuation:
///   F(x) = x + principal(circle_map(wrap(x)) - wrap(x)).
/// Satisfies F(x + 2pi) = F(x) + 2pi exactly. Throws BranchAmbiguity when
/// the step reaches pi - kBranchMargin.
double lift_step(const BarLengths& bars, double L, double x);

/// Same lift evaluated through the two half-pops separately, halving the
/// per-step displacement fed to the branch choice.
double lift_step_split(const BarLengths& bars, double L, double x);

enum class RhoMethod { OrbitAverage, MeasureIntegral };
const char* to_string(RhoMethod method);

struct RotationEstimate {
    double rho = 0.0;          // in [0, 1)
    RhoMethod method = RhoMethod::OrbitAverage;
    double error_bound = 0.0;  // 1/n for the orbit average
    long iterations_or_nodes = 0;
    double raw_winding = 0.0;  // signed lift displacement / (2 pi n), before mod 1
};

/// Orbit-average rotation number: rho = (F^n(phi0) - phi0) / (2 pi n) mod 1
/// with the homeomorphism bound |error| <= 1/n. The lift displacement of
/// each step is taken in [0, 2pi), which is a valid continuous lift branch
/// because the composed map has no fixed point on Lambda level sets.
RotationEstimate rotation_number_orbit(const BarLengths& bars, double L, long n, double phi0);

/// Measure of the phi interval [phi_a, phi_b] under the density
/// 1/|polar_jacobian_det| (the measure preserved by circle_map), by
/// adaptive Simpson quadrature. Endpoints are real numbers; the density is
/// 2pi-periodic, so [0, 2pi] gives the total measure.
double invariant_measure(const BarLengths& bars, double L, double phi_a, double phi_b,
                         double abs_tol = 1e-10, long node_budget = 1000000);

/// Rotation number from the invariant measure: the measure of the positive
/// arc from phi to circle_map(phi), normalized by the total measure.
/// Independent of phi up to quadrature error.
RotationEstimate rotation_number_integral(const BarLengths& bars, double L, double phi,
                                          double abs_tol = 1e-10);

struct PeriodicityReport {
    // (p, q) in lowest terms with p in [0, q), when a period q <= q_max
    // closes all sampled orbits within tol.
    std::optional<std::pair<long, long>> rational;
    // Defect of the reported q, or of the best rejected candidate when no
    // period was accepted (infinity if there was no candidate at all).
    double max_defect = 0.0;
};

/// Max over sampled phi of dist(circle_map^q(phi), phi).
double periodicity_defect(const BarLengths& bars, double L, long q, int n_samples = 8);

/// Tests the continued-fraction convergents of an orbit-average rotation
/// estimate as candidate periods. A period is accepted only if every
/// sampled phi returns within tol (a rational rotation number makes all
/// orbits periodic, so one closing sample is not evidence).
PeriodicityReport detect_periodicity(const BarLengths& bars, double L, long q_max, double tol);

}  // namespace popdyn
