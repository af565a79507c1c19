#pragma once

#include <string>
#include <utility>

#include "popdyn/types.hpp"

namespace popdyn {

/// Squared closure length of the open three-bar chain:
///   l1^2 + l2^2 + l3^2 + 2 l1 l2 cos(theta1) + 2 l2 l3 cos(theta2)
///   + 2 l1 l3 cos(theta1 + theta2).
double lbar_squared(const BarLengths& bars, const AngleConfig& angles);

/// Closure length itself. The radicand is a squared chord length and thus
/// nonnegative; round-off negatives (below ~1e-14 * sum^2) are clamped to 0.
double lbar(const BarLengths& bars, const AngleConfig& angles);

/// Empty string if the closure bounds
///   max{0, l1-l2-l3, -l1+l2-l3, -l1-l2+l3} < L < l1+l2+l3
/// hold (with all lengths positive and finite), otherwise a message naming
/// the violated bound.
std::string feasibility_violation(const Linkage& linkage);

bool feasible(const Linkage& linkage);

/// Throws InfeasibleLinkage naming the violated bound.
void require_feasible(const Linkage& linkage);

/// Motion classification from the signs of
///   T1 = -l1+l2-l3+L,  T2 = -l1-l2+l3+L,  T3 = -l1+l2+l3-L.
/// Any |Ti| below 1e-12*(l1+l2+l3) counts as zero (DegenerateBoundary).
MotionClass classify(const Linkage& linkage);

/// True iff the linkage is a 0pi double-rocker (T1>0, T2>0, T3<0) and the
/// floating bar is extremal: l2 <= min{l1,l3} or l2 >= max{l1,l3}.
bool theorem_conditions(const Linkage& linkage);

/// True when the dense-orbit machinery applies with strict monotonicity,
/// i.e. theorem_conditions holds and not all three bar lengths are equal
/// (the all-equal family is the degenerate periodic case).
bool strict_theorem_conditions(const Linkage& linkage);

/// |lbar(angles) - L| <= tol.
bool on_gamma(const Linkage& linkage, const AngleConfig& angles, double tol);

/// The open interval Lambda of ground lengths for which the level set is a
/// single loop around the origin:
///   (max{-l1+l2+l3, l1-l2+l3, l1+l2-l3}, l1+l2+l3).
std::pair<double, double> lambda_interval(const BarLengths& bars);

bool in_lambda(const BarLengths& bars, double L);

/// Throws OutsideLambda with the violated inequality spelled out.
void require_in_lambda(const BarLengths& bars, double L);

/// Joint positions for the given angles, with a = (0,0) and d on the
/// positive x axis at distance lbar (== L within tol). Headings accumulate
/// as bar k+1 heading = bar k heading + theta_k; the chain is built with
/// bar 1 horizontal and then rotated so d lands on the axis. Negating both
/// angles yields the mirror image across the ground bar.
/// Throws NotOnManifold if |lbar - L| > tol.
PlanarConfig forward_kinematics(const Linkage& linkage, const AngleConfig& angles,
                                double tol = 1e-9);

/// Inverse of forward_kinematics: turning angles of a planar chain.
AngleConfig angles_of(const PlanarConfig& config);

/// Scalar root solve along the ray through (dir_x, dir_y): the unique
/// gamma > 0 with lbar(gamma*dir) = L. Requires L in Lambda. Used by the
/// polar coordinates and by orbit renormalization.
struct RaySolve {
    double gamma = 0.0;
    int iterations = 0;
};
RaySolve solve_gamma_on_ray(const BarLengths& bars, double L, double dir_x, double dir_y);

}  // namespace popdyn
