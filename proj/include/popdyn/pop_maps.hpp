#pragma once

#include <vector>

#include "popdyn/types.hpp"

namespace popdyn {

// Diagonal triangle of a pop: diagonal length d, opening angle alpha
// between the adjacent bar and the diagonal, and the signed increment
// delta = sign(turn) * 2 * alpha applied to the neighboring angle.
struct PopGeometry {
    double d = 0.0;
    double alpha = 0.0;
    double delta = 0.0;
};

/// Opening angle arccos((l_adj + l_out*cos(turn)) / d) in [0, pi], where
/// d^2 = l_out^2 + l_adj^2 + 2 l_out l_adj cos(turn). For the 1-2 pop the
/// roles are (l_out, l_adj) = (l1, l2) with turn = theta1.
/// Throws DegenerateDiagonal when d = 0 (l_out = l_adj, turn = pi).
double opening_angle(double l_out, double l_adj, double turn);

PopGeometry pop_geometry(double l_out, double l_adj, double turn);

/// Pop of bars 1-2 in angle space:
///   (theta1, theta2) -> (-theta1, theta2 + sign(theta1) * 2 * alpha),
/// both components wrapped to (-pi, pi]. Preserves lbar exactly in real
/// arithmetic.
AngleConfig pop12(const BarLengths& bars, const AngleConfig& angles);

// Which bar pair spans the diagonal triangle of the 2-3 pop. The moved
// diagonal joins the far ends of bars 2 and 3, so DiagonalBars23 is the
// geometrically consistent choice (it preserves lbar and matches the
// reflection oracle); DiagonalBars12 reuses (l1, l2) instead and is kept
// selectable because it fails both checks whenever l1 != l3.
enum class Pop23Variant { DiagonalBars23, DiagonalBars12 };

/// Pop of bars 2-3:
///   (theta1, theta2) -> (theta1 + sign(theta2) * 2 * alpha23, -theta2).
AngleConfig pop23(const BarLengths& bars, const AngleConfig& angles,
                  Pop23Variant variant = Pop23Variant::DiagonalBars23);

/// The two pops without the final wrap, for checking that they already land
/// in (-pi, pi]^2 on the invariant set of 0pi double-rockers.
AngleConfig pop12_unwrapped(const BarLengths& bars, const AngleConfig& angles);
AngleConfig pop23_unwrapped(const BarLengths& bars, const AngleConfig& angles,
                            Pop23Variant variant = Pop23Variant::DiagonalBars23);

enum class PopVertex { B, C };

/// Reflect one mobile joint across the line through its two neighbors
/// (B across a-c, C across b-d). All bar lengths are preserved; applying
/// the same pop twice restores the input.
/// Throws CollinearNeighbors if the two neighbors coincide.
PlanarConfig pop_geometric(const PlanarConfig& config, PopVertex vertex);

enum class PopLabel { P12, P23 };

inline PopLabel other(PopLabel l) { return l == PopLabel::P12 ? PopLabel::P23 : PopLabel::P12; }
const char* to_string(PopLabel label);

struct OrbitStep {
    PopLabel label;
    AngleConfig angles;
    double residual;  // |lbar - L| after this pop
};

struct OrbitTrace {
    AngleConfig start;
    double start_residual = 0.0;
    std::vector<OrbitStep> steps;
};

struct OrbitOptions {
    double drift_bound_rel = 1e-8;  // bound is drift_bound_rel * L
    bool renormalize = false;       // project back onto the level set each pop
};

/// Alternating pop orbit of n_pops steps starting with `first`. Residuals
/// |lbar - L| are recorded per step; the orbit is aborted with
/// DriftExceeded when one exceeds drift_bound_rel * L. The state is never
/// re-projected unless renormalize is set (re-projection would mask map
/// errors the residuals are there to expose).
OrbitTrace orbit(const Linkage& linkage, const AngleConfig& start, long n_pops,
                 PopLabel first, const OrbitOptions& options = {});

/// Ray projection onto the level set lbar = L: keeps the polar angle of
/// `near` and rescales the radius. Requires L in Lambda.
AngleConfig project_to_gamma(const BarLengths& bars, double L, const AngleConfig& near);

}  // namespace popdyn
