#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "popdyn/circle_map.hpp"
#include "popdyn/linkage.hpp"
#include "popdyn/parallel.hpp"
#include "popdyn/types.hpp"

namespace popdyn {

struct DensityReport {
    long n_iterates = 0;
    double max_gap_phi = 0.0;  // largest empty phi arc after n_iterates rounds
    std::vector<std::pair<long, double>> gap_history;  // (n, max gap), nonincreasing
};

/// Iterate circle_map n times from phi0 and track how the largest empty
/// arc between the sorted orbit points shrinks. Checkpoints are decades
/// (10, 100, ...) plus n itself.
DensityReport density_report(const Linkage& linkage, double phi0, long n);

struct ScanRow {
    double L = 0.0;
    RotationEstimate estimate;
    std::optional<std::pair<long, long>> periodic;  // (p, q) if a period was detected
};

enum class MonotonicityVerdict { Monotone, Skipped, Violated };

struct ScanResult {
    std::vector<ScanRow> rows;
    MonotonicityVerdict verdict = MonotonicityVerdict::Skipped;
    std::optional<std::pair<std::size_t, std::size_t>> offending;  // adjacent pair indices
    double min_adjacent_step = 0.0;  // smallest |rho_{i+1} - rho_i| over the grid
};

struct ScanOptions {
    RhoMethod method = RhoMethod::MeasureIntegral;
    double quad_tol = 1e-10;
    long orbit_n = 1000000;  // used when method == OrbitAverage
    double phi0 = 0.3;
    long q_max = 50;         // 0 disables periodicity detection
    double period_tol = 1e-9;
};

/// Rotation numbers over a grid of L values (all must lie in Lambda).
/// Grid points are independent and evaluated in parallel; results are
/// stored by index, so serial and parallel runs produce identical output.
/// Strict monotonicity across the grid is asserted post hoc when
/// strict_theorem_conditions holds for the family, otherwise the verdict
/// is Skipped. A violation is reported in the result, not thrown.
ScanResult scan_rotation(const BarLengths& bars, std::span<const double> L_grid,
                         const ScanOptions& options = {},
                         ExecutionPolicy policy = ExecutionPolicy::Parallel);

struct Relabeling {
    int rotation = 0;        // cyclic shifts of (l1, l2, l3, L) applied
    Linkage relabeled;
    MotionClass relabeled_class;      // satisfies T1>0, T2>0, T3<0
    bool outer_condition_before = false;  // max{l2,L} <= min{l1,l3} or min{l2,L} >= max{l1,l3}
    bool theorem_condition_after = false; // relabeled l2 extremal among relabeled l1, l3
};

/// Search the four cyclic rotations of (l1, l2, l3, L) for the labeling
/// with T1>0, T2>0, T3<0. Exists exactly when T1*T2*T3 < 0 away from
/// degeneracies; returns nullopt otherwise.
std::optional<Relabeling> relabel_for_theorem(const Linkage& linkage);

struct GammaGeometry {
    int components = 0;
    // One closed polyline per loop of the level set, on the (-pi, pi]^2 torus.
    std::vector<std::vector<AngleConfig>> polylines;
    std::vector<int> polyline_component;  // component id per polyline
    int resolution = 0;                   // grid used for the final extraction
};

/// Fill out[j*n + i] with lbar_squared at the grid corner
/// (-pi + 2pi i/n, -pi + 2pi j/n) minus L^2. The parallel path splits rows
/// across threads and is bitwise identical to the serial one.
void fill_gamma_field(const BarLengths& bars, double L, int n, std::span<double> out,
                      ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Trace the level set lbar = L on the angle torus by marching squares.
/// resolution 0 selects the automatic mode: start at 1024 and refine x2
/// until the component count is stable across two refinements (throws
/// ResolutionTooCoarse if that never happens below max_resolution, or if
/// a feasible linkage yields no contour at all).
GammaGeometry gamma_geometry(const Linkage& linkage, int resolution = 0,
                             ExecutionPolicy policy = ExecutionPolicy::Parallel,
                             int max_resolution = 8192);

/// Component id of the polyline nearest to the query point (torus metric).
/// distance_margin receives the gap between the nearest and the nearest
/// other-component vertex when non-null.
int nearest_component(const GammaGeometry& geometry, const AngleConfig& point,
                      double* distance = nullptr, double* other_distance = nullptr);

/// Run the alternating pop orbit and report whether it stays in the
/// connected component of the level set containing the start point.
/// Classification ambiguities (orbit point nearly equidistant from two
/// components relative to the grid cell) trigger automatic refinement.
bool confinement_check(const Linkage& linkage, const AngleConfig& start, long n_pops);

}  // namespace popdyn
