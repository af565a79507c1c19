#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace popdyn {

// Base class for all library errors so callers can catch popdyn failures
// separately from generic std exceptions.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bar lengths violate the closure bounds (no configuration exists).
struct InfeasibleLinkage : Error {
    using Error::Error;
};

// Angles do not satisfy |lbar - L| <= tol, so the chain cannot close.
struct NotOnManifold : Error {
    using Error::Error;
};

// Diagonal between the popped vertex's neighbors has length zero; the
// opening angle is undefined (l1 = l2 and theta = pi).
struct DegenerateDiagonal : Error {
    using Error::Error;
};

// The two neighbors of a popped vertex coincide; no reflection line.
struct CollinearNeighbors : Error {
    using Error::Error;
};

// Orbit residual |lbar - L| exceeded the configured drift bound.
struct DriftExceeded : Error {
    long step;
    DriftExceeded(long step_, const std::string& msg) : Error(msg), step(step_) {}
};

// (0,0) has no polar angle.
struct OriginUndefined : Error {
    using Error::Error;
};

// L is outside the admissible interval Lambda for the given bar lengths.
struct OutsideLambda : Error {
    using Error::Error;
};

// A single lift step moved phi by almost pi; nearest-branch continuation
// cannot decide the winding.
struct BranchAmbiguity : Error {
    using Error::Error;
};

// Adaptive quadrature could not reach the requested tolerance within the
// node budget.
struct QuadratureFailure : Error {
    using Error::Error;
};

// Contour extraction could not stabilize the level-set topology under
// refinement.
struct ResolutionTooCoarse : Error {
    using Error::Error;
};

// Rotation-number scan found a non-monotone adjacent pair where strict
// monotonicity was asserted.
struct MonotonicityViolation : Error {
    std::size_t index_a, index_b;
    MonotonicityViolation(std::size_t a, std::size_t b, const std::string& msg)
        : Error(msg), index_a(a), index_b(b) {}
};

}  // namespace popdyn
