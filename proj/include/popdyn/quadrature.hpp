#pragma once

#include <functional>

namespace popdyn {

struct QuadResult {
    double value = 0.0;
    long nodes = 0;
};

/// Adaptive Simpson integration of f over [a, b] to the given absolute
/// tolerance. Throws QuadratureFailure when the node budget is exhausted
/// before the tolerance is met.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, long node_budget = 1000000);

}  // namespace popdyn
