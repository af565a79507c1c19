#include "popdyn/quadrature.hpp"

#include <cmath>

#include "popdyn/errors.hpp"

namespace popdyn {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    long nodes = 0;
    long budget;

    double eval(double x) {
        if (++nodes > budget)
            throw QuadratureFailure("quadrature node budget exhausted before tolerance was met");
        return f(x);
    }
};

double simpson(double h, double fa, double fm, double fb) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

// Symmetric integrands can fool the error estimate near the root of the
// recursion (all probe values equal), so a minimum depth is enforced
// before a panel may be accepted.
constexpr int kMinDepth = 6;

double recurse(SimpsonState& st, double a, double m, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = st.eval(lm);
    double frm = st.eval(rm);
    double left = simpson(m - a, fa, flm, fm);
    double right = simpson(b - m, fm, frm, fb);
    double err = (left + right - whole) / 15.0;
    if ((std::abs(err) <= tol && depth >= kMinDepth) || depth >= 48) return left + right + err;
    return recurse(st, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
         + recurse(st, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, long node_budget) {
    if (a == b) return {0.0, 0};
    SimpsonState st{f, 0, node_budget};
    double m = 0.5 * (a + b);
    double fa = st.eval(a);
    double fm = st.eval(m);
    double fb = st.eval(b);
    double whole = simpson(b - a, fa, fm, fb);
    double value = recurse(st, a, m, b, fa, fm, fb, whole, abs_tol, 0);
    return {value, st.nodes};
}

}  // namespace popdyn
