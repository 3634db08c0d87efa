#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "vortexlab/banded.hpp"
#include "vortexlab/common.hpp"

namespace vortexlab {

/// Banded residual system for the damped Newton driver below.
struct NewtonProblem {
    int size = 0;
    int bandwidth = 1;
    std::function<void(const std::vector<double>&, std::vector<double>&)> residual;
    std::function<void(const std::vector<double>&, BandedMatrix&)> jacobian;
    // Per-row equilibration for the convergence norm. Collocation rows near the
    // origin carry 1/r^2-sized entries whose rounding noise alone would exceed
    // any absolute tolerance.
    std::vector<double> row_scale;
};

inline double newton_norm(const NewtonProblem& p, const std::vector<double>& v) {
    double s = 0.0;
    if (p.row_scale.empty()) {
        for (double x : v) s += x * x;
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) s += sq(v[i] * p.row_scale[i]);
    }
    return std::sqrt(s);
}

/// Damped Newton with Levenberg fallback on the residual system.
inline int damped_newton(const NewtonProblem& p, std::vector<double>& z, double tol,
                         int max_iter) {
    std::vector<double> res(p.size);
    p.residual(z, res);
    double rn = newton_norm(p, res);
    int it = 0;
    double lev = 0.0;
    for (; it < max_iter; ++it) {
        if (rn <= tol) return it;
        BandedMatrix jac(p.size, p.bandwidth, p.bandwidth);
        p.jacobian(z, jac);
        if (lev > 0.0)
            for (int i = 0; i < p.size; ++i) jac.add(i, i, lev);
        std::vector<double> rhs(p.size);
        for (int i = 0; i < p.size; ++i) rhs[i] = -res[i];
        std::vector<double> step;
        try {
            jac.factor();
            step = jac.solve(rhs);
        } catch (const SolveError&) {
            lev = lev == 0.0 ? 1.0 : lev * 10.0;
            if (lev > 1e12) throw SolveError("damped_newton: singular Jacobian");
            continue;
        }
        double lambda = 1.0;
        bool accepted = false;
        std::vector<double> trial(p.size), tres(p.size);
        for (int ls = 0; ls < 30; ++ls) {
            for (int i = 0; i < p.size; ++i) trial[i] = z[i] + lambda * step[i];
            p.residual(trial, tres);
            const double tn = newton_norm(p, tres);
            if (std::isfinite(tn) && tn < rn * (1.0 - 1e-4 * lambda)) {
                z = trial;
                res = tres;
                rn = tn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (accepted) {
            lev = lev > 0.0 ? lev * 0.25 : 0.0;
            if (lev < 1e-12) lev = 0.0;
        } else {
            lev = lev == 0.0 ? 1e-4 * (1.0 + rn) : lev * 10.0;
            if (lev > 1e12) throw SolveError("damped_newton: line search stalled");
        }
    }
    if (rn > tol) throw SolveError("damped_newton: no convergence after max iterations");
    return it;
}

}  // namespace vortexlab
