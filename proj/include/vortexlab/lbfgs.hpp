#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "vortexlab/common.hpp"

namespace vortexlab {

struct LbfgsOptions {
    int max_iterations = 500;
    int memory = 10;
    double gradient_tolerance = 1e-9;  // on the max-norm of the gradient
    double min_step = 1e-14;
    /// Optional projection applied to the iterate after each accepted step.
    std::function<void(std::vector<double>&)> project;
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;  // objective per accepted iteration
};

/// Limited-memory quasi-Newton descent with backtracking Armijo line search.
/// Deterministic: no randomness, fixed evaluation order.
inline LbfgsResult lbfgs_minimize(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& value_grad,
    std::vector<double> x0, const LbfgsOptions& opt = {}) {
    const std::size_t n = x0.size();
    std::vector<double> g(n), gn(n);
    LbfgsResult out;
    out.x = std::move(x0);
    if (opt.project) opt.project(out.x);
    double fx = value_grad(out.x, g);
    out.history.push_back(fx);

    std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs;  // (s, y)
    std::deque<double> rho;

    auto maxnorm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double a : v) m = std::max(m, std::abs(a));
        return m;
    };

    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        out.gradient_norm = maxnorm(g);
        if (out.gradient_norm <= opt.gradient_tolerance) {
            out.converged = true;
            break;
        }
        // two-loop recursion
        std::vector<double> q = g;
        std::vector<double> alpha(pairs.size());
        for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
            double sq = 0.0;
            for (std::size_t k = 0; k < n; ++k) sq += pairs[i].first[k] * q[k];
            alpha[i] = rho[i] * sq;
            for (std::size_t k = 0; k < n; ++k) q[k] -= alpha[i] * pairs[i].second[k];
        }
        double gamma = 1.0;
        if (!pairs.empty()) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                sy += pairs.back().first[k] * pairs.back().second[k];
                yy += pairs.back().second[k] * pairs.back().second[k];
            }
            if (yy > 0.0) gamma = sy / yy;
        }
        for (auto& v : q) v *= gamma;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            double yq = 0.0;
            for (std::size_t k = 0; k < n; ++k) yq += pairs[i].second[k] * q[k];
            const double beta = rho[i] * yq;
            for (std::size_t k = 0; k < n; ++k) q[k] += pairs[i].first[k] * (alpha[i] - beta);
        }
        // descent direction is -q
        double gd = 0.0;
        for (std::size_t k = 0; k < n; ++k) gd -= g[k] * q[k];
        if (gd >= 0.0) {  // stale curvature; restart from steepest descent
            pairs.clear();
            rho.clear();
            q = g;
            gd = 0.0;
            for (std::size_t k = 0; k < n; ++k) gd -= g[k] * g[k];
        }

        double step = 1.0;
        std::vector<double> xn(n);
        double fn = fx;
        bool accepted = false;
        while (step >= opt.min_step) {
            for (std::size_t k = 0; k < n; ++k) xn[k] = out.x[k] - step * q[k];
            if (opt.project) opt.project(xn);
            fn = value_grad(xn, gn);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * step * gd) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> s(n), y(n);
        double sy = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            s[k] = xn[k] - out.x[k];
            y[k] = gn[k] - g[k];
            sy += s[k] * y[k];
        }
        out.x = std::move(xn);
        fx = fn;
        g = gn;
        out.history.push_back(fx);
        if (sy > 1e-14) {
            pairs.emplace_back(std::move(s), std::move(y));
            rho.push_back(1.0 / sy);
            if (static_cast<int>(pairs.size()) > opt.memory) {
                pairs.pop_front();
                rho.pop_front();
            }
        }
    }
    out.value = fx;
    out.iterations = it;
    if (!out.converged) out.gradient_norm = maxnorm(g);
    return out;
}

}  // namespace vortexlab
