#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortexlab {

/// Error thrown when an iterative solver fails to reach its tolerance.
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Error thrown when inputs violate a documented precondition.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Surface measure of the unit sphere S^{N-1} in R^N.
inline double sphere_measure(int dim) {
    if (dim < 1) throw PreconditionError("sphere_measure: dimension must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

/// Volume of the unit ball B^N.
inline double ball_measure(int dim) { return sphere_measure(dim) / dim; }

/// C^2 quintic smoothstep: 1 on (-inf, lo], 0 on [hi, inf), monotone in between.
struct Smoothstep {
    double lo = 0.25;
    double hi = 0.5;

    double operator()(double x) const {
        if (x <= lo) return 1.0;
        if (x >= hi) return 0.0;
        const double t = (x - lo) / (hi - lo);
        return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    }
    double deriv(double x) const {
        if (x <= lo || x >= hi) return 0.0;
        const double w = hi - lo;
        const double t = (x - lo) / w;
        return -30.0 * t * t * (1.0 - t) * (1.0 - t) / w;
    }
    double deriv2(double x) const {
        if (x <= lo || x >= hi) return 0.0;
        const double w = hi - lo;
        const double t = (x - lo) / w;
        return -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (w * w);
    }
};

/// Smooth bump supported on (c-w, c+w), equal to exp(1 - 1/(1-s^2)) with s = (r-c)/w.
inline double bump(double r, double center, double width) {
    const double s = (r - center) / width;
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

inline double sq(double x) { return x * x; }

/// max |a_i - b_i|
inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace vortexlab
