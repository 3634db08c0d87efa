#include "vortexlab/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "vortexlab/common.hpp"

namespace vortexlab {

std::vector<double> fd_weights(double z, std::span<const double> nodes, int order) {
    const int n = static_cast<int>(nodes.size());
    std::vector<double> c(static_cast<std::size_t>(n) * (order + 1), 0.0);
    auto C = [&](int i, int m) -> double& { return c[static_cast<std::size_t>(i) * (order + 1) + m]; };
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int m = mn; m >= 1; --m)
                    C(i, m) = c1 * (m * C(i - 1, m - 1) - c5 * C(i - 1, m)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int m = mn; m >= 1; --m)
                C(j, m) = (c4 * C(j, m) - m * C(j, m - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = C(i, order);
    return w;
}

RadialGrid::RadialGrid(int dim, int points, double grading)
    : dim_(dim), m_(points), grading_(grading) {
    if (dim < 2) throw PreconditionError("RadialGrid: dimension must be >= 2");
    if (points < 12 || points % 3 != 0)
        throw PreconditionError("RadialGrid: point count must be >= 12 and divisible by 3");
    if (grading < 1.0) throw PreconditionError("RadialGrid: grading must be >= 1");
    r_.resize(points + 1);
    for (int i = 0; i <= points; ++i) r_[i] = std::pow(static_cast<double>(i) / points, grading);
    r_[points] = 1.0;
}

namespace {

// 6-point Gauss-Legendre abscissae/weights on [-1, 1].
constexpr double kGl6X[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                             0.2386191860831969, 0.6612093864662645, 0.9324695142031521};
constexpr double kGl6W[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                             0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

// Weights of the product rule on one panel: nodes x[0..k], integration over
// [a, b], weight x^alpha, so that sum w_i f(x_i) = int L[f](x) x^alpha dx with
// L the interpolating polynomial. Panels near the origin use exact monomial
// moments in the scaled variable x/b; panels away from it integrate each
// Lagrange basis function against the (there smooth) weight by Gauss-Legendre,
// which is exact for every alpha >= 0 in use and avoids the ill-conditioned
// monomial expansion of clustered nodes.
void panel_weights(std::span<const double> x, double a, double b, int alpha,
                   std::span<double> out) {
    const int k = static_cast<int>(x.size());
    auto lagrange = [&](int i, double z) {
        double p = 1.0;
        for (int j = 0; j < k; ++j)
            if (j != i) p *= (z - x[j]) / (x[i] - x[j]);
        return p;
    };
    if (a > 2.0 * (b - a)) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < k; ++i) {
            double w = 0.0;
            for (int g = 0; g < 6; ++g) {
                const double z = mid + half * kGl6X[g];
                w += kGl6W[g] * lagrange(i, z) * std::pow(z, alpha);
            }
            out[i] = w * half;
        }
        return;
    }
    const double scale = b;
    std::vector<double> xi(k);
    for (int i = 0; i < k; ++i) xi[i] = x[i] / scale;
    const double xa = a / scale, xb = 1.0;

    // moments I_m = integral of xi^(alpha+m) over [xa, xb]
    std::vector<double> mom(k);
    for (int m = 0; m < k; ++m) {
        const double p = alpha + m + 1;
        if (std::abs(p) < 1e-14)
            mom[m] = std::log(xb / xa);
        else
            mom[m] = (std::pow(xb, p) - (xa == 0.0 ? 0.0 : std::pow(xa, p))) / p;
    }
    // Lagrange basis coefficients by incremental polynomial products
    for (int i = 0; i < k; ++i) {
        std::vector<double> poly{1.0};
        double denom = 1.0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            denom *= xi[i] - xi[j];
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t m = 0; m < poly.size(); ++m) {
                next[m] -= xi[j] * poly[m];
                next[m + 1] += poly[m];
            }
            poly = std::move(next);
        }
        double w = 0.0;
        for (std::size_t m = 0; m < poly.size(); ++m) w += poly[m] / denom * mom[m];
        out[i] = w * std::pow(scale, alpha + 1);
    }
}

}  // namespace

std::vector<double> RadialGrid::build_weights(int alpha) const {
    std::vector<double> w(m_ + 1, 0.0);
    double pw[4];
    for (int p = 0; p < m_ / 3; ++p) {
        const int i0 = 3 * p;
        if (p == 0 && alpha <= -1) {
            // skip [0, r_1]; quadratic product rule on [r_1, r_3]
            const double x[3] = {r_[1], r_[2], r_[3]};
            panel_weights(std::span<const double>(x, 3), r_[1], r_[3], alpha,
                          std::span<double>(pw, 3));
            for (int i = 0; i < 3; ++i) w[1 + i] += pw[i];
            continue;
        }
        const double x[4] = {r_[i0], r_[i0 + 1], r_[i0 + 2], r_[i0 + 3]};
        panel_weights(std::span<const double>(x, 4), r_[i0], r_[i0 + 3], alpha,
                      std::span<double>(pw, 4));
        for (int i = 0; i < 4; ++i) w[i0 + i] += pw[i];
    }
    return w;
}

const std::vector<double>& RadialGrid::weights(int alpha) const {
    auto it = weight_cache_.find(alpha);
    if (it == weight_cache_.end())
        it = weight_cache_.emplace(alpha, build_weights(alpha)).first;
    return it->second;
}

const std::vector<double>& RadialGrid::smooth_weights(int alpha) const {
    auto it = smooth_weight_cache_.find(alpha);
    if (it == smooth_weight_cache_.end()) {
        std::vector<double> w(m_ + 1, 0.0);
        for (int i = 0; i <= m_; ++i) {
            const double hl = i > 0 ? r_[i] - r_[i - 1] : 0.0;
            const double hr = i < m_ ? r_[i + 1] - r_[i] : 0.0;
            const double cell = 0.5 * (hl + hr);
            w[i] = (i == 0 && alpha < 0) ? 0.0 : cell * std::pow(r_[i], alpha);
        }
        it = smooth_weight_cache_.emplace(alpha, std::move(w)).first;
    }
    return it->second;
}

double RadialGrid::integrate(std::span<const double> values, int alpha) const {
    if (static_cast<int>(values.size()) != m_ + 1)
        throw PreconditionError("RadialGrid::integrate: size mismatch");
    const auto& w = weights(alpha);
    double s = 0.0;
    for (int i = alpha <= -1 ? 1 : 0; i <= m_; ++i) s += w[i] * values[i];
    return s;
}

const RadialGrid::DerivRows& RadialGrid::deriv1_rows() const {
    if (!deriv_rows_) {
        auto rows = std::make_shared<DerivRows>();
        rows->base.resize(m_ + 1);
        rows->coeff.resize(3 * (m_ + 1));
        for (int i = 0; i <= m_; ++i) {
            const int b = std::min(std::max(i - 1, 0), m_ - 2);
            rows->base[i] = b;
            const auto w = fd_weights(r_[i], std::span<const double>(r_.data() + b, 3), 1);
            for (int c = 0; c < 3; ++c) rows->coeff[3 * i + c] = w[c];
        }
        deriv_rows_ = std::move(rows);
    }
    return *deriv_rows_;
}

std::vector<double> RadialGrid::deriv1(std::span<const double> values) const {
    std::vector<double> d(m_ + 1);
    for (int i = 1; i < m_; ++i) {
        const double hm = r_[i] - r_[i - 1], hp = r_[i + 1] - r_[i];
        d[i] = (-hp / (hm * (hm + hp))) * values[i - 1] +
               ((hp - hm) / (hm * hp)) * values[i] +
               (hm / (hp * (hm + hp))) * values[i + 1];
    }
    {
        const auto w = fd_weights(r_[0], std::span<const double>(r_.data(), 3), 1);
        d[0] = w[0] * values[0] + w[1] * values[1] + w[2] * values[2];
    }
    {
        const auto w = fd_weights(r_[m_], std::span<const double>(r_.data() + m_ - 2, 3), 1);
        d[m_] = w[0] * values[m_ - 2] + w[1] * values[m_ - 1] + w[2] * values[m_];
    }
    return d;
}

std::vector<double> RadialGrid::deriv2(std::span<const double> values) const {
    std::vector<double> d(m_ + 1);
    for (int i = 1; i < m_; ++i) {
        const double hm = r_[i] - r_[i - 1], hp = r_[i + 1] - r_[i];
        d[i] = 2.0 / (hm * (hm + hp)) * values[i - 1] - 2.0 / (hm * hp) * values[i] +
               2.0 / (hp * (hm + hp)) * values[i + 1];
    }
    {
        const auto w = fd_weights(r_[0], std::span<const double>(r_.data(), 4), 2);
        d[0] = w[0] * values[0] + w[1] * values[1] + w[2] * values[2] + w[3] * values[3];
    }
    {
        const auto w = fd_weights(r_[m_], std::span<const double>(r_.data() + m_ - 3, 4), 2);
        d[m_] = w[0] * values[m_ - 3] + w[1] * values[m_ - 2] + w[2] * values[m_ - 1] +
                w[3] * values[m_];
    }
    return d;
}

std::vector<double> RadialGrid::midpoint_values(std::span<const double> values) const {
    std::vector<double> v(m_);
    for (int i = 0; i < m_; ++i) v[i] = 0.5 * (values[i] + values[i + 1]);
    return v;
}

std::vector<double> RadialGrid::midpoint_slopes(std::span<const double> values) const {
    std::vector<double> v(m_);
    for (int i = 0; i < m_; ++i) v[i] = (values[i + 1] - values[i]) / (r_[i + 1] - r_[i]);
    return v;
}

std::vector<double> RadialGrid::integrate_from_boundary(std::span<const double> slopes,
                                                        double value_at_one) const {
    if (static_cast<int>(slopes.size()) != m_)
        throw PreconditionError("integrate_from_boundary: need one slope per cell");
    std::vector<double> v(m_ + 1);
    v[m_] = value_at_one;
    for (int i = m_ - 1; i >= 0; --i) v[i] = v[i + 1] - slopes[i] * (r_[i + 1] - r_[i]);
    return v;
}

}  // namespace vortexlab
