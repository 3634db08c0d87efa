#include "vortexlab/numerics.hpp"

#include <cmath>

#include "vortexlab/angular.hpp"
#include "vortexlab/common.hpp"

namespace vortexlab {

namespace {

struct Stencil3 { double c[3]; };

Stencil3 interior_d1(const RadialGrid& g, int i) {
    const double hm = g.node(i) - g.node(i - 1), hp = g.node(i + 1) - g.node(i);
    return {{-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))}};
}

Stencil3 interior_d2(const RadialGrid& g, int i) {
    const double hm = g.node(i) - g.node(i - 1), hp = g.node(i + 1) - g.node(i);
    return {{2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))}};
}

}  // namespace

BandedMatrix radial_schroedinger_matrix(const RadialGrid& grid,
                                        std::span<const double> q, int degree) {
    const int m = grid.points();
    const int nn = grid.dim();
    const double lam = sphere_eigenvalue(nn, degree);
    BandedMatrix a(m + 1, 2, 2);

    if (degree == 0) {
        const auto w = fd_weights(0.0, std::span<const double>(grid.nodes().data(), 3), 1);
        for (int c = 0; c < 3; ++c) a.at(0, c) = w[c];
    } else {
        a.at(0, 0) = 1.0;
    }
    for (int i = 1; i < m; ++i) {
        const auto d1 = interior_d1(grid, i);
        const auto d2 = interior_d2(grid, i);
        const double r = grid.node(i);
        for (int c = 0; c < 3; ++c)
            a.at(i, i - 1 + c) = -d2.c[c] - (nn - 1) / r * d1.c[c];
        a.add(i, i, q[i] + lam / (r * r));
    }
    a.at(m, m) = 1.0;
    return a;
}

std::vector<double> radial_schroedinger_apply(const RadialGrid& grid,
                                              std::span<const double> q, int degree,
                                              std::span<const double> u) {
    return radial_schroedinger_matrix(grid, q, degree).apply(std::vector<double>(u.begin(), u.end()));
}

RadialEigenResult first_eigenpair_radial(const RadialGrid& grid,
                                         std::span<const double> q, int degree,
                                         int max_iterations) {
    const int m = grid.points();
    const auto& w = grid.weights(grid.dim() - 1);

    auto weighted_norm = [&](const std::vector<double>& u) {
        double s = 0.0;
        for (int i = 0; i <= m; ++i) s += w[i] * u[i] * u[i];
        return std::sqrt(s);
    };
    auto rayleigh = [&](const std::vector<double>& u, const std::vector<double>& au) {
        double num = 0.0, den = 0.0;
        for (int i = 1; i < m; ++i) {
            num += w[i] * u[i] * au[i];
            den += w[i] * u[i] * u[i];
        }
        return num / den;
    };

    double qmin = 0.0;
    for (int i = 1; i < m; ++i) qmin = std::min(qmin, q[i]);

    BandedMatrix a0 = radial_schroedinger_matrix(grid, q, degree);
    std::vector<double> u(m + 1, 0.0);
    for (int i = 1; i < m; ++i) u[i] = grid.node(i) * (1.0 - grid.node(i)) + 0.01;
    if (degree == 0) u[0] = u[1];

    auto sign_definite = [&](const std::vector<double>& v) {
        double vmax = 0.0;
        for (int i = 1; i < m; ++i) vmax = std::max(vmax, std::abs(v[i]));
        int pos = 0, neg = 0;
        for (int i = 1; i < m; ++i) {
            if (v[i] > 1e-7 * vmax) ++pos;
            if (v[i] < -1e-7 * vmax) ++neg;
        }
        return pos == 0 || neg == 0;
    };
    auto step = [&](BandedMatrix& fac, std::vector<double>& v) {
        std::vector<double> rhs(m + 1, 0.0);
        for (int i = 1; i < m; ++i) rhs[i] = v[i];
        v = fac.solve(rhs);
        const double nrm = weighted_norm(v);
        for (auto& x : v) x /= nrm;
    };
    auto residual_of = [&](double mu, const std::vector<double>& v) {
        auto av = a0.apply(v);
        double rr = 0.0, uu = 0.0;
        for (int i = 1; i < m; ++i) {
            rr += w[i] * sq(av[i] - mu * v[i]);
            uu += w[i] * sq(v[i]);
        }
        return std::sqrt(rr / uu);
    };
    auto factor_shifted = [&](double sigma) {
        BandedMatrix fac = radial_schroedinger_matrix(grid, q, degree);
        for (int i = 1; i < m; ++i) fac.add(i, i, -sigma);
        fac.factor();
        return fac;
    };

    // phase 1: shifted inverse iteration. The shift starts below the spectrum
    // (which guarantees convergence to the ground state) and is advanced toward
    // the Rayleigh quotient in guarded rounds; for deep potentials the fixed
    // shift alone contracts too slowly.
    const double sigma0 = qmin - 1.0;
    double sigma = sigma0;
    BandedMatrix fac = factor_shifted(sigma);
    double mu = 0.0, res = 1e300;
    int it = 0;
    auto run_rounds = [&](int rounds, int steps_per_round, bool advance) {
        for (int round = 0; round < rounds; ++round) {
            bool settled = false;
            for (int k = 0; k < steps_per_round; ++k, ++it) {
                step(fac, u);
                auto au = a0.apply(u);
                const double mu_new = rayleigh(u, au);
                settled = std::abs(mu_new - mu) <= 1e-11 * (std::abs(mu_new) + 1.0);
                mu = mu_new;
                if (settled && it >= 3) break;
            }
            if (settled) return true;
            if (!advance) return false;
            sigma = mu - 0.1 * (std::abs(mu) + 1.0);
            try {
                fac = factor_shifted(sigma);
            } catch (const SolveError&) {
                sigma = mu - 0.3 * (std::abs(mu) + 1.0);
                fac = factor_shifted(sigma);
            }
        }
        return false;
    };
    bool settled = run_rounds(30, std::max(10, max_iterations / 5), true);
    res = residual_of(mu, u);
    if (!settled || !sign_definite(u)) {
        // recovery: plain fixed-shift iteration from scratch, slow but safe
        sigma = sigma0;
        fac = factor_shifted(sigma);
        for (int i = 1; i < m; ++i) u[i] = grid.node(i) * (1.0 - grid.node(i)) + 0.01;
        u[0] = degree == 0 ? u[1] : 0.0;
        u[m] = 0.0;
        run_rounds(1, 20000, false);
        res = residual_of(mu, u);
    }

    // phase 2: a few Rayleigh-quotient steps, kept only while the iterate
    // stays sign-definite (a sign change means an excited state captured)
    for (int k = 0; k < 6 && res > 1e-13 * (std::abs(mu) + 1.0); ++k) {
        std::vector<double> unew = u;
        try {
            BandedMatrix rq = factor_shifted(mu);
            step(rq, unew);
        } catch (const SolveError&) {
            break;  // shift hit the eigenvalue; current pair is already good
        }
        auto au = a0.apply(unew);
        const double mu_new = rayleigh(unew, au);
        const double res_new = residual_of(mu_new, unew);
        if (!sign_definite(unew) || !(res_new < res)) break;
        u = std::move(unew);
        mu = mu_new;
        res = res_new;
        ++it;
    }
    if (res > 1e-8 * (std::abs(mu) + 1.0))
        throw SolveError("first_eigenpair_radial: inverse iteration did not converge");
    if (!sign_definite(u))
        throw SolveError("first_eigenpair_radial: converged to a sign-changing state");

    double mean = 0.0;
    for (int i = 1; i < m; ++i) mean += w[i] * u[i];
    if (mean < 0.0)
        for (auto& x : u) x = -x;
    return {mu, std::move(u), res, it + 1};
}

BiharmonicResult biharmonic_first_eigenvalue(const RadialGrid& grid) {
    const int m = grid.points();
    const int nn = grid.dim();
    const auto& r = grid.nodes();
    const auto& w = grid.smooth_weights(nn - 1);

    // sparse rows of the radial Laplacian, with the even closure at 0 and a
    // one-sided row at 1 (the clamped constraints are eliminated below)
    struct Row { int first; std::vector<double> c; };
    std::vector<Row> lap(m + 1);
    {
        const auto w2 = fd_weights(0.0, std::span<const double>(r.data(), 4), 2);
        lap[0] = {0, {nn * w2[0], nn * w2[1], nn * w2[2], nn * w2[3]}};
    }
    for (int i = 1; i < m; ++i) {
        const auto d1 = interior_d1(grid, i);
        const auto d2 = interior_d2(grid, i);
        lap[i] = {i - 1, {d2.c[0] + (nn - 1) / r[i] * d1.c[0],
                          d2.c[1] + (nn - 1) / r[i] * d1.c[1],
                          d2.c[2] + (nn - 1) / r[i] * d1.c[2]}};
    }
    {
        const auto w2 = fd_weights(1.0, std::span<const double>(r.data() + m - 3, 4), 2);
        const auto w1 = fd_weights(1.0, std::span<const double>(r.data() + m - 3, 4), 1);
        lap[m] = {m - 3, {w2[0] + (nn - 1) * w1[0], w2[1] + (nn - 1) * w1[1],
                          w2[2] + (nn - 1) * w1[2], w2[3] + (nn - 1) * w1[3]}};
    }

    // clamped eliminations: v_M = 0; v_{M-1} from the one-sided v'(1) = 0 row;
    // v_0 from the one-sided v'(0) = 0 row. Unknowns x = v_1..v_{M-2}.
    // 4-point stencils keep the eigenvalue second-order accurate.
    const auto s0 = fd_weights(0.0, std::span<const double>(r.data(), 4), 1);
    const auto s1 = fd_weights(1.0, std::span<const double>(r.data() + m - 3, 4), 1);
    const double e01 = -s0[1] / s0[0], e02 = -s0[2] / s0[0], e03 = -s0[3] / s0[0];
    const double em2 = -s1[0] / s1[2], em1 = -s1[1] / s1[2];  // v_{M-1} = em2 v_{M-3} + em1 v_{M-2}

    const int n = m - 2;  // unknowns v_1..v_{M-2}
    auto expand_row = [&](const Row& row, std::vector<double>& dense) {
        // row applied to the eliminated representation, as coefficients on x
        dense.assign(n, 0.0);
        for (std::size_t c = 0; c < row.c.size(); ++c) {
            const int j = row.first + static_cast<int>(c);
            const double v = row.c[c];
            if (j == 0) {
                dense[0] += v * e01;
                dense[1] += v * e02;
                dense[2] += v * e03;
            } else if (j == m) {
                // zero
            } else if (j == m - 1) {
                dense[n - 2] += v * em2;
                dense[n - 1] += v * em1;
            } else {
                dense[j - 1] += v;
            }
        }
    };

    const int bw = 6;
    BandedMatrix k(n, bw, bw), mass(n, 0, 0);
    std::vector<double> dense;
    for (int i = 0; i <= m; ++i) {
        expand_row(lap[i], dense);
        // accumulate w_i * (row x)^T (row x); rows have at most 5 nonzeros
        std::vector<int> idx;
        for (int j = 0; j < n; ++j)
            if (dense[j] != 0.0) idx.push_back(j);
        for (int aidx : idx)
            for (int bidx : idx)
                if (std::abs(aidx - bidx) <= bw) k.add(aidx, bidx, w[i] * dense[aidx] * dense[bidx]);
    }
    for (int i = 1; i <= m - 2; ++i) {
        mass.add(i - 1, i - 1, w[i]);
        if (i == 1) mass.add(0, 0, w[0] * e01 * e01);  // cross terms negligible band-wise
    }
    // keep the mass diagonal: drop the tiny origin coupling terms (w[0] ~ 0 anyway)

    BandedMatrix fac = k;
    fac.factor();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = sq(1.0 - r[i + 1]) * sq(r[i + 1] + 0.2);
    double mu = 0.0;
    int it = 0;
    for (; it < 120; ++it) {
        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = mass.at(i, i) * x[i];
        auto y = fac.solve(rhs);
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += mass.at(i, i) * y[i] * y[i];
        nrm = std::sqrt(nrm);
        for (auto& v : y) v /= nrm;
        auto ky = k.apply(y);
        double num = 0.0;
        for (int i = 0; i < n; ++i) num += y[i] * ky[i];
        const double mu_new = num;  // y is mass-normalized
        const bool done = std::abs(mu_new - mu) <= 1e-10 * (std::abs(mu_new) + 1.0);
        mu = mu_new;
        x = std::move(y);
        if (done && it > 3) break;
    }

    std::vector<double> v(m + 1, 0.0);
    for (int i = 1; i <= m - 2; ++i) v[i] = x[i - 1];
    v[0] = e01 * v[1] + e02 * v[2] + e03 * v[3];
    v[m - 1] = em2 * v[m - 3] + em1 * v[m - 2];
    return {mu, std::move(v), it + 1};
}

}  // namespace vortexlab
