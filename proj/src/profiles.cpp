#include "vortexlab/profiles.hpp"

#include <cmath>
#include <functional>
#include <span>

#include "vortexlab/banded.hpp"
#include "vortexlab/common.hpp"
#include "vortexlab/lbfgs.hpp"
#include "vortexlab/newton.hpp"

namespace vortexlab {

namespace {

constexpr double kEscapeGate = 1e-4;  // out-of-plane amplitude below this is non-escaping

struct Stencils {
    // interior 3-point first/second derivative coefficients per node
    std::vector<double> d1m, d1c, d1p, d2m, d2c, d2p;
    explicit Stencils(const RadialGrid& g) {
        const int m = g.points();
        d1m.resize(m); d1c.resize(m); d1p.resize(m);
        d2m.resize(m); d2c.resize(m); d2p.resize(m);
        for (int i = 1; i < m; ++i) {
            const double hm = g.node(i) - g.node(i - 1), hp = g.node(i + 1) - g.node(i);
            d1m[i] = -hp / (hm * (hm + hp));
            d1c[i] = (hp - hm) / (hm * hp);
            d1p[i] = hm / (hp * (hm + hp));
            d2m[i] = 2.0 / (hm * (hm + hp));
            d2c[i] = -2.0 / (hm * hp);
            d2p[i] = 2.0 / (hp * (hm + hp));
        }
    }
};

double interior_max_abs(const std::vector<double>& r, int lo, int hi) {
    double m = 0.0;
    for (int i = lo; i <= hi; ++i) m = std::max(m, std::abs(r[i]));
    return m;
}

}  // namespace

std::string to_string(ProfileBranch b) {
    switch (b) {
        case ProfileBranch::Gl: return "gl";
        case ProfileBranch::ExtendedEscaping: return "extended-escaping";
        case ProfileBranch::ExtendedNonescaping: return "extended-nonescaping";
        case ProfileBranch::MmEscaping: return "mm-escaping";
        case ProfileBranch::Equator: return "equator";
    }
    return "?";
}

namespace {

int solve_gl_at(const RadialGrid& grid, double eps, const PotentialModel& w,
                std::vector<double>& z, std::vector<double>& res_out) {
    const int m = grid.points();
    const int nn = grid.dim();
    const Stencils st(grid);
    const double ieps2 = 1.0 / (eps * eps);

    // unknowns f_1..f_{M-1}; f_0 = 0 and f_M = 1 fixed
    auto full = [&](const std::vector<double>& zz) {
        std::vector<double> f(m + 1);
        f[0] = 0.0;
        for (int i = 1; i < m; ++i) f[i] = zz[i - 1];
        f[m] = 1.0;
        return f;
    };
    NewtonProblem p;
    p.size = m - 1;
    p.bandwidth = 1;
    p.residual = [&](const std::vector<double>& zz, std::vector<double>& res) {
        const auto f = full(zz);
        for (int i = 1; i < m; ++i) {
            const double r = grid.node(i);
            const double d1 = st.d1m[i] * f[i - 1] + st.d1c[i] * f[i] + st.d1p[i] * f[i + 1];
            const double d2 = st.d2m[i] * f[i - 1] + st.d2c[i] * f[i] + st.d2p[i] * f[i + 1];
            res[i - 1] = -d2 - (nn - 1) / r * d1 + (nn - 1) / (r * r) * f[i] -
                         ieps2 * w.deriv(1.0 - f[i] * f[i]) * f[i];
        }
    };
    p.jacobian = [&](const std::vector<double>& zz, BandedMatrix& jac) {
        const auto f = full(zz);
        for (int i = 1; i < m; ++i) {
            const double r = grid.node(i);
            const double s = 1.0 - f[i] * f[i];
            const double diag = -st.d2c[i] - (nn - 1) / r * st.d1c[i] + (nn - 1) / (r * r) -
                                ieps2 * (w.deriv(s) - 2.0 * f[i] * f[i] * w.deriv2(s));
            jac.add(i - 1, i - 1, diag);
            if (i > 1) jac.add(i - 1, i - 2, -st.d2m[i] - (nn - 1) / r * st.d1m[i]);
            if (i < m - 1) jac.add(i - 1, i, -st.d2p[i] - (nn - 1) / r * st.d1p[i]);
        }
    };
    p.row_scale.resize(m - 1);
    for (int i = 1; i < m; ++i)
        p.row_scale[i - 1] = 1.0 / (1.0 + (nn - 1) / sq(grid.node(i)));
    const double tol = 1e-10 * std::sqrt(static_cast<double>(m)) * (1.0 + ieps2);
    const int iters = damped_newton(p, z, tol, 120);
    res_out.resize(m - 1);
    p.residual(z, res_out);
    return iters;
}

}  // namespace

RadialProfile solve_gl_profile(const RadialGrid& grid, double eps, const PotentialModel& w) {
    if (eps <= 0.0) throw PreconditionError("solve_gl_profile: eps must be positive");
    if (w.domain() != PotentialDomain::Gl)
        throw PreconditionError("solve_gl_profile: potential must live on (-inf, 1]");
    const int m = grid.points();

    std::vector<double> z(m - 1);
    for (int i = 1; i < m; ++i) z[i - 1] = grid.node(i) * (2.0 - grid.node(i));

    // continuation in eps: the stiff small-eps layer is reached by walking the
    // parameter down from a benign start, reusing each solution as seed
    std::vector<double> res;
    int iters = 0;
    double cur = std::max(eps, 0.5);
    while (true) {
        iters += solve_gl_at(grid, cur, w, z, res);
        if (cur == eps) break;
        cur = std::max(eps, 0.55 * cur);
    }

    std::vector<double> f(m + 1);
    f[0] = 0.0;
    for (int i = 1; i < m; ++i) f[i] = z[i - 1];
    f[m] = 1.0;
    RadialProfile prof{grid, std::move(f), std::vector<double>(m + 1, 0.0), false,
                       ProfileBranch::Gl, eps, 0.0, 0.0, 0.0, iters, false};
    prof.residual_f = interior_max_abs(res, 1, m - 2);  // away from the first node
    return prof;
}

namespace {

/// Escaping attempt for the extended system; returns nullopt if the relaxation
/// does not converge or lands on the in-plane branch.
std::optional<RadialProfile> extended_escaping_attempt(const RadialGrid& grid, double eps,
                                                       double eta, const PotentialModel& w,
                                                       const PotentialModel& wt,
                                                       const RadialProfile* seed_profile) {
    const int m = grid.points();
    const int nn = grid.dim();
    const Stencils st(grid);
    const double ieps2 = 1.0 / (eps * eps), ieta2 = 1.0 / (eta * eta);

    // unknowns interleaved: g_0 at 0, then (f_i at 2i-1, g_i at 2i) for i=1..M-1
    const int size = 2 * m - 1;
    auto unpack = [&](const std::vector<double>& z, std::vector<double>& f,
                      std::vector<double>& g) {
        f[0] = 0.0;
        g[0] = z[0];
        for (int i = 1; i < m; ++i) {
            f[i] = z[2 * i - 1];
            g[i] = z[2 * i];
        }
        f[m] = 1.0;
        g[m] = 0.0;
    };
    const auto origin = fd_weights(0.0, std::span<const double>(grid.nodes().data(), 3), 1);

    std::vector<double> f(m + 1), g(m + 1);
    NewtonProblem p;
    p.size = size;
    p.bandwidth = 4;
    p.residual = [&](const std::vector<double>& z, std::vector<double>& res) {
        unpack(z, f, g);
        res[0] = origin[0] * g[0] + origin[1] * g[1] + origin[2] * g[2];
        for (int i = 1; i < m; ++i) {
            const double r = grid.node(i);
            const double df1 = st.d1m[i] * f[i - 1] + st.d1c[i] * f[i] + st.d1p[i] * f[i + 1];
            const double df2 = st.d2m[i] * f[i - 1] + st.d2c[i] * f[i] + st.d2p[i] * f[i + 1];
            const double dg1 = st.d1m[i] * g[i - 1] + st.d1c[i] * g[i] + st.d1p[i] * g[i + 1];
            const double dg2 = st.d2m[i] * g[i - 1] + st.d2c[i] * g[i] + st.d2p[i] * g[i + 1];
            const double s = 1.0 - f[i] * f[i] - g[i] * g[i];
            const double wp = w.deriv(s);
            res[2 * i - 1] = -df2 - (nn - 1) / r * df1 + (nn - 1) / (r * r) * f[i] -
                             ieps2 * wp * f[i];
            res[2 * i] = -dg2 - (nn - 1) / r * dg1 - ieps2 * wp * g[i] +
                         ieta2 * wt.deriv(g[i] * g[i]) * g[i];
        }
    };
    p.jacobian = [&](const std::vector<double>& z, BandedMatrix& jac) {
        unpack(z, f, g);
        jac.add(0, 0, origin[0]);
        jac.add(0, 2, origin[1]);
        jac.add(0, 4, origin[2]);
        for (int i = 1; i < m; ++i) {
            const double r = grid.node(i);
            const double s = 1.0 - f[i] * f[i] - g[i] * g[i];
            const double wp = w.deriv(s), wpp = w.deriv2(s);
            const double tp = wt.deriv(g[i] * g[i]), tpp = wt.deriv2(g[i] * g[i]);
            const int rf = 2 * i - 1, rg = 2 * i;
            // f-equation
            jac.add(rf, rf, -st.d2c[i] - (nn - 1) / r * st.d1c[i] + (nn - 1) / (r * r) -
                                ieps2 * (wp - 2.0 * f[i] * f[i] * wpp));
            jac.add(rf, rg, ieps2 * 2.0 * f[i] * g[i] * wpp);
            if (i > 1) jac.add(rf, rf - 2, -st.d2m[i] - (nn - 1) / r * st.d1m[i]);
            if (i < m - 1) jac.add(rf, rf + 2, -st.d2p[i] - (nn - 1) / r * st.d1p[i]);
            // g-equation
            jac.add(rg, rg, -st.d2c[i] - (nn - 1) / r * st.d1c[i] -
                                ieps2 * (wp - 2.0 * g[i] * g[i] * wpp) +
                                ieta2 * (tp + 2.0 * g[i] * g[i] * tpp));
            jac.add(rg, rf, ieps2 * 2.0 * f[i] * g[i] * wpp);
            jac.add(rg, rg - 2, -st.d2m[i] - (nn - 1) / r * st.d1m[i]);
            if (i < m - 1) jac.add(rg, rg + 2, -st.d2p[i] - (nn - 1) / r * st.d1p[i]);
        }
    };

    p.row_scale.assign(size, 1.0);
    for (int i = 1; i < m; ++i) {
        const double s = 1.0 / (1.0 + (nn - 1) / sq(grid.node(i)));
        p.row_scale[2 * i - 1] = s;
        p.row_scale[2 * i] = s;
    }

    std::vector<double> z(size);
    if (seed_profile) {
        z[0] = seed_profile->g[0];
        for (int i = 1; i < m; ++i) {
            z[2 * i - 1] = seed_profile->f[i];
            z[2 * i] = seed_profile->g[i];
        }
    } else {
        z[0] = 0.3;
        for (int i = 1; i < m; ++i) {
            const double r = grid.node(i);
            z[2 * i - 1] = r * (2.0 - r);
            z[2 * i] = 0.3 * (1.0 - r * r);
        }
    }

    // Energy-descent phase: a residual-norm Newton iteration is indifferent to
    // stability and can land on the in-plane saddle; descending the discrete
    // energy first selects the minimizing basin when the escaping branch exists.
    {
        const auto& rows = grid.deriv1_rows();
        const auto& w1 = grid.smooth_weights(nn - 1);
        const auto& w3 = grid.smooth_weights(nn - 3);
        auto value_grad = [&](const std::vector<double>& zz, std::vector<double>& grad) {
            unpack(zz, f, g);
            std::vector<double> df(m + 1), dg(m + 1);
            for (int i = 0; i <= m; ++i) {
                df[i] = rows.apply_row(i, f);
                dg[i] = rows.apply_row(i, g);
            }
            double e = 0.0;
            std::vector<double> ef(m + 1, 0.0), eg(m + 1, 0.0);
            for (int i = 0; i <= m; ++i) {
                const double s = 1.0 - f[i] * f[i] - g[i] * g[i];
                e += w1[i] * (0.5 * (sq(df[i]) + sq(dg[i])) + 0.5 * ieps2 * w.value(s) +
                              0.5 * ieta2 * wt.value(g[i] * g[i])) +
                     0.5 * (nn - 1) * w3[i] * sq(f[i]);
                const double wp = w.deriv(s);
                ef[i] += (nn - 1) * w3[i] * f[i] - w1[i] * ieps2 * wp * f[i];
                eg[i] += -w1[i] * ieps2 * wp * g[i] + w1[i] * ieta2 * wt.deriv(g[i] * g[i]) * g[i];
                const int b = rows.base[i];
                for (int c = 0; c < 3; ++c) {
                    ef[b + c] += w1[i] * df[i] * rows.coeff[3 * i + c];
                    eg[b + c] += w1[i] * dg[i] * rows.coeff[3 * i + c];
                }
            }
            grad.assign(size, 0.0);
            grad[0] = eg[0];
            for (int i = 1; i < m; ++i) {
                grad[2 * i - 1] = ef[i];
                grad[2 * i] = eg[i];
            }
            return e;
        };
        LbfgsOptions opt;
        opt.max_iterations = seed_profile ? 80 : 600;
        opt.gradient_tolerance = 1e-9 * (1.0 + ieps2 + ieta2);
        auto res = lbfgs_minimize(value_grad, z, opt);
        z = std::move(res.x);
    }

    const double tol = 1e-10 * std::sqrt(static_cast<double>(size)) * (1.0 + ieps2 + ieta2);
    int iters = 0;
    try {
        iters = damped_newton(p, z, tol, 150);
    } catch (const SolveError&) {
        return std::nullopt;
    }
    std::vector<double> ff(m + 1), gg(m + 1);
    unpack(z, ff, gg);
    double gmax = 0.0, gmass = 0.0;
    for (int i = 0; i <= m; ++i) {
        gmax = std::max(gmax, std::abs(gg[i]));
        gmass += gg[i];
    }
    if (gmax <= kEscapeGate) return std::nullopt;
    if (gmass < 0.0)
        for (auto& x : gg) x = -x;  // the two escaping branches differ by this sign

    RadialProfile prof{grid, std::move(ff), std::move(gg), true,
                       ProfileBranch::ExtendedEscaping, eps, eta, 0.0, 0.0, iters, false};
    std::vector<double> res(size);
    std::vector<double> zz(size);
    zz[0] = prof.g[0];
    for (int i = 1; i < m; ++i) {
        zz[2 * i - 1] = prof.f[i];
        zz[2 * i] = prof.g[i];
    }
    p.residual(zz, res);
    double rf = 0.0, rg = 0.0;
    for (int i = 2; i < m; ++i) {
        rf = std::max(rf, std::abs(res[2 * i - 1]));
        rg = std::max(rg, std::abs(res[2 * i]));
    }
    prof.residual_f = rf;
    prof.residual_g = rg;
    return prof;
}

}  // namespace

RadialProfile solve_extended_profile(const RadialGrid& grid, double eps, double eta,
                                     const PotentialModel& w, const PotentialModel& wt) {
    if (eps <= 0.0 || eta <= 0.0)
        throw PreconditionError("solve_extended_profile: parameters must be positive");
    const int nn = grid.dim();
    if (nn >= 2 && nn <= 6) {
        auto esc = extended_escaping_attempt(grid, eps, eta, w, wt, nullptr);
        if (!esc) {
            // continuation in eta: reach the target walking down from deep
            // inside the escaping region, reseeding each rung
            std::optional<RadialProfile> rung;
            for (double factor : {8.0, 4.0, 2.0, 1.4, 1.0}) {
                auto next = extended_escaping_attempt(grid, eps, eta * factor, w, wt,
                                                      rung ? &*rung : nullptr);
                if (next)
                    rung = std::move(next);
                else if (factor == 1.0)
                    rung.reset();
            }
            if (rung && rung->eta == eta) esc = std::move(rung);
        }
        if (esc) return *std::move(esc);
    }
    RadialProfile prof = solve_gl_profile(grid, eps, w);
    prof.branch = ProfileBranch::ExtendedNonescaping;
    prof.has_out_of_plane = true;  // g identically zero
    prof.eta = eta;
    return prof;
}

RadialProfile equator_profile(const RadialGrid& grid, double eta) {
    const int m = grid.points();
    RadialProfile prof{grid, std::vector<double>(m + 1, 1.0), std::vector<double>(m + 1, 0.0),
                       true, ProfileBranch::Equator, 0.0, eta, 0.0, 0.0, 0, false};
    return prof;
}

RadialProfile solve_mm_profile(const RadialGrid& grid, double eta, const PotentialModel& wt) {
    if (eta <= 0.0) throw PreconditionError("solve_mm_profile: eta must be positive");
    if (wt.domain() != PotentialDomain::Mm)
        throw PreconditionError("solve_mm_profile: potential must live on [0, inf)");
    const int m = grid.points();
    const int nn = grid.dim();
    if (nn >= 7) {
        auto prof = equator_profile(grid, eta);
        prof.fallback_warning = true;
        return prof;
    }
    const Stencils st(grid);
    const double ieta2 = 1.0 / (eta * eta);

    // angle unknowns psi_1..psi_{M-1}; psi(0) = 0, psi(1) = pi/2
    auto full = [&](const std::vector<double>& z) {
        std::vector<double> psi(m + 1);
        psi[0] = 0.0;
        for (int i = 1; i < m; ++i) psi[i] = z[i - 1];
        psi[m] = 0.5 * M_PI;
        return psi;
    };
    NewtonProblem p;
    p.size = m - 1;
    p.bandwidth = 1;
    p.residual = [&](const std::vector<double>& z, std::vector<double>& res) {
        const auto psi = full(z);
        for (int i = 1; i < m; ++i) {
            const double r = grid.node(i);
            const double d1 = st.d1m[i] * psi[i - 1] + st.d1c[i] * psi[i] + st.d1p[i] * psi[i + 1];
            const double d2 = st.d2m[i] * psi[i - 1] + st.d2c[i] * psi[i] + st.d2p[i] * psi[i + 1];
            const double s = std::sin(psi[i]), c = std::cos(psi[i]);
            res[i - 1] = -d2 - (nn - 1) / r * d1 + (nn - 1) / (r * r) * s * c -
                         ieta2 * wt.deriv(c * c) * s * c;
        }
    };
    p.jacobian = [&](const std::vector<double>& z, BandedMatrix& jac) {
        const auto psi = full(z);
        for (int i = 1; i < m; ++i) {
            const double r = grid.node(i);
            const double s = std::sin(psi[i]), c = std::cos(psi[i]);
            const double cos2 = c * c - s * s;
            const double tp = wt.deriv(c * c), tpp = wt.deriv2(c * c);
            jac.add(i - 1, i - 1, -st.d2c[i] - (nn - 1) / r * st.d1c[i] +
                                      (nn - 1) / (r * r) * cos2 -
                                      ieta2 * (tp * cos2 - 2.0 * s * s * c * c * tpp));
            if (i > 1) jac.add(i - 1, i - 2, -st.d2m[i] - (nn - 1) / r * st.d1m[i]);
            if (i < m - 1) jac.add(i - 1, i, -st.d2p[i] - (nn - 1) / r * st.d1p[i]);
        }
    };

    p.row_scale.resize(m - 1);
    for (int i = 1; i < m; ++i)
        p.row_scale[i - 1] = 1.0 / (1.0 + (nn - 1) / sq(grid.node(i)));

    std::vector<double> z(m - 1);
    for (int i = 1; i < m; ++i) {
        const double r = grid.node(i);
        z[i - 1] = 0.5 * M_PI * r * (2.0 - r);
    }

    // descend the angle energy first so the Newton polish starts in the
    // escaping basin at every grid resolution
    {
        const auto& rows = grid.deriv1_rows();
        const auto& w1 = grid.smooth_weights(nn - 1);
        const auto& w3 = grid.smooth_weights(nn - 3);
        auto value_grad = [&](const std::vector<double>& zz, std::vector<double>& grad) {
            const auto psi = full(zz);
            std::vector<double> dpsi(m + 1), epsi(m + 1, 0.0);
            for (int i = 0; i <= m; ++i) dpsi[i] = rows.apply_row(i, psi);
            double e = 0.0;
            for (int i = 0; i <= m; ++i) {
                const double s = std::sin(psi[i]), c = std::cos(psi[i]);
                e += w1[i] * (0.5 * sq(dpsi[i]) + 0.5 * ieta2 * wt.value(c * c)) +
                     0.5 * (nn - 1) * w3[i] * s * s;
                epsi[i] += (nn - 1) * w3[i] * s * c - w1[i] * ieta2 * wt.deriv(c * c) * c * s;
                const int b = rows.base[i];
                for (int cc = 0; cc < 3; ++cc)
                    epsi[b + cc] += w1[i] * dpsi[i] * rows.coeff[3 * i + cc];
            }
            grad.assign(m - 1, 0.0);
            for (int i = 1; i < m; ++i) grad[i - 1] = epsi[i];
            return e;
        };
        LbfgsOptions opt;
        opt.max_iterations = 600;
        opt.gradient_tolerance = 1e-9 * (1.0 + ieta2);
        auto res = lbfgs_minimize(value_grad, z, opt);
        z = std::move(res.x);
    }

    const double tol = 1e-10 * std::sqrt(static_cast<double>(m)) * (1.0 + ieta2);
    int iters = 0;
    try {
        iters = damped_newton(p, z, tol, 150);
    } catch (const SolveError&) {
        if (nn >= 3) {
            auto prof = equator_profile(grid, eta);
            prof.fallback_warning = true;
            return prof;
        }
        throw;
    }
    const auto psi = full(z);
    RadialProfile prof{grid, std::vector<double>(m + 1), std::vector<double>(m + 1), true,
                       ProfileBranch::MmEscaping, 0.0, eta, 0.0, 0.0, iters, false};
    for (int i = 0; i <= m; ++i) {
        prof.f[i] = std::sin(psi[i]);
        prof.g[i] = std::cos(psi[i]);
    }
    std::vector<double> res(m - 1);
    p.residual(z, res);
    prof.residual_f = interior_max_abs(res, 1, m - 2);
    return prof;
}

MultiplierReport verify_lagrange_multiplier(const RadialProfile& profile, double eta,
                                            const PotentialModel& wt) {
    if (profile.branch != ProfileBranch::MmEscaping && profile.branch != ProfileBranch::Equator)
        throw PreconditionError("verify_lagrange_multiplier: needs a unit-sphere branch");
    const auto& grid = profile.grid;
    const int m = grid.points();
    const int nn = grid.dim();
    const double ieta2 = 1.0 / (eta * eta);
    const auto df = grid.deriv1(profile.f);
    const auto ddf = grid.deriv2(profile.f);
    const auto dg = grid.deriv1(profile.g);
    const auto ddg = grid.deriv2(profile.g);

    MultiplierReport rep;
    rep.multiplier.assign(m + 1, 0.0);
    for (int i = 1; i < m; ++i) {
        const double r = grid.node(i);
        const double f = profile.f[i], g = profile.g[i];
        const double lam = sq(df[i]) + (nn - 1) / (r * r) * f * f + sq(dg[i]) +
                           ieta2 * wt.deriv(g * g) * g * g;
        rep.multiplier[i] = lam;
        const double rf = -ddf[i] - (nn - 1) / r * df[i] + (nn - 1) / (r * r) * f - lam * f;
        const double rg = -ddg[i] - (nn - 1) / r * dg[i] + ieta2 * wt.deriv(g * g) * g - lam * g;
        // residuals are measured against the local size of the equation terms:
        // near the origin the individual terms grow like 1/r^2 and cancel, so
        // an absolute max-norm would only probe finite-difference noise there
        const double scale_f = 1.0 + std::abs(ddf[i]) + (nn - 1) / r * std::abs(df[i]) +
                               (nn - 1) / (r * r) * std::abs(f) + std::abs(lam * f);
        const double scale_g = 1.0 + std::abs(ddg[i]) + (nn - 1) / r * std::abs(dg[i]) +
                               ieta2 * std::abs(wt.deriv(g * g) * g) + std::abs(lam * g);
        if (i >= 2 && i <= m - 2) {
            rep.max_residual_f = std::max(rep.max_residual_f, std::abs(rf) / scale_f);
            rep.max_residual_g = std::max(rep.max_residual_g, std::abs(rg) / scale_g);
        }
    }
    return rep;
}

double profile_h1_distance(const RadialProfile& a, const RadialProfile& b) {
    if (!a.grid.same_layout(b.grid))
        throw PreconditionError("profile_h1_distance: grids differ");
    const auto& grid = a.grid;
    const int m = grid.points();
    const int nn = grid.dim();
    std::vector<double> df(m + 1), dg(m + 1), vf(m + 1), vg(m + 1);
    for (int i = 0; i <= m; ++i) {
        vf[i] = a.f[i] - b.f[i];
        vg[i] = a.g[i] - b.g[i];
    }
    df = grid.deriv1(vf);
    dg = grid.deriv1(vg);
    std::vector<double> grad(m + 1), low(m + 1), ang(m + 1);
    for (int i = 0; i <= m; ++i) {
        grad[i] = sq(df[i]) + sq(dg[i]);
        low[i] = sq(vf[i]) + sq(vg[i]);
        ang[i] = (nn - 1) * sq(vf[i]);
    }
    const double val = grid.integrate(grad, nn - 1) + grid.integrate(low, nn - 1) +
                       grid.integrate(ang, nn - 3);
    return std::sqrt(sphere_measure(nn) * std::max(0.0, val));
}

LimitCheckReport mm_limit_check(const RadialGrid& grid, std::vector<double> eps_values,
                                double eta, const PotentialModel& w,
                                const PotentialModel& wt, double threshold) {
    const RadialProfile target = solve_mm_profile(grid, eta, wt);
    if (target.branch != ProfileBranch::MmEscaping)
        throw SolveError("mm_limit_check: no escaping unit-sphere profile at this eta");
    LimitCheckReport rep;
    rep.eps_values = eps_values;
    for (double eps : eps_values) {
        const RadialProfile ext = solve_extended_profile(grid, eps, eta, w, wt);
        if (ext.branch != ProfileBranch::ExtendedEscaping)
            throw PreconditionError(
                "mm_limit_check: parameters leave the escaping region; comparison refused");
        rep.distances.push_back(profile_h1_distance(ext, target));
    }
    for (std::size_t i = 1; i < rep.distances.size(); ++i)
        if (rep.distances[i] > rep.distances[i - 1] * (1.0 + 1e-6)) rep.decreasing = false;
    rep.converged = !rep.distances.empty() && rep.distances.back() <= threshold;
    return rep;
}

EnergyBreakdown radial_energy(const RadialGrid& grid, const std::vector<double>& f,
                              const std::vector<double>& g, double eps, double eta,
                              const PotentialModel& w, const PotentialModel& wt) {
    // staggered cell-midpoint rule, the radial reduction of the zonal energy
    const int m = grid.points();
    const int nn = grid.dim();
    const double area = sphere_measure(nn);

    EnergyBreakdown e;
    for (int c = 0; c < m; ++c) {
        const double h = grid.cell_width(c);
        const double rm = grid.midpoint_radius(c);
        const double w1 = std::pow(rm, nn - 1.0) * h;
        const double w3 = std::pow(rm, nn - 3.0) * h;
        const double sf = (f[c + 1] - f[c]) / h, sg = (g[c + 1] - g[c]) / h;
        const double mf = 0.5 * (f[c] + f[c + 1]), mg = 0.5 * (g[c] + g[c + 1]);
        e.dirichlet += 0.5 * w1 * (sq(sf) + sq(sg)) + 0.5 * (nn - 1) * w3 * sq(mf);
        e.w_term += w1 * 0.5 / (eps * eps) * w.value(1.0 - sq(mf) - sq(mg));
        if (eta > 0.0) e.wt_term += w1 * 0.5 / (eta * eta) * wt.value(sq(mg));
    }
    e.dirichlet *= area;
    e.w_term *= area;
    e.wt_term *= area;
    e.total = e.dirichlet + e.w_term + e.wt_term;
    return e;
}

ProfileInvariantReport check_profile_invariants(const RadialProfile& p) {
    const auto& grid = p.grid;
    const int m = grid.points();
    auto fail = [&](const std::string& msg, int node) {
        return ProfileInvariantReport{false, msg, node};
    };
    if (std::abs(p.f[m] - 1.0) > 1e-12) return fail("f(1) != 1", m);
    if (p.has_out_of_plane && std::abs(p.g[m]) > 1e-12) return fail("g(1) != 0", m);

    const bool vortex = p.branch == ProfileBranch::Gl ||
                        p.branch == ProfileBranch::ExtendedEscaping ||
                        p.branch == ProfileBranch::ExtendedNonescaping ||
                        p.branch == ProfileBranch::MmEscaping;
    if (vortex) {
        if (std::abs(p.f[0]) > 1e-10) return fail("f(0) != 0", 0);
        for (int i = 1; i <= m; ++i)
            if (p.f[i] < p.f[i - 1] - 1e-10) return fail("f not increasing", i);
        for (int i = 0; i <= m; ++i)
            if (p.f[i] < -1e-10 || p.f[i] > 1.0 + 1e-10) return fail("f outside [0,1]", i);
    }
    if (p.branch == ProfileBranch::ExtendedEscaping) {
        for (int i = 1; i < m; ++i) {
            if (p.g[i] <= 0.0) return fail("escaping g not positive", i);
            if (sq(p.f[i]) + sq(p.g[i]) >= 1.0) return fail("f^2+g^2 not below 1", i);
            if (p.g[i] > p.g[i - 1] + 1e-10 && i > 1) return fail("g not decreasing", i);
        }
    }
    if (p.branch == ProfileBranch::MmEscaping || p.branch == ProfileBranch::Equator) {
        for (int i = 0; i <= m; ++i)
            if (std::abs(sq(p.f[i]) + sq(p.g[i]) - 1.0) > 1e-10)
                return fail("unit-length constraint violated", i);
    }
    if (p.branch == ProfileBranch::MmEscaping) {
        for (int i = 1; i < m; ++i)
            if (p.g[i] > p.g[i - 1] + 1e-10) return fail("g not decreasing", i);
    }
    return {};
}

}  // namespace vortexlab
