#include "vortexlab/spectral.hpp"

#include <cmath>
#include <thread>

#include "vortexlab/common.hpp"

namespace vortexlab {

namespace {

std::vector<double> linearized_potential(const RadialGrid& grid, const RadialProfile& prof,
                                         double eps, const PotentialModel& w) {
    const int m = grid.points();
    std::vector<double> q(m + 1);
    for (int i = 0; i <= m; ++i)
        q[i] = -1.0 / (eps * eps) *
               w.deriv(1.0 - sq(prof.f[i]) - sq(prof.g[i]));
    return q;
}

}  // namespace

EllResult ell_of_eps(const RadialGrid& grid, double eps, const PotentialModel& w) {
    RadialProfile prof = solve_gl_profile(grid, eps, w);
    const auto q = linearized_potential(grid, prof, eps, w);
    auto pair = first_eigenpair_radial(grid, q, 0);
    return {pair.eigenvalue, std::move(pair), std::move(prof)};
}

double ell_of_profile(const RadialProfile& profile, const PotentialModel& w) {
    const auto q = linearized_potential(profile.grid, profile, profile.eps, w);
    return first_eigenpair_radial(profile.grid, q, 0).eigenvalue;
}

Eps0Result find_eps0(const RadialGrid& grid, const PotentialModel& w) {
    Eps0Result out;
    if (grid.dim() >= 7) {
        out.no_root_reason = "dimension at least 7: the first eigenvalue stays positive";
        return out;
    }
    if (w.slope_at_one() <= 0.0) {
        out.no_root_reason = "W'(1) = 0: the first eigenvalue stays positive";
        return out;
    }
    // geometric scan for a sign change, then bisection
    const double lo = 1e-3, hi = 10.0;
    const int scan = 24;
    double prev_eps = 0.0, prev_ell = 0.0;
    bool have_bracket = false;
    double blo = 0.0, bhi = 0.0, ell_lo = 0.0, ell_hi = 0.0;
    bool have_prev = false;
    for (int i = 0; i <= scan; ++i) {
        const double eps = lo * std::pow(hi / lo, static_cast<double>(i) / scan);
        double ell = 0.0;
        try {
            ell = ell_of_eps(grid, eps, w).ell;
        } catch (const SolveError&) {
            continue;  // unresolvable scan point at this resolution; skip it
        }
        if (have_prev && prev_ell < 0.0 && ell >= 0.0) {
            blo = prev_eps;
            bhi = eps;
            ell_lo = prev_ell;
            ell_hi = ell;
            have_bracket = true;
            break;
        }
        prev_eps = eps;
        prev_ell = ell;
        have_prev = true;
    }
    if (!have_bracket) {
        out.no_root_reason = "no sign change of the first eigenvalue on the scan interval";
        return out;
    }
    while (bhi - blo > 1e-4 * bhi) {
        const double mid = std::sqrt(blo * bhi);
        const double ell = ell_of_eps(grid, mid, w).ell;
        if (ell < 0.0) {
            blo = mid;
            ell_lo = ell;
        } else {
            bhi = mid;
            ell_hi = ell;
        }
    }
    out.has_root = true;
    out.eps0 = 0.5 * (blo + bhi);
    out.bracket_lo = blo;
    out.bracket_hi = bhi;
    out.ell_lo = ell_lo;
    out.ell_hi = ell_hi;
    return out;
}

double eta0_of_eps(double ell, const PotentialModel& wt) {
    if (ell >= 0.0)
        throw PreconditionError("eta0_of_eps: needs a negative first eigenvalue");
    const double slope = wt.slope_at_zero();
    return slope == 0.0 ? 0.0 : std::sqrt(slope / std::abs(ell));
}

EscapeTag classify(double ell, double eta, const PotentialModel& wt) {
    return ell + wt.slope_at_zero() / (eta * eta) < 0.0 ? EscapeTag::Escaping
                                                        : EscapeTag::NonEscaping;
}

EscapeTag classify(const RadialGrid& grid, double eps, double eta, const PotentialModel& w,
                   const PotentialModel& wt) {
    if (grid.dim() >= 7 || w.slope_at_one() <= 0.0) return EscapeTag::NonEscaping;
    return classify(ell_of_eps(grid, eps, w).ell, eta, wt);
}

TSpectrumResult t_operator_spectrum(const RadialProfile& profile, const PotentialModel& w,
                                    const PotentialModel& wt, double eps, double eta) {
    const auto& grid = profile.grid;
    const int m = grid.points();
    TSpectrumResult out;
    out.potential.resize(m + 1);
    for (int i = 0; i <= m; ++i)
        out.potential[i] = -1.0 / (eps * eps) *
                               w.deriv(1.0 - sq(profile.f[i]) - sq(profile.g[i])) +
                           1.0 / (eta * eta) * wt.deriv(sq(profile.g[i]));
    auto pair = first_eigenpair_radial(grid, out.potential, 0);
    out.first_eigenvalue = pair.eigenvalue;
    out.eigenvector = std::move(pair.eigenvector);

    if (profile.branch == ProfileBranch::ExtendedEscaping) {
        // the solved out-of-plane component is an exact zero mode of the same
        // collocation operator; report its residual as the certificate
        const auto tg = radial_schroedinger_apply(grid, out.potential, 0, profile.g);
        const auto& wq = grid.weights(grid.dim() - 1);
        double rr = 0.0, gg = 0.0;
        for (int i = 1; i < m; ++i) {
            rr += wq[i] * sq(tg[i]);
            gg += wq[i] * sq(profile.g[i]);
        }
        out.zero_mode_residual = std::sqrt(rr / gg);
    }
    return out;
}

std::vector<double> geometric_range(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    return v;
}

std::vector<double> linear_range(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
    return v;
}

bool PhaseDiagram::monotone_in_eta() const {
    // at fixed eps below the critical radius the tag may switch once, from
    // non-escaping to escaping, as eta grows; above it never switches
    for (std::size_t ie = 0; ie < eps_values.size(); ++ie) {
        bool seen_escaping = false;
        for (std::size_t je = 0; je < eta_values.size(); ++je) {
            const auto& pt = at(static_cast<int>(ie), static_cast<int>(je));
            if (pt.tag == EscapeTag::Escaping) {
                seen_escaping = true;
                if (eps0.has_root && pt.eps > eps0.bracket_hi) return false;
            } else if (seen_escaping) {
                return false;
            }
        }
    }
    return true;
}

PhaseDiagram phase_diagram(const RadialGrid& grid, const PotentialModel& w,
                           const PotentialModel& wt, const std::vector<double>& eps_values,
                           const std::vector<double>& eta_values, int threads) {
    PhaseDiagram pd;
    pd.dim = grid.dim();
    pd.w_name = w.describe();
    pd.wt_name = wt.describe();
    pd.eps_values = eps_values;
    pd.eta_values = eta_values;
    pd.points.resize(eps_values.size() * eta_values.size());

    // the eigenvalue depends on eps only; compute once per column
    std::vector<double> ell(eps_values.size(), 0.0);
    std::vector<char> failed(eps_values.size(), 0);
    const bool trivially_nonescaping = grid.dim() >= 7 || w.slope_at_one() <= 0.0;
    auto column = [&](std::size_t i) {
        if (trivially_nonescaping) return;
        try {
            ell[i] = ell_of_eps(grid, eps_values[i], w).ell;
        } catch (const SolveError&) {
            failed[i] = 1;
        }
    };
    if (threads > 1) {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < eps_values.size(); i += threads) column(i);
            });
        for (auto& th : pool) th.join();
        (void)next;
    } else {
        for (std::size_t i = 0; i < eps_values.size(); ++i) column(i);
    }

    for (std::size_t j = 0; j < eta_values.size(); ++j)
        for (std::size_t i = 0; i < eps_values.size(); ++i) {
            PhasePoint pt;
            pt.eps = eps_values[i];
            pt.eta = eta_values[j];
            pt.ell = ell[i];
            pt.solver_failed = failed[i] != 0;
            pt.tag = (trivially_nonescaping || failed[i]) ? EscapeTag::NonEscaping
                                                          : classify(ell[i], pt.eta, wt);
            pd.points[j * eps_values.size() + i] = pt;
        }

    try {
        pd.eps0 = find_eps0(grid, w);
    } catch (const SolveError& e) {
        pd.eps0.has_root = false;
        pd.eps0.no_root_reason = std::string("scan failed: ") + e.what();
    }
    for (std::size_t i = 0; i < eps_values.size(); ++i)
        if (!trivially_nonescaping && !failed[i] && ell[i] < 0.0)
            pd.onset_curve.emplace_back(eps_values[i], eta0_of_eps(ell[i], wt));
    return pd;
}

double escape_onset_eta(const RadialGrid& grid, double eps, const PotentialModel& w,
                        const PotentialModel& wt, double eta_hi, double rel_tol) {
    auto escaping_at = [&](double eta) {
        return solve_extended_profile(grid, eps, eta, w, wt).branch ==
               ProfileBranch::ExtendedEscaping;
    };
    if (!escaping_at(eta_hi))
        throw PreconditionError("escape_onset_eta: no escaping branch up to the upper bound");
    double lo = 1e-3;
    if (escaping_at(lo)) return lo;
    double hi = eta_hi;
    while (hi - lo > rel_tol * hi) {
        const double mid = std::sqrt(lo * hi);
        (escaping_at(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace vortexlab
