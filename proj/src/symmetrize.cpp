#include "vortexlab/symmetrize.hpp"

#include <cmath>

#include "vortexlab/common.hpp"
#include "vortexlab/forms.hpp"

namespace vortexlab {

SampledSphereField SampledSphereField::from_modes(const ModeField& field,
                                                  const AngularRule& rule) {
    SampledSphereField out;
    out.dim = field.dim;
    out.grid = field.grid;
    out.angular = rule;
    const int m = field.grid.points();
    out.values.assign(m + 1, std::vector<double>(rule.order(), 0.0));
    for (const auto& mode : field.modes)
        for (int i = 0; i <= m; ++i)
            for (int j = 0; j < rule.order(); ++j)
                out.values[i][j] += mode.values[i] * rule.harmonic(mode.degree, j);
    return out;
}

ModeField SampledSphereField::to_modes(BoundaryClass bc) const {
    ModeField out;
    out.dim = dim;
    out.grid = grid;
    out.bc = bc;
    const int m = grid.points();
    for (int k = 0; k <= angular.max_degree(); ++k) {
        Mode mode;
        mode.degree = k;
        mode.values.assign(m + 1, 0.0);
        for (int i = 0; i <= m; ++i) {
            double s = 0.0;
            for (int j = 0; j < angular.order(); ++j)
                s += angular.weights()[j] * angular.harmonic(k, j) * values[i][j];
            mode.values[i] = s;
        }
        out.modes.push_back(std::move(mode));
    }
    return out;
}

std::vector<double> symmetrize_scalar(const SampledSphereField& g, double q) {
    if (q < 1.0) throw PreconditionError("symmetrize_scalar: exponent must be >= 1");
    const int m = g.grid.points();
    const double area = g.angular.sphere_area();
    std::vector<double> out(m + 1, 0.0);
    for (int i = 0; i <= m; ++i) {
        double s = 0.0;
        for (int j = 0; j < g.angular.order(); ++j)
            s += g.angular.weights()[j] * std::pow(std::abs(g.values[i][j]), q);
        out[i] = std::pow(s / area, 1.0 / q);
    }
    return out;
}

GradientRearrangement symmetrize_gradient(const ModeField& v) {
    const auto& grid = v.grid;
    const int m = grid.points();
    GradientRearrangement out;
    out.midpoint_slope.assign(m, 0.0);
    for (const auto& mode : v.modes) {
        const double lam = sphere_eigenvalue(v.dim, mode.degree);
        for (int c = 0; c < m; ++c) {
            const double h = grid.cell_width(c);
            const double slope = (mode.values[c + 1] - mode.values[c]) / h;
            const double mid = 0.5 * (mode.values[c] + mode.values[c + 1]);
            const double rm = grid.midpoint_radius(c);
            out.midpoint_slope[c] += sq(slope) + lam * sq(mid) / sq(rm);
        }
    }
    for (auto& s : out.midpoint_slope) s = std::sqrt(s);
    out.values = grid.integrate_from_boundary(out.midpoint_slope, 0.0);
    out.bc = v.bc;
    out.boundary_slope = std::abs(v.boundary_slope);
    return out;
}

ModeField rearranged_field(const ModeField& v) {
    auto re = symmetrize_gradient(v);
    return radial_mode_field(v.grid, v.dim, std::move(re.values), re.bc, re.boundary_slope);
}

double slice_gradient_mismatch(const ModeField& v, const AngularRule& rule) {
    // the rearranged slope is a mode coefficient: its slice gradient integral
    // is (vcheck')^2 exactly, to be compared with the quadrature of |grad v|^2
    const auto& grid = v.grid;
    const int m = grid.points();
    const auto re = symmetrize_gradient(v);
    double worst = 0.0;
    double scale = 1e-30;
    for (int c = 0; c < m; ++c) {
        const double rm = grid.midpoint_radius(c);
        double slice = 0.0;
        for (int j = 0; j < rule.order(); ++j) {
            double dr = 0.0, dth = 0.0;
            for (const auto& mode : v.modes) {
                const double h = grid.cell_width(c);
                const double slope = (mode.values[c + 1] - mode.values[c]) / h;
                const double mid = 0.5 * (mode.values[c] + mode.values[c + 1]);
                dr += slope * rule.harmonic(mode.degree, j);
                dth += mid * rule.harmonic_deriv(mode.degree, j);
            }
            const double t = rule.nodes()[j];
            const double grad_sq = sq(dr) + (1.0 - t * t) * sq(dth) / sq(rm);
            slice += rule.weights()[j] * grad_sq;
        }
        worst = std::max(worst, std::abs(slice - sq(re.midpoint_slope[c])));
        scale = std::max(scale, std::abs(slice));
    }
    return worst / scale;
}

namespace {

/// Shared midpoint evaluation of |grad v|^2 at (cell, angular node).
struct MidpointGradient {
    const ModeField& v;
    const AngularRule& rule;
    std::vector<std::vector<double>> grad_sq;  // [cell][angular node]
    std::vector<double> cell_weight;           // r^{N-1} h (midpoint rule)

    MidpointGradient(const ModeField& field, const AngularRule& r) : v(field), rule(r) {
        const auto& grid = v.grid;
        const int m = grid.points();
        grad_sq.assign(m, std::vector<double>(rule.order(), 0.0));
        cell_weight.assign(m, 0.0);
        for (int c = 0; c < m; ++c) {
            const double rm = grid.midpoint_radius(c);
            cell_weight[c] = std::pow(rm, v.dim - 1.0) * grid.cell_width(c);
            for (int j = 0; j < rule.order(); ++j) {
                double dr = 0.0, dth = 0.0;
                for (const auto& mode : v.modes) {
                    const double slope =
                        (mode.values[c + 1] - mode.values[c]) / grid.cell_width(c);
                    const double mid = 0.5 * (mode.values[c] + mode.values[c + 1]);
                    dr += slope * rule.harmonic(mode.degree, j);
                    dth += mid * rule.harmonic_deriv(mode.degree, j);
                }
                const double t = rule.nodes()[j];
                grad_sq[c][j] = sq(dr) + (1.0 - t * t) * sq(dth) / sq(rm);
            }
        }
    }
};

}  // namespace

SidePair check_convex_decrease(const ModeField& v, const AngularRule& rule,
                               const std::function<double(double, double)>& integrand) {
    // certify convexity in the second variable by sampled second differences
    for (double r : {0.1, 0.5, 0.9}) {
        for (double s = 0.0; s <= 4.0; s += 0.25) {
            const double dd = integrand(r, s + 0.5) - 2.0 * integrand(r, s + 0.25) +
                              integrand(r, s);
            if (dd < -1e-10)
                throw PreconditionError("check_convex_decrease: integrand not convex");
        }
    }
    const MidpointGradient mg(v, rule);
    const auto re = symmetrize_gradient(v);
    const double area = rule.sphere_area();
    SidePair out;
    for (std::size_t c = 0; c < mg.grad_sq.size(); ++c) {
        const double rm = v.grid.midpoint_radius(static_cast<int>(c));
        // |grad vcheck|^2 as a function equals (vcheck')^2 / area
        out.lhs += mg.cell_weight[c] * area * integrand(rm, sq(re.midpoint_slope[c]) / area);
        double slice = 0.0;
        for (int j = 0; j < rule.order(); ++j)
            slice += rule.weights()[j] * integrand(rm, mg.grad_sq[c][j]);
        out.rhs += mg.cell_weight[c] * slice;
    }
    return out;
}

SidePair check_lp_decrease(const ModeField& v, const AngularRule& rule, double p) {
    if (p <= 2.0) throw PreconditionError("check_lp_decrease: exponent must exceed 2");
    return check_convex_decrease(
        v, rule, [p](double, double s) { return std::pow(s, 0.5 * p); });
}

SliceReport check_lp_increase_low(const ModeField& v, const AngularRule& rule, double p) {
    if (p < 1.0 || p > 2.0)
        throw PreconditionError("check_lp_increase_low: exponent must be in [1, 2]");
    if (v.bc == BoundaryClass::RadialGradient)
        throw PreconditionError("check_lp_increase_low: field must vanish at the boundary");
    const auto& grid = v.grid;
    const int m = grid.points();
    const auto re = symmetrize_gradient(v);
    const double area = rule.sphere_area();
    SliceReport rep;
    rep.lhs.assign(m + 1, 0.0);
    rep.rhs.assign(m + 1, 0.0);
    rep.min_margin = 1e300;
    for (int i = 0; i <= m; ++i) {
        // the rearranged function is the coefficient times the constant harmonic
        rep.lhs[i] = area * std::pow(std::abs(re.values[i]) / std::sqrt(area), p);
        double slice = 0.0;
        for (int j = 0; j < rule.order(); ++j) {
            double val = 0.0;
            for (const auto& mode : v.modes)
                val += mode.values[i] * rule.harmonic(mode.degree, j);
            slice += rule.weights()[j] * std::pow(std::abs(val), p);
        }
        rep.rhs[i] = slice;
        rep.min_margin = std::min(rep.min_margin, rep.lhs[i] - rep.rhs[i]);
    }
    return rep;
}

double delta_gap_coefficient(int dim, int degree) {
    const double lam = sphere_eigenvalue(dim, degree);
    if (dim >= 5) return lam + sq(dim - 4) / 4.0 - 4.0;
    return (std::sqrt(5.0) - 2.0) * (4.0 * lam + sq(dim - 4)) - 4.0;
}

DeltaDecrease check_delta_decrease(const ModeField& v) {
    if (v.dim <= 4 && v.has_degree_one())
        throw PreconditionError(
            "check_delta_decrease: degree-one content must vanish in dimensions 2-4");
    DeltaDecrease out;
    out.rhs = laplacian_l2(v);
    out.lhs = laplacian_l2(rearranged_field(v));
    out.gap = out.rhs - out.lhs;
    for (const auto& mode : v.modes) {
        if (mode.degree == 0) continue;
        const double lam = sphere_eigenvalue(v.dim, mode.degree);
        std::vector<double> vsq(mode.values.size());
        for (std::size_t i = 0; i < vsq.size(); ++i) vsq[i] = sq(mode.values[i]);
        const double piece =
            lam * delta_gap_coefficient(v.dim, mode.degree) * v.grid.integrate(vsq, v.dim - 5);
        out.mode_bounds.push_back(piece);
        out.bound += piece;
    }
    return out;
}

SidePair scalar_gradient_decrease(const SampledSphereField& g, double q) {
    const auto& grid = g.grid;
    const int m = grid.points();
    const auto gcheck = symmetrize_scalar(g, q);
    const double area = g.angular.sphere_area();

    // modes for the angular derivative of g
    const auto modes = g.to_modes(BoundaryClass::CompactSupport);
    SidePair out;
    for (int c = 0; c < m; ++c) {
        const double rm = grid.midpoint_radius(c);
        const double h = grid.cell_width(c);
        const double cw = std::pow(rm, g.dim - 1.0) * h;
        out.lhs += cw * area * std::pow(std::abs((gcheck[c + 1] - gcheck[c]) / h), q);
        double slice = 0.0;
        for (int j = 0; j < g.angular.order(); ++j) {
            const double dr = (g.values[c + 1][j] - g.values[c][j]) / h;
            double dth = 0.0;
            for (const auto& mode : modes.modes)
                dth += 0.5 * (mode.values[c] + mode.values[c + 1]) *
                       g.angular.harmonic_deriv(mode.degree, j);
            const double t = g.angular.nodes()[j];
            const double grad_sq = sq(dr) + (1.0 - t * t) * sq(dth) / sq(rm);
            slice += g.angular.weights()[j] * std::pow(grad_sq, 0.5 * q);
        }
        out.rhs += cw * slice;
    }
    return out;
}

ViolationWitness delta_decrease_violation_search(const RadialGrid& grid, std::uint64_t seed0,
                                                 int attempts) {
    ViolationWitness out;
    const int m = grid.points();
    for (int a = 0; a < attempts; ++a) {
        const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(a);
        Rng rng(seed);
        // inverse-power envelope with content pushed toward the origin in log
        // radius, where the comparison genuinely reverses for degree one
        Mode mode;
        mode.degree = 1;
        mode.values.assign(m + 1, 0.0);
        const double lx_lo = std::log(4.0 * grid.node(1)), lx_hi = std::log(0.5);
        for (int b = 0; b < 3; ++b) {
            const double width = rng.uniform(0.8, 2.5);
            const double center = rng.uniform(lx_lo + width, lx_hi);
            const double amp = rng.uniform(0.2, 1.0);
            for (int i = 1; i <= m; ++i) {
                const double r = grid.node(i);
                mode.values[i] += amp * std::sqrt(r) * bump(std::log(r), center, width);
            }
        }
        ModeField field;
        field.dim = 3;
        field.grid = grid;
        field.bc = BoundaryClass::CompactSupport;
        field.modes.push_back(mode);
        const double rhs = laplacian_l2(field);
        const double lhs = laplacian_l2(rearranged_field(field));
        if (lhs > rhs * (1.0 + 1e-8)) {
            out.found = true;
            out.seed = seed;
            out.lhs = lhs;
            out.rhs = rhs;
            out.field = std::move(field);
            return out;
        }
    }
    return out;
}

}  // namespace vortexlab
