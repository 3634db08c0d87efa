#include "vortexlab/modefield.hpp"

#include <cmath>

#include "vortexlab/common.hpp"

namespace vortexlab {

std::string to_string(BoundaryClass bc) {
    switch (bc) {
        case BoundaryClass::CompactSupport: return "compact-support";
        case BoundaryClass::ClampedZero: return "clamped-zero";
        case BoundaryClass::RadialGradient: return "radial-gradient";
    }
    return "?";
}

bool ModeField::has_degree_one() const {
    for (const auto& m : modes) {
        if (m.degree != 1) continue;
        for (double v : m.values)
            if (v != 0.0) return true;
    }
    return false;
}

double ModeField::sup_norm() const {
    double s = 0.0;
    for (const auto& m : modes)
        for (double v : m.values) s = std::max(s, std::abs(v));
    return s;
}

FieldValidation validate_mode_field(const ModeField& field) {
    const auto& grid = field.grid;
    const int m = grid.points();
    const double tol = 1e-8 * (field.sup_norm() + 1e-30);
    for (const auto& mode : field.modes) {
        if (static_cast<int>(mode.values.size()) != m + 1)
            return {false, "mode sample count does not match the grid"};
        for (double v : mode.values)
            if (!std::isfinite(v)) return {false, "non-finite sample"};
        const auto d = grid.deriv1(mode.values);
        const bool clamp_value = field.bc != BoundaryClass::RadialGradient || mode.degree >= 1;
        if (clamp_value && std::abs(mode.values[m]) > tol)
            return {false, "boundary value not zero for the declared class"};
        if (field.bc == BoundaryClass::RadialGradient && mode.degree == 0) {
            if (std::abs(d[m] - field.boundary_slope) > 1e-8 * (1.0 + std::abs(field.boundary_slope)))
                return {false, "boundary slope does not match the recorded constant"};
        } else if (field.bc != BoundaryClass::CompactSupport || mode.degree >= 0) {
            if (std::abs(d[m]) > 1e-6 * (field.sup_norm() / (1.0 - grid.node(m - 1)) + 1.0))
                return {false, "boundary derivative not zero for the declared class"};
        }
        if (mode.degree >= 1) {
            const double cap = std::pow(grid.node(1), std::min(mode.degree, 2)) *
                               (field.sup_norm() + 1e-30) * 10.0;
            if (std::abs(mode.values[1]) > cap)
                return {false, "higher mode does not decay toward the origin"};
        }
    }
    return {};
}

ModeField random_mode_field(const RadialGrid& grid, int dim, const std::vector<int>& degrees,
                            Rng& rng, double support_lo) {
    const int m = grid.points();
    ModeField field;
    field.dim = dim;
    field.grid = grid;
    field.bc = BoundaryClass::CompactSupport;
    const double lo = std::max(2.0 * grid.node(1), support_lo), hi = 0.9;
    for (int k : degrees) {
        Mode mode;
        mode.degree = k;
        mode.values.assign(m + 1, 0.0);
        for (int b = 0; b < 3; ++b) {
            const double width = rng.uniform(0.05, 0.2);
            const double center = rng.uniform(lo + width, hi - width);
            const double amp = rng.uniform(-1.0, 1.0);
            for (int i = 0; i <= m; ++i)
                mode.values[i] += amp * bump(grid.node(i), center, width);
        }
        field.modes.push_back(std::move(mode));
    }
    return field;
}

ModeField radial_mode_field(const RadialGrid& grid, int dim, std::vector<double> samples,
                            BoundaryClass bc, double boundary_slope) {
    if (static_cast<int>(samples.size()) != grid.points() + 1)
        throw PreconditionError("radial_mode_field: sample count mismatch");
    ModeField field;
    field.dim = dim;
    field.grid = grid;
    field.bc = bc;
    field.boundary_slope = boundary_slope;
    field.modes.push_back({0, std::move(samples)});
    return field;
}

}  // namespace vortexlab
