#pragma once

#include <string>
#include <vector>

#include "vortexlab/angular.hpp"
#include "vortexlab/grid.hpp"
#include "vortexlab/rng.hpp"

namespace vortexlab {

enum class BoundaryClass { CompactSupport, ClampedZero, RadialGradient };

std::string to_string(BoundaryClass bc);

/// One zonal harmonic component: degree k and radial samples on the grid.
struct Mode {
    int degree = 0;
    std::vector<double> values;
};

/// Scalar field on the ball stored as zonal spherical-harmonic coefficients
/// v(r, theta) = sum_k v_k(r) phi_k(cos theta_1) with orthonormal phi_k.
struct ModeField {
    int dim = 0;
    RadialGrid grid{2, 12, 1.0};
    BoundaryClass bc = BoundaryClass::ClampedZero;
    double boundary_slope = 0.0;  // c = v_0'(1) for the radial-gradient class
    std::vector<Mode> modes;

    double eigenvalue(int mode_index) const {
        return sphere_eigenvalue(dim, modes[mode_index].degree);
    }
    const Mode* find_degree(int degree) const {
        for (const auto& m : modes)
            if (m.degree == degree) return &m;
        return nullptr;
    }
    bool has_degree_one() const;

    /// Largest mode amplitude, used for tolerances.
    double sup_norm() const;
};

struct FieldValidation {
    bool ok = true;
    std::string message;
};

/// Checks the declared boundary class against the end-node values/derivatives
/// and the origin decay of higher modes.
FieldValidation validate_mode_field(const ModeField& field);

/// Deterministic random field: per mode, a sum of smooth bumps compactly
/// supported in [max(2 r_1, support_lo), 0.9].
ModeField random_mode_field(const RadialGrid& grid, int dim, const std::vector<int>& degrees,
                            Rng& rng, double support_lo = 0.0);

/// Radial field from explicit samples (degree-0 single mode).
ModeField radial_mode_field(const RadialGrid& grid, int dim, std::vector<double> samples,
                            BoundaryClass bc, double boundary_slope = 0.0);

}  // namespace vortexlab
