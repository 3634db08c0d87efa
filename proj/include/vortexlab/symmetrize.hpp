#pragma once

#include <functional>
#include <vector>

#include "vortexlab/angular.hpp"
#include "vortexlab/modefield.hpp"

namespace vortexlab {

/// Zonal scalar field sampled on the radial x angular tensor grid.
struct SampledSphereField {
    int dim = 0;
    RadialGrid grid{2, 12, 1.0};
    AngularRule angular{2, 8, 2};
    std::vector<std::vector<double>> values;  // [radial node][angular node]

    static SampledSphereField from_modes(const ModeField& field, const AngularRule& rule);
    ModeField to_modes(BoundaryClass bc) const;
};

/// Radial rearrangement that preserves every sphere-slice L^q mass:
/// gcheck(r) = (slice average of |g|^q)^{1/q} >= 0.
std::vector<double> symmetrize_scalar(const SampledSphereField& g, double q);

/// Radial rearrangement of a gradient field. The slope is built at cell
/// midpoints from the mode identity
///   (vcheck')^2 = sum_k (v_k')^2 + lambda_k v_k^2 / r^2,
/// and the profile is its boundary-anchored integral, so radial monotone
/// fields are reproduced exactly and the slice gradient masses match by
/// construction.
struct GradientRearrangement {
    std::vector<double> values;          // vcheck at the nodes, <= 0, vcheck(1) = 0
    std::vector<double> midpoint_slope;  // vcheck' >= 0 at cell midpoints
    double boundary_slope = 0.0;         // |c| for radial-gradient input
    BoundaryClass bc = BoundaryClass::ClampedZero;
};

GradientRearrangement symmetrize_gradient(const ModeField& v);

/// The rearranged profile as a radial single-mode field (for reuse of the
/// quadratic-form machinery).
ModeField rearranged_field(const ModeField& v);

/// Slice gradient-mass mismatch at the cell midpoints:
///   max over cells of |slice mean |grad v|^2 - (vcheck')^2| / scale.
double slice_gradient_mismatch(const ModeField& v, const AngularRule& rule);

struct SidePair {
    double lhs = 0.0, rhs = 0.0;
    double margin() const { return rhs - lhs; }
};

/// int G(r, |grad vcheck|^2) <= int G(r, |grad v|^2) for G convex in the
/// second variable (certified by sampled second differences).
SidePair check_convex_decrease(const ModeField& v, const AngularRule& rule,
                               const std::function<double(double, double)>& convex_integrand);

/// Specialization to G = s^{p/2}: the W^{1,p} decrease, p > 2.
SidePair check_lp_decrease(const ModeField& v, const AngularRule& rule, double p);

struct SliceReport {
    std::vector<double> lhs, rhs;  // per radial node
    double min_margin = 0.0;       // min over nodes of lhs - rhs
};

/// Slicewise L^p growth for boundary-vanishing fields and 1 <= p <= 2:
/// at each radius, int |vcheck|^p dsigma >= int |v|^p dsigma.
SliceReport check_lp_increase_low(const ModeField& v, const AngularRule& rule, double p);

struct DeltaDecrease {
    double lhs = 0.0;    // int (Delta vcheck)^2
    double rhs = 0.0;    // int (Delta v)^2
    double gap = 0.0;    // rhs - lhs
    double bound = 0.0;  // sum_k lambda_k s_k int r^{N-5} v_k^2
    std::vector<double> mode_bounds;
};

/// Bi-Laplacian comparison with the mode-wise gap bound. In dimensions 2-4 the
/// degree-one content must vanish; the bound coefficients switch accordingly.
DeltaDecrease check_delta_decrease(const ModeField& v);

/// Coefficient s_k of the gap bound.
double delta_gap_coefficient(int dim, int degree);

/// Scalar-rearrangement W^{1,q} comparison for a sampled field.
SidePair scalar_gradient_decrease(const SampledSphereField& g, double q);

/// Searches seeded random degree-one fields (inverse-power envelope, content
/// pushed toward the origin) for a violation of the bi-Laplacian comparison in
/// dimension 3; returns the violating field and the seed that produced it.
struct ViolationWitness {
    bool found = false;
    std::uint64_t seed = 0;
    double lhs = 0.0, rhs = 0.0;
    ModeField field;
};
ViolationWitness delta_decrease_violation_search(const RadialGrid& grid, std::uint64_t seed0,
                                                 int attempts);

}  // namespace vortexlab
