#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vortexlab/grid.hpp"
#include "vortexlab/potentials.hpp"

namespace vortexlab {

enum class ProfileBranch { Gl, ExtendedEscaping, ExtendedNonescaping, MmEscaping, Equator };

std::string to_string(ProfileBranch b);

/// Sampled radial profile pair (f, g) of a vortex-type critical point.
struct RadialProfile {
    RadialGrid grid;
    std::vector<double> f;        // in-plane amplitude, f(1) = 1
    std::vector<double> g;        // out-of-plane amplitude, g(1) = 0; all zero when absent
    bool has_out_of_plane = false;
    ProfileBranch branch = ProfileBranch::Gl;
    double eps = 0.0, eta = 0.0;
    double residual_f = 0.0, residual_g = 0.0;  // interior max-norm collocation residuals
    int newton_iterations = 0;
    bool fallback_warning = false;  // set when an escape attempt fell back to another branch

    int dim() const { return grid.dim(); }
};

/// Violation report for the per-branch profile invariants.
struct ProfileInvariantReport {
    bool ok = true;
    std::string message;
    int node = -1;
};

/// Unique monotone solution of the degree-one amplitude equation
///   -f'' - (N-1)/r f' + (N-1)/r^2 f = eps^{-2} W'(1 - f^2) f,  f(0)=0, f(1)=1,
/// by damped Newton on the collocation residual.
RadialProfile solve_gl_profile(const RadialGrid& grid, double eps, const PotentialModel& w);

/// Coupled pair (f, g) of the two-parameter extended model. Tries the escaping
/// seed first (when 2 <= N <= 6) and falls back to the in-plane branch (g = 0,
/// f the gl profile). A converged out-of-plane component below the 1e-4
/// amplitude gate counts as non-escaping.
RadialProfile solve_extended_profile(const RadialGrid& grid, double eps, double eta,
                                     const PotentialModel& w, const PotentialModel& wt);

/// Unit-sphere-valued profile via the angle substitution (f, g) = (sin, cos) psi.
/// Returns the escaping branch when the angle relaxation converges, otherwise
/// the equator profile f = 1, g = 0 with a warning tag (N >= 3 only).
RadialProfile solve_mm_profile(const RadialGrid& grid, double eta, const PotentialModel& wt);

/// Equator profile f = 1, g = 0 (exact critical point for N >= 3).
RadialProfile equator_profile(const RadialGrid& grid, double eta);

struct MultiplierReport {
    std::vector<double> multiplier;  // reconstructed lambda(r)
    double max_residual_f = 0.0;     // amplitude equation residual with this multiplier
    double max_residual_g = 0.0;
};

/// Rebuilds the constraint multiplier from the solved pair and checks both
/// constrained equations pointwise against it.
MultiplierReport verify_lagrange_multiplier(const RadialProfile& profile, double eta,
                                            const PotentialModel& wt);

struct LimitCheckReport {
    std::vector<double> eps_values;
    std::vector<double> distances;  // H^1 distances to the constrained profile
    bool decreasing = true;
    bool converged = false;  // last distance below the threshold
};

/// Solves the extended system along a decreasing eps sequence and measures the
/// H^1 distance to the unit-sphere profile at the same eta.
LimitCheckReport mm_limit_check(const RadialGrid& grid, std::vector<double> eps_values,
                                double eta, const PotentialModel& w,
                                const PotentialModel& wt, double threshold);

/// H^1(B^N, R^{N+1}) distance between two profiles on the same grid.
double profile_h1_distance(const RadialProfile& a, const RadialProfile& b);

struct EnergyBreakdown {
    double dirichlet = 0.0;
    double w_term = 0.0;
    double wt_term = 0.0;
    double total = 0.0;
};

/// Discrete radial energy of a profile pair; the same functional the zonal
/// energy reduces to on purely radial configurations.
EnergyBreakdown radial_energy(const RadialGrid& grid, const std::vector<double>& f,
                              const std::vector<double>& g, double eps, double eta,
                              const PotentialModel& w, const PotentialModel& wt);

/// Branch-specific invariants (bounds, monotonicity, constraint residuals).
ProfileInvariantReport check_profile_invariants(const RadialProfile& profile);

}  // namespace vortexlab
