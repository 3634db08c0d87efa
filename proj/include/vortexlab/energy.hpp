#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "vortexlab/angular.hpp"
#include "vortexlab/common.hpp"
#include "vortexlab/modefield.hpp"
#include "vortexlab/potentials.hpp"
#include "vortexlab/profiles.hpp"

namespace vortexlab {

enum class ConfigClass { Admissible, Perturbation };

/// Zonal configuration U = (grad u, p) on the ball. The gradient-field part is
/// stored through the radial-derivative coefficients a_k = u_k' (one radial
/// sample row per zonal mode); the potentials u_k are their boundary-anchored
/// integrals, so the radial reduction of the energy is exactly the
/// one-dimensional profile energy. The out-of-plane part p is stored as zonal
/// mode coefficients.
struct ZonalConfig {
    int dim = 0;
    RadialGrid grid{2, 12, 1.0};
    AngularRule angular{2, 8, 2};
    ConfigClass cls = ConfigClass::Admissible;
    std::vector<std::vector<double>> a_modes;  // [mode k][node]
    std::vector<std::vector<double>> p_modes;  // [mode l][node]

    int max_degree() const { return static_cast<int>(a_modes.size()) - 1; }
    std::vector<double> potential_mode(int k) const;  // u_k from a_k

    /// boundary data at r = 1 for the admissible class: grad u = x, p = 0
    double admissible_slope() const { return std::sqrt(sphere_measure(dim)); }

    /// weighted share of the non-radial (k >= 1) content
    double nonradial_mass() const;
};

/// Radially symmetric configuration from a solved profile.
ZonalConfig embed_profile(const RadialProfile& profile, const AngularRule& rule,
                          int max_degree);

/// Adds a gradient perturbation (from a clamped scalar field) and an
/// out-of-plane perturbation (zero-trace mode rows) to a configuration.
void add_perturbation(ZonalConfig& config, const ModeField& v,
                      const std::vector<std::vector<double>>& p_modes, double amplitude);

struct ZonalEnergy {
    double dirichlet = 0.0;
    double w_term = 0.0;
    double wt_term = 0.0;
    double total = 0.0;
};

ZonalEnergy energy_extended(const ZonalConfig& config, double eps, double eta,
                            const PotentialModel& w, const PotentialModel& wt);

struct GapCheck {
    double lhs = 0.0;  // energy increase over the critical branch
    double rhs = 0.0;  // half quadratic form + half out-of-plane form
    double slack() const { return lhs - rhs; }
};

/// Convexity gap of the energy around a solved branch against the
/// second-variation lower bound.
GapCheck convexity_gap_check(const RadialProfile& branch, const ModeField& v,
                             const std::vector<std::vector<double>>& p_modes, double eps,
                             double eta, const PotentialModel& w, const PotentialModel& wt);

struct MinimizeOptions {
    int max_iterations = 4000;
    double gradient_tolerance = 1e-9;
    bool record_history = true;
};

struct HistoryRow {
    int iteration = 0;
    double energy = 0.0;
    double gradient_norm = 0.0;
    double nonradial_mass = 0.0;
};

struct MinimizeResult {
    ZonalConfig config;
    double energy = 0.0;
    double gradient_norm = 0.0;
    double nonradial_mass = 0.0;
    bool converged = false;
    std::vector<HistoryRow> history;
};

/// Quasi-Newton descent of the extended energy over the admissible class
/// (boundary rows pinned, all interior mode samples free).
MinimizeResult minimize_extended(const ZonalConfig& init, double eps, double eta,
                                 const PotentialModel& w, const PotentialModel& wt,
                                 const MinimizeOptions& opts = {});

struct MmMinimizeResult {
    MinimizeResult last;        // final continuation stage
    double constraint_residual = 0.0;  // max |1 - |U|^2| at the tensor nodes
    int p_sign = 0;                    // sign of the out-of-plane mean
};

/// Unit-sphere-valued minimization via penalization: the unit-length
/// constraint is enforced by the square in-plane potential along a decreasing
/// eps continuation, mirroring how the constrained model arises as the stiff
/// limit of the extended one.
MmMinimizeResult minimize_mm(const ZonalConfig& init, double eta, const PotentialModel& wt,
                             const std::vector<double>& eps_schedule = {0.15, 0.08, 0.04, 0.015},
                             const MinimizeOptions& opts = {});

struct BiharmonicMinimizeResult {
    ModeField minimizer;          // on the constraint set
    ModeField rescaled;           // solution of the unconstrained equation
    double j_value = 0.0;
    double multiplier = 0.0;      // nonlinear eigenvalue of the constrained problem
    double el_residual = 0.0;     // relative Euler-Lagrange residual of the rescaled field
    double nonradial_mass = 0.0;
    bool sign_definite = false;
    bool monotone = false;
    bool converged = false;
};

/// Minimizes J[v] = 1/2 ||Delta v||^2 - lambda/2 ||v||^2 over the set
/// ||v||_p = d by descending the ray-rescaled functional.
BiharmonicMinimizeResult minimize_biharmonic_J(const RadialGrid& grid, int dim, double p,
                                               double lambda, double d,
                                               const ModeField& init,
                                               const MinimizeOptions& opts = {});

/// J evaluated on a clamped field (for competitor comparisons).
double biharmonic_j_value(const ModeField& v, double lambda);
double lp_norm(const ModeField& v, const AngularRule& rule, double p);

/// Finite-difference check of the descent gradient of the extended energy.
double energy_gradient_check(const ZonalConfig& config, double eps, double eta,
                             const PotentialModel& w, const PotentialModel& wt, Rng& rng,
                             int directions);

}  // namespace vortexlab
