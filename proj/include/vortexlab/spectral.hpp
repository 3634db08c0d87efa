#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vortexlab/numerics.hpp"
#include "vortexlab/profiles.hpp"

namespace vortexlab {

enum class EscapeTag { Escaping, NonEscaping };

inline std::string to_string(EscapeTag t) {
    return t == EscapeTag::Escaping ? "escaping" : "non-escaping";
}

struct EllResult {
    double ell = 0.0;               // first eigenvalue of the linearized in-plane operator
    RadialEigenResult eigenpair;
    RadialProfile profile;          // the gl profile the potential was built from
};

/// First eigenvalue of -Laplace - eps^{-2} W'(1 - f_eps^2) on the ball, on the
/// radial mode of the solved gl profile.
EllResult ell_of_eps(const RadialGrid& grid, double eps, const PotentialModel& w);

/// Same, reusing an already-solved gl profile.
double ell_of_profile(const RadialProfile& profile, const PotentialModel& w);

struct Eps0Result {
    bool has_root = false;
    std::string no_root_reason;
    double eps0 = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0;  // sign change certified across these
    double ell_lo = 0.0, ell_hi = 0.0;
};

/// Critical radius where the first eigenvalue changes sign, by bisection on a
/// geometric scan of [1e-3, 10]. Returns a no-root report when the dimension
/// or the in-plane potential rules the sign change out.
Eps0Result find_eps0(const RadialGrid& grid, const PotentialModel& w);

/// Onset curve value sqrt(Wt'(0) / |ell(eps)|); requires ell < 0.
double eta0_of_eps(double ell, const PotentialModel& wt);

/// Escaping/non-escaping tag from the sign of ell(eps) + eta^{-2} Wt'(0).
EscapeTag classify(double ell, double eta, const PotentialModel& wt);
EscapeTag classify(const RadialGrid& grid, double eps, double eta, const PotentialModel& w,
                   const PotentialModel& wt);

struct TSpectrumResult {
    double first_eigenvalue = 0.0;
    std::vector<double> eigenvector;
    double zero_mode_residual = 0.0;  // ||T g|| / ||g|| on the escaping branch, else 0
    std::vector<double> potential;    // the radial potential of the operator
};

/// Radial ground state of the out-of-plane stability operator on the solved
/// branch. On the escaping branch the out-of-plane profile itself is an exact
/// discrete zero mode, and the reported residual certifies it.
TSpectrumResult t_operator_spectrum(const RadialProfile& profile, const PotentialModel& w,
                                    const PotentialModel& wt, double eps, double eta);

struct PhasePoint {
    double eps = 0.0, eta = 0.0, ell = 0.0;
    EscapeTag tag = EscapeTag::NonEscaping;
    bool solver_failed = false;
};

struct PhaseDiagram {
    int dim = 0;
    std::string w_name, wt_name;
    std::vector<double> eps_values, eta_values;
    std::vector<PhasePoint> points;  // row-major: eps index fastest
    Eps0Result eps0;
    std::vector<std::pair<double, double>> onset_curve;  // (eps, eta0(eps)) where ell < 0

    const PhasePoint& at(int i_eps, int i_eta) const {
        return points[static_cast<std::size_t>(i_eta) * eps_values.size() + i_eps];
    }
    bool monotone_in_eta() const;
};

/// Classifies a parameter lattice and attaches the critical radius and onset curve.
PhaseDiagram phase_diagram(const RadialGrid& grid, const PotentialModel& w,
                           const PotentialModel& wt, const std::vector<double>& eps_values,
                           const std::vector<double>& eta_values, int threads = 1);

/// Geometric range helper a:b:n (n log-spaced values from a to b inclusive).
std::vector<double> geometric_range(double a, double b, int n);
std::vector<double> linear_range(double a, double b, int n);

/// Independent oracle for the onset curve: bisect in eta on the branch actually
/// found by the extended solver at fixed eps.
double escape_onset_eta(const RadialGrid& grid, double eps, const PotentialModel& w,
                        const PotentialModel& wt, double eta_hi = 64.0, double rel_tol = 1e-3);

}  // namespace vortexlab
