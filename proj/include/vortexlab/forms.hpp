#pragma once

#include <vector>

#include "vortexlab/modefield.hpp"
#include "vortexlab/profiles.hpp"

namespace vortexlab {

/// Integral of (Laplacian v)^2 via the mode identity
///   sum_k int r^{N-1} (v_k'')^2 + (N-1+2 lambda_k) r^{N-3} (v_k')^2
///         + lambda_k (lambda_k + 2N - 8) r^{N-5} v_k^2 dr,
/// plus (N-1) c^2 for the radial-gradient boundary class. For clamped and
/// compactly supported fields this also equals the squared Hessian integral.
double laplacian_l2(const ModeField& v);

/// Same integral by direct quadrature of the per-mode radial Laplacian.
double laplacian_l2_direct(const ModeField& v);

/// sum_k int r^{N-3} (v_k')^2 dr  =  integral of (radial derivative)^2 / r^2
double radial_grad_over_r2(const ModeField& v);

/// sum_k lambda_k int r^{N-5} v_k^2 dr  =  integral of (angular gradient)^2 / r^2
double angular_grad_over_r2(const ModeField& v);

/// Dirichlet integral of the gradient field of v.
double gradient_l2(const ModeField& v);

/// Second-variation quadratic form split into the three per-mode terms.
struct FormBreakdown {
    std::vector<int> degrees;
    std::vector<double> term_i, term_ii, term_iii;
    double total = 0.0;            // sum of all three terms over all modes
    double bound = 0.0;            // lower bound from the two weighted integrals
    double margin = 0.0;           // total - bound
    double radial_coeff = 0.0;     // (N-2)^2/4
    double angular_coeff = 0.0;    // N^2/2 - 2N
};

/// F[grad v] = int (Delta v)^2 - eps^{-2} W'(1 - f^2 - g^2) |grad v|^2 against
/// a solved branch, with the mode split and the dimension-dependent bound.
FormBreakdown quadratic_form_F(const ModeField& v, const RadialProfile& profile, double eps,
                               const PotentialModel& w);

/// Sharp constant of the gradient-field inequality int (Delta v)^2 >= c_N int |grad v|^2/r^2.
double hardy_rellich_constant(int dim);

/// Ratio int (Delta v)^2 / int |grad v|^2 / r^2 for a compactly supported field.
double hardy_rellich_ratio(const ModeField& v);

struct HardyDecomposition {
    double lhs = 0.0, rhs = 0.0, gap = 0.0;
};

/// Ground-state identity for L = -div(a grad) + V on radial functions:
///   int (a u'^2 + V u^2) r^{N-1} = int a psi^2 ((u/psi)')^2 r^{N-1}
///                                 + int (u/psi)^2 (L psi) psi r^{N-1}.
HardyDecomposition hardy_decomposition_check(const RadialGrid& grid, int dim,
                                             const std::vector<double>& a,
                                             const std::vector<double>& potential,
                                             const std::vector<double>& psi,
                                             const std::vector<double>& u);

struct EstimatePair {
    double lhs = 0.0, rhs = 0.0;
    double margin() const { return lhs - rhs; }
};

struct ModeEstimates {
    EstimatePair first, second, third;  // per-term lower bounds of the split
};

/// Discrete check of the three per-mode lower bounds, including the weighted
/// quotient remainders, for a single-mode field against a solved branch.
ModeEstimates mode_split_estimates(const ModeField& v, const RadialProfile& profile,
                                   double eps, const PotentialModel& w);

/// One-dimensional weighted Hardy inequality
///   int r^{N-3} (u')^2 dr >= ((N-4)^2/4) int r^{N-5} u^2 dr
/// for compactly supported samples.
EstimatePair hardy_1d(const RadialGrid& grid, int dim, const std::vector<double>& u);

/// Pointwise certificate of the weighted-operator inequality for the inverse
/// power weight zeta = r^{-(N-2)/2} against a monotone profile:
///   -(r^{N-1} f^2 zeta')' / (r^{N-1} zeta) >= ((N-2)^2/4) f^2 / r^2.
/// Returns the worst signed slack over the checked interior window.
double zeta_weight_slack(const RadialGrid& grid, int dim, const std::vector<double>& f);

}  // namespace vortexlab
