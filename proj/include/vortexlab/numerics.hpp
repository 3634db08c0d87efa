#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vortexlab/banded.hpp"
#include "vortexlab/grid.hpp"

namespace vortexlab {

struct RadialEigenResult {
    double eigenvalue = 0.0;
    std::vector<double> eigenvector;  // normalized in the r^{N-1}-weighted norm, positive
    double residual = 0.0;            // ||A u - mu u||_w / ||u||_w on interior nodes
    int iterations = 0;
};

/// Collocation matrix of -u'' - (N-1)/r u' + (q + lambda_k/r^2) u on the grid,
/// Dirichlet at r = 1, regularity closure at the origin (u'(0) = 0 for the
/// radial mode, u(0) = 0 for degree >= 1). Row 0 and row M are boundary rows.
BandedMatrix radial_schroedinger_matrix(const RadialGrid& grid,
                                        std::span<const double> q, int degree);

/// Apply the operator rows to u; boundary rows return the constraint residual.
std::vector<double> radial_schroedinger_apply(const RadialGrid& grid,
                                              std::span<const double> q, int degree,
                                              std::span<const double> u);

/// Ground state by shifted inverse iteration with Rayleigh-quotient polish.
/// The initial shift -max|q| - 1 keeps the system definite for sign-indefinite q.
RadialEigenResult first_eigenpair_radial(const RadialGrid& grid,
                                         std::span<const double> q, int degree = 0,
                                         int max_iterations = 200);

struct BiharmonicResult {
    double eigenvalue = 0.0;
    std::vector<double> eigenvector;
    int iterations = 0;
};

/// First eigenvalue of the clamped bi-Laplacian on the unit ball, computed on
/// the radial mode with v(1) = v'(1) = 0 and the even closure at the origin.
BiharmonicResult biharmonic_first_eigenvalue(const RadialGrid& grid);

}  // namespace vortexlab
