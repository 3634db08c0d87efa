#pragma once

#include <span>
#include <vector>

namespace vortexlab {

/// Laplace-Beltrami eigenvalue of a degree-k spherical harmonic on S^{N-1}.
inline double sphere_eigenvalue(int dim, int degree) {
    return static_cast<double>(degree) * (degree + dim - 2);
}

/// Quadrature and zonal-harmonic tables on the polar angle of S^{N-1}.
///
/// A zonal function depends only on t = cos(theta_1); its sphere integral is
/// |S^{N-2}| \int_{-1}^{1} f(t) (1-t^2)^{(N-3)/2} dt, which the Gauss-Jacobi
/// rule below evaluates exactly for polynomial integrands of degree
/// <= 2*order - 1. The tables phi_k are the L^2(S^{N-1})-orthonormal zonal
/// harmonics built from the same three-term recurrence.
class AngularRule {
  public:
    AngularRule(int dim, int order, int max_degree);

    static AngularRule standard(int dim, int max_degree) {
        return AngularRule(dim, 2 * max_degree + 4, max_degree);
    }

    int dim() const { return dim_; }
    int order() const { return static_cast<int>(t_.size()); }
    int max_degree() const { return kmax_; }

    const std::vector<double>& nodes() const { return t_; }       // t_j in (-1, 1)
    const std::vector<double>& weights() const { return w_; }     // sum = |S^{N-1}|
    double sphere_area() const { return area_; }

    /// phi_k(t_j) and phi_k'(t_j); |grad_S phi_k|^2 = (1 - t^2) phi_k'(t)^2.
    double harmonic(int degree, int node) const { return phi_[degree][node]; }
    double harmonic_deriv(int degree, int node) const { return dphi_[degree][node]; }
    double eigenvalue(int degree) const { return sphere_eigenvalue(dim_, degree); }

    /// Zonal harmonic coefficients of angular samples: c_k = \int f phi_k dsigma.
    std::vector<double> analyze(std::span<const double> samples) const;
    /// Samples at the quadrature nodes from coefficients.
    std::vector<double> synthesize(std::span<const double> coefficients) const;

    /// \int f dsigma over S^{N-1} for zonal samples f(t_j).
    double integrate(std::span<const double> samples) const;

  private:
    int dim_, kmax_;
    double area_;
    std::vector<double> t_, w_;
    std::vector<std::vector<double>> phi_, dphi_;
};

}  // namespace vortexlab
