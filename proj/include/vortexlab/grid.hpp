#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

namespace vortexlab {

/// Finite-difference weights for the m-th derivative at point z from the given
/// stencil nodes (Fornberg's recurrence).
std::vector<double> fd_weights(double z, std::span<const double> nodes, int order);

/// One-dimensional radial discretization of (0, 1].
///
/// Nodes are r_i = (i/M)^grading for i = 0..M; index 0 is the origin slot used
/// by boundary stencils, the quadrature nodes proper are r_1..r_M = 1. Weighted
/// quadrature integrates f(r) r^alpha dr with the monomial weight handled
/// exactly inside panel coefficients, so polynomials of degree <= 3 are
/// integrated exactly for every admissible alpha. For alpha <= -1 the first
/// panel covers [r_1, r_3] only and the integrand is assumed to vanish near 0.
class RadialGrid {
  public:
    RadialGrid(int dim, int points, double grading);

    /// Grading exponent used throughout: 1.5 below dimension 5, 1 otherwise.
    static double default_grading(int dim) { return dim <= 4 ? 1.5 : 1.0; }
    static RadialGrid standard(int dim, int points) {
        return RadialGrid(dim, points, default_grading(dim));
    }

    int dim() const { return dim_; }
    int points() const { return m_; }            // M: index of the node at r = 1
    double grading() const { return grading_; }
    const std::vector<double>& nodes() const { return r_; }   // size M+1, r[0] = 0
    double node(int i) const { return r_[i]; }

    /// integral of values(r) r^alpha dr over (0, 1]
    double integrate(std::span<const double> values, int alpha) const;
    const std::vector<double>& weights(int alpha) const;

    /// Trapezoidal weights for r^alpha dr. Second order only, but smooth from
    /// node to node, which quadratic-form minimizers require: the high-order
    /// panel weights oscillate at the node scale and a discrete minimizer can
    /// shift curvature onto the cheap nodes, depressing eigenvalues by O(1).
    const std::vector<double>& smooth_weights(int alpha) const;

    /// 3-point finite differences (one-sided closures at both ends)
    std::vector<double> deriv1(std::span<const double> values) const;
    std::vector<double> deriv2(std::span<const double> values) const;

    /// Values (a_{i} + a_{i+1})/2 and slopes (a_{i+1} - a_i)/h_i at cell midpoints.
    std::vector<double> midpoint_values(std::span<const double> values) const;
    std::vector<double> midpoint_slopes(std::span<const double> values) const;
    double midpoint_radius(int cell) const { return 0.5 * (r_[cell] + r_[cell + 1]); }
    double cell_width(int cell) const { return r_[cell + 1] - r_[cell]; }

    /// v(r_i) = v(1) - sum of midpoint slopes over [r_i, 1]; anchors at value_at_one.
    std::vector<double> integrate_from_boundary(std::span<const double> midpoint_slopes,
                                                double value_at_one) const;

    RadialGrid refined() const { return RadialGrid(dim_, 2 * m_, grading_); }

    /// Rows of the 3-point first-derivative operator: row i touches nodes
    /// base(i)..base(i)+2. Exposed for assembling gradients of discrete
    /// energies that contain (d/dr)^2 terms.
    struct DerivRows {
        std::vector<int> base;
        std::vector<double> coeff;  // 3 per row
        int rows() const { return static_cast<int>(base.size()); }
        double apply_row(int i, std::span<const double> v) const {
            const int b = base[i];
            return coeff[3 * i] * v[b] + coeff[3 * i + 1] * v[b + 1] + coeff[3 * i + 2] * v[b + 2];
        }
    };
    const DerivRows& deriv1_rows() const;

    bool same_layout(const RadialGrid& other) const {
        return m_ == other.m_ && grading_ == other.grading_;
    }

  private:
    int dim_, m_;
    double grading_;
    std::vector<double> r_;
    mutable std::map<int, std::vector<double>> weight_cache_;
    mutable std::map<int, std::vector<double>> smooth_weight_cache_;
    mutable std::shared_ptr<const DerivRows> deriv_rows_;

    std::vector<double> build_weights(int alpha) const;
};

}  // namespace vortexlab
