#include "vortexlab/angular.hpp"

#include <cmath>

#include "vortexlab/banded.hpp"
#include "vortexlab/common.hpp"

namespace vortexlab {

namespace {

// Squared off-diagonal recurrence coefficients of the monic orthogonal
// polynomials for the ultraspherical weight (1-t^2)^a on [-1, 1].
std::vector<double> monic_recurrence_sq(double a, int count) {
    std::vector<double> b(count + 1, 0.0);
    const double ab = 2.0 * a;  // alpha + beta in Jacobi notation, alpha = beta = a
    for (int k = 1; k <= count; ++k) {
        if (k == 1)
            b[k] = 4.0 * (1.0 + a) * (1.0 + a) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            b[k] = 4.0 * k * (k + a) * (k + a) * (k + ab) /
                   ((2.0 * k + ab) * (2.0 * k + ab) * (2.0 * k + ab + 1.0) *
                    (2.0 * k + ab - 1.0));
    }
    return b;
}

}  // namespace

AngularRule::AngularRule(int dim, int order, int max_degree)
    : dim_(dim), kmax_(max_degree), area_(sphere_measure(dim)) {
    if (dim < 2) throw PreconditionError("AngularRule: dimension must be >= 2");
    if (order < max_degree + 2) throw PreconditionError("AngularRule: order too small for max degree");

    const double a = 0.5 * (dim - 3);
    const auto bsq = monic_recurrence_sq(a, std::max(order, kmax_ + 1));

    // Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal matrix
    // with zero diagonal and off-diagonals sqrt(b_k); weights from the first
    // eigenvector components scaled by the total measure.
    std::vector<double> diag(order, 0.0), off(order - 1);
    for (int k = 1; k < order; ++k) off[k - 1] = std::sqrt(bsq[k]);
    std::vector<double> vals, vecs;
    tridiag_eigen(diag, off, vals, vecs);
    t_ = vals;
    w_.resize(order);
    for (int j = 0; j < order; ++j) {
        const double q = vecs[static_cast<std::size_t>(0) * order + j];
        w_[j] = area_ * q * q;
    }

    // Orthonormal zonal harmonics and derivatives at the nodes:
    //   sqrt(b_{k+1}) p_{k+1} = t p_k - sqrt(b_k) p_{k-1},  p_0 = 1/sqrt(area)
    phi_.assign(kmax_ + 1, std::vector<double>(order, 0.0));
    dphi_.assign(kmax_ + 1, std::vector<double>(order, 0.0));
    for (int j = 0; j < order; ++j) {
        const double t = t_[j];
        double pm = 0.0, dm = 0.0;
        double p = 1.0 / std::sqrt(area_), d = 0.0;
        phi_[0][j] = p;
        for (int k = 0; k < kmax_; ++k) {
            const double sb1 = std::sqrt(bsq[k + 1]);
            const double sb0 = k > 0 ? std::sqrt(bsq[k]) : 0.0;
            const double pn = (t * p - sb0 * pm) / sb1;
            const double dn = (p + t * d - sb0 * dm) / sb1;
            pm = p; dm = d; p = pn; d = dn;
            phi_[k + 1][j] = p;
            dphi_[k + 1][j] = d;
        }
    }
}

std::vector<double> AngularRule::analyze(std::span<const double> samples) const {
    std::vector<double> c(kmax_ + 1, 0.0);
    for (int k = 0; k <= kmax_; ++k) {
        double s = 0.0;
        for (int j = 0; j < order(); ++j) s += w_[j] * phi_[k][j] * samples[j];
        c[k] = s;
    }
    return c;
}

std::vector<double> AngularRule::synthesize(std::span<const double> coefficients) const {
    std::vector<double> f(order(), 0.0);
    const int kk = std::min<int>(kmax_, static_cast<int>(coefficients.size()) - 1);
    for (int j = 0; j < order(); ++j) {
        double s = 0.0;
        for (int k = 0; k <= kk; ++k) s += coefficients[k] * phi_[k][j];
        f[j] = s;
    }
    return f;
}

double AngularRule::integrate(std::span<const double> samples) const {
    double s = 0.0;
    for (int j = 0; j < order(); ++j) s += w_[j] * samples[j];
    return s;
}

}  // namespace vortexlab
