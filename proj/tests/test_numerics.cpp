#include <doctest.h>

#include <cmath>

#include "vortexlab/angular.hpp"
#include "vortexlab/banded.hpp"
#include "vortexlab/common.hpp"
#include "vortexlab/grid.hpp"
#include "vortexlab/numerics.hpp"

using namespace vortexlab;

namespace {

// Bessel power series, used only as test oracles at small arguments.
double bessel_j0(double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= -0.25 * x * x / (k * k);
        sum += term;
    }
    return sum;
}
double bessel_j1(double x) {
    double term = 0.5 * x, sum = term;
    for (int k = 1; k < 40; ++k) {
        term *= -0.25 * x * x / (k * (k + 1.0));
        sum += term;
    }
    return sum;
}
double bessel_i0(double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= 0.25 * x * x / (k * k);
        sum += term;
    }
    return sum;
}
double bessel_i1(double x) {
    double term = 0.5 * x, sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= 0.25 * x * x / (k * (k + 1.0));
        sum += term;
    }
    return sum;
}

double bisect(double lo, double hi, double (*f)(double)) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double clamped_disk_characteristic(double k) {
    return bessel_j0(k) * bessel_i1(k) + bessel_i0(k) * bessel_j1(k);
}

}  // namespace

TEST_CASE("grid nodes and weighted quadrature invariants") {
    for (int dim : {2, 3, 4, 5, 6}) {
        RadialGrid g = RadialGrid::standard(dim, 384);
        const auto& r = g.nodes();
        CHECK(r[0] == 0.0);
        CHECK(r[1] > 0.0);
        CHECK(r[g.points()] == 1.0);
        for (int i = 1; i <= g.points(); ++i) CHECK(r[i] > r[i - 1]);
        std::vector<double> one(g.points() + 1, 1.0);
        CHECK(g.integrate(one, dim - 1) ==
              doctest::Approx(1.0 / dim).epsilon(1e-6));
    }
}

TEST_CASE("cubic exactness of the weighted product rule") {
    RadialGrid g(3, 300, 1.0);  // uniform
    for (int alpha : {0, 1, 2, 3}) {
        std::vector<double> p(g.points() + 1);
        for (int i = 0; i <= g.points(); ++i) {
            const double r = g.node(i);
            p[i] = 1.0 + 2.0 * r - 3.0 * r * r + 0.5 * r * r * r;
        }
        const double exact =
            1.0 / (alpha + 1) + 2.0 / (alpha + 2) - 3.0 / (alpha + 3) + 0.5 / (alpha + 4);
        CHECK(std::abs(g.integrate(p, alpha) - exact) <= 1e-10);
    }
    // negative weight exponents with an integrand vanishing near the origin
    RadialGrid gg = RadialGrid::standard(2, 768);
    std::vector<double> f(gg.points() + 1);
    for (int i = 0; i <= gg.points(); ++i) f[i] = bump(gg.node(i), 0.5, 0.3);
    const double coarse = gg.integrate(f, -3);
    RadialGrid gf = gg.refined();
    std::vector<double> f2(gf.points() + 1);
    for (int i = 0; i <= gf.points(); ++i) f2[i] = bump(gf.node(i), 0.5, 0.3);
    CHECK(std::abs(gf.integrate(f2, -3) - coarse) <= 1e-8 * std::abs(coarse));
}

TEST_CASE("angular rule: orthonormal zonal harmonics") {
    for (int dim : {2, 3, 4, 6}) {
        AngularRule rule = AngularRule::standard(dim, 12);
        CHECK(rule.sphere_area() == doctest::Approx(sphere_measure(dim)));
        for (int k = 0; k <= 12; ++k)
            for (int l = 0; l <= 12; ++l) {
                double s = 0.0;
                for (int j = 0; j < rule.order(); ++j)
                    s += rule.weights()[j] * rule.harmonic(k, j) * rule.harmonic(l, j);
                CHECK(std::abs(s - (k == l ? 1.0 : 0.0)) <= 1e-8);
            }
    }
}

TEST_CASE("sphere eigenvalues by degree") {
    CHECK(sphere_eigenvalue(4, 1) == 3.0);
    CHECK(sphere_eigenvalue(4, 2) == 8.0);
    CHECK(sphere_eigenvalue(2, 0) == 0.0);
    CHECK(sphere_eigenvalue(5, 1) == 4.0);
}

TEST_CASE("ground state of the free ball operator matches the analytic values") {
    RadialGrid g3 = RadialGrid::standard(3, 384);
    std::vector<double> q(g3.points() + 1, 0.0);
    const auto r3 = first_eigenpair_radial(g3, q, 0);
    CHECK(std::abs(r3.eigenvalue - M_PI * M_PI) <= 1e-3 * M_PI * M_PI);
    CHECK(r3.residual <= 1e-8);
    for (int i = 1; i < g3.points(); ++i) CHECK(r3.eigenvector[i] > 0.0);

    // oracle for the disk: first root of the order-zero Bessel function
    const double j0_root = bisect(2.0, 3.0, bessel_j0);
    const double ref = j0_root * j0_root;
    CHECK(ref == doctest::Approx(5.783185962946785).epsilon(1e-12));
    RadialGrid g2 = RadialGrid::standard(2, 384);
    std::vector<double> q2(g2.points() + 1, 0.0);
    const auto r2 = first_eigenpair_radial(g2, q2, 0);
    CHECK(std::abs(r2.eigenvalue - ref) <= 1e-3 * ref);
}

TEST_CASE("constant potential shifts the eigenvalue exactly") {
    RadialGrid g = RadialGrid::standard(3, 384);
    std::vector<double> q0(g.points() + 1, 0.0), qc(g.points() + 1, 2.5);
    const double mu0 = first_eigenpair_radial(g, q0, 0).eigenvalue;
    const double muc = first_eigenpair_radial(g, qc, 0).eigenvalue;
    CHECK(muc - mu0 == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("degree-one mode lies above the radial ground state") {
    RadialGrid g = RadialGrid::standard(3, 384);
    std::vector<double> q(g.points() + 1, 0.0);
    const double mu0 = first_eigenpair_radial(g, q, 0).eigenvalue;
    const double mu1 = first_eigenpair_radial(g, q, 1).eigenvalue;
    CHECK(mu1 > mu0 + 1.0);
}

TEST_CASE("eigenvalue is invariant under reversal of the node ordering") {
    RadialGrid g = RadialGrid::standard(4, 192);
    const int m = g.points();
    std::vector<double> q(m + 1);
    for (int i = 0; i <= m; ++i) q[i] = -3.0 * bump(g.node(i), 0.5, 0.4);
    const double mu = first_eigenpair_radial(g, q, 0).eigenvalue;

    // reverse the assembled system and run a plain shifted inverse iteration
    BandedMatrix a = radial_schroedinger_matrix(g, q, 0);
    BandedMatrix rev(m + 1, 2, 2);
    for (int i = 0; i <= m; ++i)
        for (int j = std::max(0, i - 2); j <= std::min(m, i + 2); ++j)
            rev.at(m - i, m - j) = a.at(i, j);
    BandedMatrix shifted = rev;
    for (int i = 1; i < m; ++i) shifted.add(m - i, m - i, 4.0);  // shift -(-4) below spectrum
    shifted.factor();
    std::vector<double> u(m + 1, 0.0);
    for (int i = 1; i < m; ++i) u[m - i] = g.node(i) * (1.0 - g.node(i));
    double mu_rev = 0.0;
    for (int it = 0; it < 400; ++it) {
        std::vector<double> rhs(m + 1, 0.0);
        for (int i = 1; i < m; ++i) rhs[m - i] = u[m - i];
        u = shifted.solve(rhs);
        double nrm = 0.0;
        for (double x : u) nrm += x * x;
        nrm = std::sqrt(nrm);
        for (auto& x : u) x /= nrm;
        const auto au = rev.apply(u);
        double num = 0.0, den = 0.0;
        const auto& w = g.weights(g.dim() - 1);
        for (int i = 1; i < m; ++i) {
            num += w[i] * u[m - i] * au[m - i];
            den += w[i] * u[m - i] * u[m - i];
        }
        mu_rev = num / den;
    }
    CHECK(std::abs(mu_rev - mu) <= 1e-10 * (std::abs(mu) + 1.0));
}

TEST_CASE("clamped fourth-order eigenvalue: disk oracle and refinement drift") {
    // oracle: characteristic equation of the clamped disk
    const double k = bisect(3.0, 3.4, clamped_disk_characteristic);
    const double ref = k * k * k * k;
    CHECK(ref == doctest::Approx(104.363).epsilon(1e-4));

    RadialGrid g2 = RadialGrid::standard(2, 768);
    const auto b2 = biharmonic_first_eigenvalue(g2);
    CHECK(std::abs(b2.eigenvalue - ref) <= 0.01 * ref);

    RadialGrid g3 = RadialGrid::standard(3, 768);
    const auto b3 = biharmonic_first_eigenvalue(g3);
    const auto b3f = biharmonic_first_eigenvalue(g3.refined());
    CHECK(std::abs(b3f.eigenvalue - b3.eigenvalue) <= 1e-3 * b3.eigenvalue);

    RadialGrid g5 = RadialGrid::standard(5, 768);
    CHECK(biharmonic_first_eigenvalue(g5).eigenvalue > b3.eigenvalue);
}

TEST_CASE("banded factorization solves a shifted system") {
    BandedMatrix a(5, 1, 1);
    for (int i = 0; i < 5; ++i) {
        a.at(i, i) = 4.0;
        if (i) {
            a.at(i, i - 1) = -1.0;
            a.at(i - 1, i) = -2.0;
        }
    }
    const std::vector<double> x{1, -2, 3, -4, 5};
    const auto b = a.apply(x);
    a.factor();
    const auto y = a.solve(b);
    for (int i = 0; i < 5; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));
}
