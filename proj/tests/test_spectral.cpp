#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vortexlab/common.hpp"
#include "vortexlab/rng.hpp"
#include "vortexlab/spectral.hpp"

using namespace vortexlab;

namespace {
const PotentialModel kW = PotentialModel::half_square();
const PotentialModel kWzero = PotentialModel::zero(PotentialDomain::Gl);
const PotentialModel kWt = PotentialModel::linear_mm();
const PotentialModel kWtZero = PotentialModel::zero(PotentialDomain::Mm);
}  // namespace

TEST_CASE("first eigenvalue of the linearized operator") {
    SUBCASE("no potential term reproduces the ball eigenvalue") {
        RadialGrid g = RadialGrid::standard(3, 384);
        const auto res = ell_of_eps(g, 0.8, kWzero);
        CHECK(std::abs(res.ell - M_PI * M_PI) <= 1e-3 * M_PI * M_PI);
    }
    SUBCASE("sign flips across the critical radius in dimension four") {
        RadialGrid g = RadialGrid::standard(4, 384);
        CHECK(ell_of_eps(g, 1.0, kW).ell > 0.0);
        CHECK(ell_of_eps(g, 0.08, kW).ell < 0.0);
    }
    SUBCASE("dimension seven stays positive") {
        RadialGrid g = RadialGrid::standard(7, 384);
        for (double eps : {0.05, 0.2, 1.0}) CHECK(ell_of_eps(g, eps, kW).ell > 0.0);
    }
}

TEST_CASE("eigenvalue sweep is increasing for the standard potential") {
    // reported for inspection; single sign change is what the classification uses
    RadialGrid g = RadialGrid::standard(4, 384);
    std::ostringstream os;
    double prev = -1e300;
    int violations = 0;
    for (double eps : geometric_range(0.05, 2.0, 8)) {
        const double ell = ell_of_eps(g, eps, kW).ell;
        if (ell < prev - 1e-8) ++violations;
        os << " " << ell;
        prev = ell;
    }
    MESSAGE("eigenvalue sweep:" << os.str() << " (monotonicity violations: " << violations
                                << ")");
}

TEST_CASE("critical radius search") {
    RadialGrid g = RadialGrid::standard(4, 384);
    const auto res = find_eps0(g, kW);
    REQUIRE(res.has_root);
    CHECK(res.ell_lo < 0.0);
    CHECK(res.ell_hi >= 0.0);
    CHECK(res.bracket_hi - res.bracket_lo <= 1e-4 * res.bracket_hi);

    const auto r7 = find_eps0(RadialGrid::standard(7, 384), kW);
    CHECK_FALSE(r7.has_root);
    const auto rz = find_eps0(g, kWzero);
    CHECK_FALSE(rz.has_root);
    CHECK(rz.no_root_reason.find("W'(1)") != std::string::npos);
}

TEST_CASE("onset curve formula") {
    CHECK(eta0_of_eps(-4.0, kWt) == doctest::Approx(0.5));
    CHECK(eta0_of_eps(-2.0, kWtZero) == 0.0);
    CHECK_THROWS_AS(eta0_of_eps(0.5, kWt), PreconditionError);
}

TEST_CASE("classification from the eigenvalue criterion") {
    CHECK(classify(1.0, 10.0, kWt) == EscapeTag::NonEscaping);
    CHECK(classify(-1.0, 1e6, kWt) == EscapeTag::Escaping);     // large eta limit
    CHECK(classify(-1.0, 0.1, kWt) == EscapeTag::NonEscaping);  // strong penalty
    RadialGrid g = RadialGrid::standard(4, 384);
    CHECK(classify(g, 0.3, 100.0, kWzero, kWt) == EscapeTag::NonEscaping);
}

TEST_CASE("out-of-plane operator spectrum on both branches") {
    RadialGrid g = RadialGrid::standard(4, 384);
    const double eps = 0.08;
    const double ell = ell_of_eps(g, eps, kW).ell;
    REQUIRE(ell < 0.0);
    const double eta0 = eta0_of_eps(ell, kWt);

    SUBCASE("escaping: the out-of-plane profile is a zero mode") {
        const auto prof = solve_extended_profile(g, eps, 2.0 * eta0, kW, kWt);
        REQUIRE(prof.branch == ProfileBranch::ExtendedEscaping);
        const auto ts = t_operator_spectrum(prof, kW, kWt, eps, 2.0 * eta0);
        CHECK(std::abs(ts.first_eigenvalue) <= 1e-6);
        CHECK(ts.zero_mode_residual <= 1e-5);

        // non-negativity against random test functions
        Rng rng(11);
        const auto& wq = g.weights(g.dim() - 1);
        for (int t = 0; t < 50; ++t) {
            std::vector<double> p(g.points() + 1, 0.0);
            for (int b = 0; b < 3; ++b) {
                const double width = rng.uniform(0.05, 0.2);
                const double center = rng.uniform(2.0 * g.node(1) + width, 0.9 - width);
                const double amp = rng.uniform(-1.0, 1.0);
                for (int i = 0; i <= g.points(); ++i)
                    p[i] += amp * bump(g.node(i), center, width);
            }
            const auto tp = radial_schroedinger_apply(g, ts.potential, 0, p);
            double quad = 0.0, norm = 0.0;
            for (int i = 1; i < g.points(); ++i) {
                quad += wq[i] * tp[i] * p[i];
                norm += wq[i] * p[i] * p[i];
            }
            CHECK(quad >= -1e-8 * (std::abs(quad) + norm + 1.0));
        }
    }

    SUBCASE("in-plane: the first eigenvalue is the shifted base eigenvalue") {
        const double eta = 0.5 * eta0;
        const auto prof = solve_extended_profile(g, eps, eta, kW, kWt);
        REQUIRE(prof.branch == ProfileBranch::ExtendedNonescaping);
        const auto ts = t_operator_spectrum(prof, kW, kWt, eps, eta);
        const double expected = ell + kWt.slope_at_zero() / (eta * eta);
        CHECK(expected > 0.0);
        CHECK(std::abs(ts.first_eigenvalue - expected) <= 1e-6 * (1.0 + std::abs(expected)));
    }

    SUBCASE("no potentials at all reproduce the free ball eigenvalue") {
        const auto prof = solve_extended_profile(g, 1.0, 1.0, kWzero, kWtZero);
        const auto ts = t_operator_spectrum(prof, kWzero, kWtZero, 1.0, 1.0);
        RadialGrid g4 = RadialGrid::standard(4, 384);
        std::vector<double> zero(g4.points() + 1, 0.0);
        const double ball = first_eigenpair_radial(g4, zero, 0).eigenvalue;
        CHECK(ts.first_eigenvalue == doctest::Approx(ball).epsilon(1e-10));
    }
}

TEST_CASE("phase diagram topology") {
    RadialGrid g = RadialGrid::standard(4, 384);

    SUBCASE("rising onset curve with escaping region above it") {
        const auto eps0 = find_eps0(g, kW);
        REQUIRE(eps0.has_root);
        const auto pd = phase_diagram(g, kW, kWt, linear_range(0.4 * eps0.eps0, 1.4 * eps0.eps0, 4),
                                      geometric_range(0.3, 4.0, 4), 2);
        CHECK(pd.monotone_in_eta());
        CHECK_FALSE(pd.onset_curve.empty());
        for (std::size_t i = 1; i < pd.onset_curve.size(); ++i)
            CHECK(pd.onset_curve[i].second >= pd.onset_curve[i - 1].second);
        // beyond the critical radius every point is in-plane
        for (const auto& pt : pd.points)
            if (pt.eps > eps0.bracket_hi) CHECK(pt.tag == EscapeTag::NonEscaping);
    }

    SUBCASE("flat out-of-plane slope gives a vertical boundary") {
        const auto pd = phase_diagram(g, kW, kWtZero, geometric_range(0.05, 0.5, 5),
                                      geometric_range(0.2, 5.0, 3), 1);
        for (const auto& pt : pd.points) {
            const bool left = pt.eps < pd.eps0.bracket_lo;
            CHECK((pt.tag == EscapeTag::Escaping) == left);
        }
    }

    SUBCASE("flat in-plane slope never escapes") {
        const auto pd = phase_diagram(g, kWzero, kWt, geometric_range(0.05, 1.0, 3),
                                      geometric_range(0.2, 5.0, 3), 1);
        for (const auto& pt : pd.points) CHECK(pt.tag == EscapeTag::NonEscaping);
        CHECK_FALSE(pd.eps0.has_root);
    }
}

TEST_CASE("classification agrees with the branch the solver finds") {
    RadialGrid g = RadialGrid::standard(4, 192);
    const auto eps0 = find_eps0(g, kW);
    for (double eps : linear_range(0.6 * eps0.eps0, 1.3 * eps0.eps0, 3))
        for (double eta : geometric_range(0.3, 3.0, 3)) {
            const auto tag = classify(g, eps, eta, kW, kWt);
            const auto prof = solve_extended_profile(g, eps, eta, kW, kWt);
            CHECK((tag == EscapeTag::Escaping) ==
                  (prof.branch == ProfileBranch::ExtendedEscaping));
        }
}
