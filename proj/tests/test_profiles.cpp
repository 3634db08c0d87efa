#include <doctest.h>

#include <cmath>

#include "vortexlab/common.hpp"
#include "vortexlab/profiles.hpp"

using namespace vortexlab;

namespace {
const PotentialModel kW = PotentialModel::half_square();
const PotentialModel kWzero = PotentialModel::zero(PotentialDomain::Gl);
const PotentialModel kWt = PotentialModel::linear_mm();
}  // namespace

TEST_CASE("zero potential forces the identity profile") {
    for (int dim : {2, 3, 4, 5, 6, 7}) {
        RadialGrid g = RadialGrid::standard(dim, 384);
        const auto p = solve_gl_profile(g, 0.7, kWzero);
        double err = 0.0;
        for (int i = 0; i <= g.points(); ++i)
            err = std::max(err, std::abs(p.f[i] - g.node(i)));
        CHECK(err <= 1e-6);
        CHECK(p.residual_f <= 1e-6);
    }
}

TEST_CASE("large-eps profile stays near the identity") {
    RadialGrid g = RadialGrid::standard(2, 384);
    const auto p = solve_gl_profile(g, 10.0, kW);
    double err = 0.0;
    for (int i = 0; i <= g.points(); ++i) err = std::max(err, std::abs(p.f[i] - g.node(i)));
    CHECK(err <= 0.05);
}

TEST_CASE("stiff profile: invariants and refinement agreement") {
    RadialGrid g = RadialGrid::standard(5, 384);
    const auto p = solve_gl_profile(g, 0.1, kW);
    CHECK(p.residual_f <= 1e-6);
    const auto inv = check_profile_invariants(p);
    CHECK(inv.ok);
    CHECK(p.f[g.points() / 2] > 0.0);
    CHECK(p.f[g.points() / 2] < 1.0);

    const auto pf = solve_gl_profile(g.refined(), 0.1, kW);
    double drift = 0.0;
    for (int i = 0; i <= g.points(); ++i)
        drift = std::max(drift, std::abs(p.f[i] - pf.f[2 * i]));
    CHECK(drift <= 1e-3);
}

TEST_CASE("extended system: branch structure") {
    RadialGrid g = RadialGrid::standard(4, 384);

    SUBCASE("escaping parameters give a positive decreasing out-of-plane part") {
        const auto p = solve_extended_profile(g, 0.08, 3.0, kW, kWt);
        REQUIRE(p.branch == ProfileBranch::ExtendedEscaping);
        CHECK(check_profile_invariants(p).ok);
        CHECK(p.f[g.points()] == doctest::Approx(1.0));
        CHECK(p.g[g.points()] == doctest::Approx(0.0));
        for (int i = 1; i < g.points(); ++i) {
            CHECK(p.g[i] > 0.0);
            CHECK(sq(p.f[i]) + sq(p.g[i]) < 1.0);
        }
        // even closure at the origin
        CHECK(std::abs(p.g[0] - p.g[1]) <= 5e-3 * p.g[0]);
        // refinement agreement
        const auto pf = solve_extended_profile(g.refined(), 0.08, 3.0, kW, kWt);
        double drift = 0.0;
        for (int i = 0; i <= g.points(); ++i)
            drift = std::max({drift, std::abs(p.f[i] - pf.f[2 * i]),
                              std::abs(p.g[i] - pf.g[2 * i])});
        CHECK(drift <= 1e-3);
    }

    SUBCASE("flat in-plane potential never escapes") {
        const auto p = solve_extended_profile(g, 0.1, 50.0, kWzero, kWt);
        CHECK(p.branch == ProfileBranch::ExtendedNonescaping);
        CHECK(max_abs(p.g) == 0.0);
    }

    SUBCASE("large eps stays in plane") {
        const auto p = solve_extended_profile(g, 1.5, 3.0, kW, kWt);
        CHECK(p.branch == ProfileBranch::ExtendedNonescaping);
    }

    SUBCASE("dimension seven attempts only the in-plane branch") {
        RadialGrid g7 = RadialGrid::standard(7, 384);
        const auto p = solve_extended_profile(g7, 0.05, 10.0, kW, kWt);
        CHECK(p.branch == ProfileBranch::ExtendedNonescaping);
    }
}

TEST_CASE("unit-sphere profile on the constraint manifold") {
    for (int dim : {2, 4}) {
        RadialGrid g(dim, 768, 1.5);
        const auto p = solve_mm_profile(g, 1.0, kWt);
        REQUIRE(p.branch == ProfileBranch::MmEscaping);
        for (int i = 0; i <= g.points(); ++i)
            CHECK(std::abs(sq(p.f[i]) + sq(p.g[i]) - 1.0) <= 1e-10);
        CHECK(p.g[0] > 0.0);
        CHECK(check_profile_invariants(p).ok);
    }
    // the flat map solves the constrained system exactly
    RadialGrid g = RadialGrid::standard(4, 384);
    const auto eq = equator_profile(g, 1.0);
    const auto rep = verify_lagrange_multiplier(eq, 1.0, kWt);
    CHECK(rep.max_residual_f <= 1e-9);
    CHECK(rep.max_residual_g == 0.0);
    for (int i = 1; i < g.points(); ++i)
        CHECK(rep.multiplier[i] ==
              doctest::Approx(3.0 / sq(g.node(i))).epsilon(1e-6));
}

TEST_CASE("reconstructed multiplier closes both constrained equations") {
    RadialGrid g(4, 768, 1.5);
    const auto p = solve_mm_profile(g, 1.0, kWt);
    const auto rep = verify_lagrange_multiplier(p, 1.0, kWt);
    CHECK(rep.max_residual_f <= 1e-5);
    CHECK(rep.max_residual_g <= 1e-5);

    // sensitivity: a perturbed profile must be detected
    auto bad = p;
    for (auto& x : bad.f) x += 0.01;
    const auto brep = verify_lagrange_multiplier(bad, 1.0, kWt);
    CHECK(brep.max_residual_f > 1e-3);
}

TEST_CASE("stiff-limit convergence toward the constrained profile") {
    RadialGrid g = RadialGrid::standard(4, 384);
    const auto rep =
        mm_limit_check(g, {0.08, 0.05, 0.03}, 2.0, PotentialModel::square(), kWt, 0.5);
    REQUIRE(rep.distances.size() == 3);
    CHECK(rep.decreasing);
    CHECK(rep.converged);

    // single eps: the report reproduces the plain profile distance
    const auto one = mm_limit_check(g, {0.05}, 2.0, PotentialModel::square(), kWt, 0.5);
    const auto ext = solve_extended_profile(g, 0.05, 2.0, PotentialModel::square(), kWt);
    const auto mm = solve_mm_profile(g, 2.0, kWt);
    CHECK(one.distances[0] == doctest::Approx(profile_h1_distance(ext, mm)).epsilon(1e-12));

    // outside the escaping region the comparison refuses
    CHECK_THROWS_AS(mm_limit_check(g, {1.5}, 2.0, PotentialModel::square(), kWt, 0.5),
                    PreconditionError);
}

TEST_CASE("radial energy breakdown sums exactly") {
    RadialGrid g = RadialGrid::standard(4, 384);
    const auto p = solve_extended_profile(g, 0.08, 3.0, kW, kWt);
    const auto e = radial_energy(g, p.f, p.g, 0.08, 3.0, kW, kWt);
    CHECK(e.total ==
          doctest::Approx(e.dirichlet + e.w_term + e.wt_term).epsilon(1e-12));
    CHECK(e.dirichlet > 0.0);
    CHECK(e.w_term >= 0.0);
    CHECK(e.wt_term >= 0.0);
}
