#include <doctest.h>

#include <cmath>

#include "vortexlab/common.hpp"
#include "vortexlab/forms.hpp"
#include "vortexlab/symmetrize.hpp"

using namespace vortexlab;

namespace {

ModeField monotone_radial(const RadialGrid& grid, int dim) {
    // nonpositive increasing radial profile: an exact rearrangement fixed point
    const int m = grid.points();
    std::vector<double> s(m + 1);
    for (int i = 0; i <= m; ++i) s[i] = -sq(1.0 - sq(grid.node(i)));
    return radial_mode_field(grid, dim, std::move(s), BoundaryClass::ClampedZero);
}

}  // namespace

TEST_CASE("slice gradient mass is preserved at every cell") {
    Rng rng(1);
    for (int dim : {2, 3, 5, 6}) {
        RadialGrid grid = RadialGrid::standard(dim, 384);
        AngularRule rule = AngularRule::standard(dim, 8);
        for (int t = 0; t < 25; ++t) {
            const auto v = random_mode_field(grid, dim, {0, 1, 2, 3}, rng);
            CHECK(slice_gradient_mismatch(v, rule) <= 1e-8);
        }
    }
}

TEST_CASE("rearranged profile: sign, boundary value, monotone slope") {
    Rng rng(2);
    RadialGrid grid = RadialGrid::standard(4, 384);
    const auto v = random_mode_field(grid, 4, {0, 1, 2}, rng);
    const auto re = symmetrize_gradient(v);
    CHECK(re.values[grid.points()] == 0.0);
    for (double x : re.values) CHECK(x <= 1e-15);
    for (double s : re.midpoint_slope) CHECK(s >= 0.0);
}

TEST_CASE("radial monotone fields are reproduced exactly") {
    RadialGrid grid = RadialGrid::standard(5, 384);
    const auto v = monotone_radial(grid, 5);
    const auto re = symmetrize_gradient(v);
    for (int i = 0; i <= grid.points(); ++i)
        CHECK(re.values[i] == doctest::Approx(v.modes[0].values[i]).epsilon(1e-14));
    const auto dd = check_delta_decrease(v);
    CHECK(std::abs(dd.gap) <= 1e-10 * (std::abs(dd.rhs) + 1.0));
}

TEST_CASE("positive homogeneity") {
    Rng rng(3);
    RadialGrid grid = RadialGrid::standard(4, 384);
    const auto v = random_mode_field(grid, 4, {0, 1, 2}, rng);
    auto doubled = v;
    for (auto& mode : doubled.modes)
        for (auto& x : mode.values) x *= 2.0;
    const auto r1 = symmetrize_gradient(v);
    const auto r2 = symmetrize_gradient(doubled);
    for (int i = 0; i <= grid.points(); ++i)
        CHECK(r2.values[i] == doctest::Approx(2.0 * r1.values[i]).epsilon(1e-12));
}

TEST_CASE("mode slope identity at the midpoint quoted value") {
    // v = r(1-r) on the degree-one mode in dimension five
    const int dim = 5;
    RadialGrid grid = RadialGrid::standard(dim, 384);
    ModeField v;
    v.dim = dim;
    v.grid = grid;
    v.bc = BoundaryClass::CompactSupport;
    Mode mode;
    mode.degree = 1;
    mode.values.assign(grid.points() + 1, 0.0);
    for (int i = 0; i <= grid.points(); ++i)
        mode.values[i] = grid.node(i) * (1.0 - grid.node(i));
    v.modes.push_back(std::move(mode));
    const auto re = symmetrize_gradient(v);
    int cell = 0;
    while (grid.midpoint_radius(cell) < 0.5) ++cell;
    // (v')^2 + lambda_1 v^2 / r^2 = (1-2r)^2 + 4 (1-r)^2;  equals 1 at r = 1/2
    const double rm = grid.midpoint_radius(cell);
    const double expect = std::sqrt(sq(1.0 - 2.0 * rm) + 4.0 * sq(1.0 - rm));
    CHECK(re.midpoint_slope[cell] == doctest::Approx(expect).epsilon(1e-4));
    CHECK(expect == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("gradient-integral decrease for convex integrands") {
    Rng rng(4);
    RadialGrid grid = RadialGrid::standard(4, 384);
    AngularRule rule = AngularRule::standard(4, 8);
    for (int t = 0; t < 25; ++t) {
        const auto v = random_mode_field(grid, 4, {0, 1, 2, 3}, rng);
        const auto quartic = check_lp_decrease(v, rule, 4.0);
        CHECK(quartic.margin() >= -1e-8 * (std::abs(quartic.rhs) + 1.0));
        // affine integrands give equality
        const auto affine = check_convex_decrease(
            v, rule, [](double, double s) { return 1.5 * s + 0.25; });
        CHECK(std::abs(affine.margin()) <= 1e-8 * (std::abs(affine.rhs) + 1.0));
    }
    // radial fields give equality for any integrand
    const auto v = monotone_radial(grid, 4);
    const auto pair = check_lp_decrease(v, rule, 4.0);
    CHECK(std::abs(pair.margin()) <= 1e-10 * (std::abs(pair.rhs) + 1.0));
    // non-convex integrands are refused
    CHECK_THROWS_AS(
        check_convex_decrease(v, rule, [](double, double s) { return std::sqrt(s + 1e-9); }),
        PreconditionError);
}

TEST_CASE("slicewise growth of low powers for boundary-vanishing fields") {
    Rng rng(6);
    RadialGrid grid = RadialGrid::standard(5, 384);
    AngularRule rule = AngularRule::standard(5, 8);
    for (int t = 0; t < 25; ++t) {
        const auto v = random_mode_field(grid, 5, {0, 1, 2}, rng);
        for (double p : {1.0, 1.5, 2.0}) {
            const auto rep = check_lp_increase_low(v, rule, p);
            CHECK(rep.min_margin >= -1e-8 * (v.sup_norm() + 1.0));
        }
    }
    // single degree-one mode: the slice inequality holds with margin
    ModeField v;
    v.dim = 5;
    v.grid = grid;
    v.bc = BoundaryClass::CompactSupport;
    Mode mode;
    mode.degree = 1;
    mode.values.assign(grid.points() + 1, 0.0);
    for (int i = 0; i <= grid.points(); ++i) mode.values[i] = bump(grid.node(i), 0.5, 0.3);
    v.modes.push_back(std::move(mode));
    const auto rep = check_lp_increase_low(v, rule, 2.0);
    CHECK(rep.min_margin >= 0.0);
    // radial monotone: equality slice by slice
    const auto vr = monotone_radial(grid, 5);
    const auto rr = check_lp_increase_low(vr, rule, 1.5);
    for (int i = 0; i <= grid.points(); ++i)
        CHECK(std::abs(rr.lhs[i] - rr.rhs[i]) <= 1e-10 * (rr.rhs[i] + 1.0));
}

TEST_CASE("bi-Laplacian comparison with the mode-wise gap") {
    Rng rng(7);
    SUBCASE("dimension five, all degrees allowed") {
        RadialGrid grid = RadialGrid::standard(5, 768);
        for (int t = 0; t < 25; ++t) {
            const auto v = random_mode_field(grid, 5, {0, 1, 2, 3}, rng);
            const auto dd = check_delta_decrease(v);
            const double scale = std::abs(dd.rhs) + std::abs(dd.bound) + 1.0;
            CHECK(dd.gap >= dd.bound - 1e-8 * scale);
            CHECK(dd.bound >= 0.0);
        }
    }
    SUBCASE("dimension three with the degree-one content removed") {
        RadialGrid grid = RadialGrid::standard(3, 768);
        for (int t = 0; t < 25; ++t) {
            const auto v = random_mode_field(grid, 3, {0, 2, 3, 4}, rng);
            const auto dd = check_delta_decrease(v);
            const double scale = std::abs(dd.rhs) + std::abs(dd.bound) + 1.0;
            CHECK(dd.gap >= dd.bound - 1e-8 * scale);
        }
    }
    SUBCASE("gap coefficients") {
        CHECK(delta_gap_coefficient(5, 1) == doctest::Approx(0.25));
        for (int k = 2; k <= 8; ++k)
            CHECK(delta_gap_coefficient(3, k) >= 20.0 * std::sqrt(5.0) - 44.0);
    }
    SUBCASE("degree-one content in low dimension is refused, and genuinely breaks") {
        RadialGrid grid = RadialGrid::standard(3, 768);
        const auto v = random_mode_field(grid, 3, {1}, rng);
        CHECK_THROWS_AS(check_delta_decrease(v), PreconditionError);
        const auto witness = delta_decrease_violation_search(grid, 1000, 50);
        REQUIRE(witness.found);
        MESSAGE("comparison reversed by seed " << witness.seed << ": rearranged "
                                               << witness.lhs << " > original " << witness.rhs);
        CHECK(witness.lhs > witness.rhs);
    }
}

TEST_CASE("scalar rearrangement") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 384);
    AngularRule rule = AngularRule::standard(dim, 8);

    SUBCASE("first-coordinate slice value") {
        SampledSphereField f;
        f.dim = dim;
        f.grid = grid;
        f.angular = rule;
        f.values.assign(grid.points() + 1, std::vector<double>(rule.order()));
        for (int i = 0; i <= grid.points(); ++i)
            for (int j = 0; j < rule.order(); ++j) f.values[i][j] = rule.nodes()[j];
        const auto gc = symmetrize_scalar(f, 2.0);
        for (int i = 0; i <= grid.points(); ++i)
            CHECK(gc[i] == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("radial nonnegative fields are fixed points") {
        Rng rng(8);
        std::vector<double> vals(grid.points() + 1);
        for (int i = 0; i <= grid.points(); ++i) vals[i] = 1.0 + bump(grid.node(i), 0.5, 0.3);
        const auto v = radial_mode_field(grid, dim, vals, BoundaryClass::RadialGradient, 0.0);
        const auto sf = SampledSphereField::from_modes(v, rule);
        const auto gc = symmetrize_scalar(sf, 2.0);
        for (int i = 0; i <= grid.points(); ++i)
            CHECK(gc[i] == doctest::Approx(vals[i] / std::sqrt(rule.sphere_area()))
                               .epsilon(1e-10));
    }

    SUBCASE("sign invariance and contraction") {
        Rng rng(9);
        const auto& wq = grid.weights(dim - 1);
        for (int t = 0; t < 25; ++t) {
            const auto v1 = random_mode_field(grid, dim, {0, 1, 2}, rng);
            const auto v2 = random_mode_field(grid, dim, {0, 1, 2}, rng);
            auto s1 = SampledSphereField::from_modes(v1, rule);
            auto s2 = SampledSphereField::from_modes(v2, rule);
            auto s1neg = s1;
            for (auto& row : s1neg.values)
                for (auto& x : row) x = -x;
            const auto c1 = symmetrize_scalar(s1, 2.0);
            const auto c1n = symmetrize_scalar(s1neg, 2.0);
            const auto c2 = symmetrize_scalar(s2, 2.0);
            double num = 0.0, den = 0.0;
            for (int i = 0; i <= grid.points(); ++i) {
                CHECK(c1[i] == doctest::Approx(c1n[i]).epsilon(1e-12));
                num += wq[i] * sq(c1[i] - c2[i]) * rule.sphere_area();
                double slice = 0.0;
                for (int j = 0; j < rule.order(); ++j)
                    slice += rule.weights()[j] * sq(s1.values[i][j] - s2.values[i][j]);
                den += wq[i] * slice;
            }
            CHECK(num <= den * (1.0 + 1e-12));
        }
    }

    SUBCASE("gradient-integral decrease, equality only for radial magnitude") {
        Rng rng(10);
        for (int t = 0; t < 20; ++t) {
            const auto v = random_mode_field(grid, dim, {0, 1, 2}, rng);
            const auto sf = SampledSphereField::from_modes(v, rule);
            const auto pair = scalar_gradient_decrease(sf, 2.0);
            CHECK(pair.margin() >= -1e-8 * (std::abs(pair.rhs) + 1.0));
        }
        std::vector<double> vals(grid.points() + 1);
        for (int i = 0; i <= grid.points(); ++i) vals[i] = 1.0 + bump(grid.node(i), 0.5, 0.3);
        const auto v = radial_mode_field(grid, dim, vals, BoundaryClass::RadialGradient, 0.0);
        const auto pair =
            scalar_gradient_decrease(SampledSphereField::from_modes(v, rule), 2.0);
        CHECK(std::abs(pair.margin()) <= 1e-10 * (std::abs(pair.rhs) + 1.0));
    }
}

TEST_CASE("both rearrangements contract pairs") {
    Rng rng(14);
    RadialGrid grid = RadialGrid::standard(4, 192);
    for (int t = 0; t < 50; ++t) {
        const auto v = random_mode_field(grid, 4, {0, 1, 2}, rng);
        const auto h = random_mode_field(grid, 4, {0, 1, 2}, rng);
        const auto rv = symmetrize_gradient(v);
        const auto rh = symmetrize_gradient(h);
        // gradient distance of the rearranged pair vs the original pair,
        // both measured with the midpoint cell rule
        double num = 0.0, den = 0.0;
        for (int c = 0; c < grid.points(); ++c) {
            const double cw =
                std::pow(grid.midpoint_radius(c), 3.0) * grid.cell_width(c);
            num += cw * sq(rv.midpoint_slope[c] - rh.midpoint_slope[c]);
            double diff = 0.0;
            for (std::size_t k = 0; k < v.modes.size(); ++k) {
                const double dv = (v.modes[k].values[c + 1] - v.modes[k].values[c] -
                                   h.modes[k].values[c + 1] + h.modes[k].values[c]) /
                                  grid.cell_width(c);
                const double mv = 0.5 * (v.modes[k].values[c] + v.modes[k].values[c + 1] -
                                         h.modes[k].values[c] - h.modes[k].values[c + 1]);
                diff += sq(dv) + sphere_eigenvalue(4, v.modes[k].degree) * sq(mv) /
                                     sq(grid.midpoint_radius(c));
            }
            den += cw * diff;
        }
        CHECK(num <= den * (1.0 + 1e-12));
    }
}

TEST_CASE("composition stability of both rearrangements") {
    Rng rng(12);
    RadialGrid grid = RadialGrid::standard(4, 384);
    AngularRule rule = AngularRule::standard(4, 8);
    const auto v = random_mode_field(grid, 4, {0, 1, 2}, rng);
    const auto once = rearranged_field(v);
    const auto twice = rearranged_field(once);
    for (int i = 0; i <= grid.points(); ++i)
        CHECK(std::abs(once.modes[0].values[i] - twice.modes[0].values[i]) <= 1e-10);

    const auto sf = SampledSphereField::from_modes(v, rule);
    const auto g1 = symmetrize_scalar(sf, 2.0);
    const auto rf = radial_mode_field(grid, 4, g1, BoundaryClass::CompactSupport, 0.0);
    auto scaled = rf;
    for (auto& x : scaled.modes[0].values) x *= std::sqrt(rule.sphere_area());
    const auto g2 = symmetrize_scalar(SampledSphereField::from_modes(scaled, rule), 2.0);
    for (int i = 0; i <= grid.points(); ++i)
        CHECK(g2[i] == doctest::Approx(g1[i]).epsilon(1e-10));
}

TEST_CASE("mode/sample conversions round trip through the angular rule") {
    Rng rng(13);
    RadialGrid grid = RadialGrid::standard(4, 192);
    AngularRule rule = AngularRule::standard(4, 8);
    const auto v = random_mode_field(grid, 4, {0, 1, 3, 5}, rng);
    const auto samples = SampledSphereField::from_modes(v, rule);
    const auto back = samples.to_modes(BoundaryClass::CompactSupport);
    for (const auto& mode : v.modes) {
        const Mode* found = back.find_degree(mode.degree);
        REQUIRE(found != nullptr);
        for (int i = 0; i <= grid.points(); ++i)
            CHECK(std::abs(found->values[i] - mode.values[i]) <= 1e-10);
    }
}

TEST_CASE("boundary slope of the rearranged field") {
    const int dim = 5;
    RadialGrid grid = RadialGrid::standard(dim, 384);
    std::vector<double> s(grid.points() + 1);
    for (int i = 0; i <= grid.points(); ++i) s[i] = 0.5 * (sq(grid.node(i)) - 1.0);
    for (auto& x : s) x = -x;  // slope -1 at the boundary
    const auto v = radial_mode_field(grid, dim, s, BoundaryClass::RadialGradient, -1.0);
    const auto re = symmetrize_gradient(v);
    CHECK(re.boundary_slope == doctest::Approx(1.0));
}
