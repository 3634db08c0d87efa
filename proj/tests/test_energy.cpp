#include <doctest.h>

#include <cmath>

#include "vortexlab/common.hpp"
#include "vortexlab/energy.hpp"
#include "vortexlab/symmetrize.hpp"

using namespace vortexlab;

namespace {
const PotentialModel kW = PotentialModel::half_square();
const PotentialModel kWzero = PotentialModel::zero(PotentialDomain::Gl);
const PotentialModel kWt = PotentialModel::linear_mm();
const PotentialModel kWtZero = PotentialModel::zero(PotentialDomain::Mm);

ModeField degree_one_bump(const RadialGrid& grid, int dim) {
    ModeField v;
    v.dim = dim;
    v.grid = grid;
    v.bc = BoundaryClass::ClampedZero;
    Mode mode;
    mode.degree = 1;
    mode.values.assign(grid.points() + 1, 0.0);
    for (int i = 0; i <= grid.points(); ++i) mode.values[i] = bump(grid.node(i), 0.5, 0.35);
    v.modes.push_back(std::move(mode));
    return v;
}
}  // namespace

TEST_CASE("identity map energy with no potentials") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 384);
    AngularRule rule = AngularRule::standard(dim, 6);
    ZonalConfig cfg;
    cfg.dim = dim;
    cfg.grid = grid;
    cfg.angular = rule;
    cfg.a_modes.assign(7, std::vector<double>(grid.points() + 1, 0.0));
    cfg.p_modes.assign(7, std::vector<double>(grid.points() + 1, 0.0));
    for (int i = 0; i <= grid.points(); ++i)
        cfg.a_modes[0][i] = cfg.admissible_slope() * grid.node(i);
    const auto e = energy_extended(cfg, 1.0, 1.0, kWzero, kWtZero);
    // half the squared Hessian of |x|^2/2 over the ball: N |B| / 2 = pi^2 here
    CHECK(e.total == doctest::Approx(M_PI * M_PI).epsilon(1e-4));
    CHECK(e.w_term == 0.0);
    CHECK(e.wt_term == 0.0);
}

TEST_CASE("zonal energy of an embedded profile equals the radial energy") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 384);
    AngularRule rule = AngularRule::standard(dim, 6);
    const auto prof = solve_extended_profile(grid, 0.08, 3.0, kW, kWt);
    const auto cfg = embed_profile(prof, rule, 6);
    const auto ez = energy_extended(cfg, 0.08, 3.0, kW, kWt);
    const auto er = radial_energy(grid, prof.f, prof.g, 0.08, 3.0, kW, kWt);
    CHECK(ez.total == doctest::Approx(er.total).epsilon(1e-12));
    CHECK(ez.dirichlet == doctest::Approx(er.dirichlet).epsilon(1e-12));

    // adding a zero perturbation changes nothing
    auto cfg2 = cfg;
    ModeField zero;
    zero.dim = dim;
    zero.grid = grid;
    zero.bc = BoundaryClass::ClampedZero;
    zero.modes.push_back({1, std::vector<double>(grid.points() + 1, 0.0)});
    add_perturbation(cfg2, zero, {}, 1.0);
    CHECK(energy_extended(cfg2, 0.08, 3.0, kW, kWt).total == doctest::Approx(ez.total));
}

TEST_CASE("every branch's radial energy matches its zonal tensor energy") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 192);
    AngularRule rule = AngularRule::standard(dim, 6);
    std::vector<RadialProfile> branches;
    branches.push_back(solve_gl_profile(grid, 0.3, kW));
    branches.push_back(solve_extended_profile(grid, 0.08, 3.0, kW, kWt));
    branches.push_back(solve_extended_profile(grid, 0.8, 3.0, kW, kWt));
    {
        RadialGrid gm(dim, 192, 1.5);
        branches.push_back(solve_mm_profile(gm, 1.0, kWt));
        branches.push_back(equator_profile(gm, 1.0));
    }
    for (const auto& prof : branches) {
        const double eps = prof.eps > 0.0 ? prof.eps : 0.5;
        const double eta = prof.eta > 0.0 ? prof.eta : 1.0;
        const auto cfg = embed_profile(prof, rule, 6);
        const auto ez = energy_extended(cfg, eps, eta, kW, kWt);
        const auto er = radial_energy(prof.grid, prof.f, prof.g, eps, eta, kW, kWt);
        CHECK(std::abs(ez.total - er.total) <= 1e-6 * (std::abs(er.total) + 1.0));
    }
}

TEST_CASE("descent gradient matches finite differences") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 96);
    AngularRule rule = AngularRule::standard(dim, 4);
    const auto prof = solve_extended_profile(grid, 0.15, 2.0, kW, kWt);
    auto cfg = embed_profile(prof, rule, 4);
    Rng rng(17);
    auto v = degree_one_bump(grid, dim);
    std::vector<std::vector<double>> pm(5, std::vector<double>(grid.points() + 1, 0.0));
    for (int i = 0; i <= grid.points(); ++i) pm[2][i] = 0.3 * bump(grid.node(i), 0.5, 0.3);
    add_perturbation(cfg, v, pm, 0.3);
    CHECK(energy_gradient_check(cfg, 0.15, 2.0, kW, kWt, rng, 10) <= 1e-5);
}

TEST_CASE("convexity gap around the two branches") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 384);
    Rng rng(19);
    for (double eta : {3.0, 0.2}) {
        const auto branch = solve_extended_profile(grid, 0.08, eta, kW, kWt);
        SUBCASE((std::string("branch ") + to_string(branch.branch)).c_str()) {
            // zero perturbation: both sides vanish
            ModeField zero;
            zero.dim = dim;
            zero.grid = grid;
            zero.bc = BoundaryClass::ClampedZero;
            zero.modes.push_back({1, std::vector<double>(grid.points() + 1, 0.0)});
            const auto trivial = convexity_gap_check(branch, zero, {}, 0.08, eta, kW, kWt);
            CHECK(std::abs(trivial.lhs) <= 1e-9);
            CHECK(std::abs(trivial.rhs) <= 1e-9);

            for (int t = 0; t < 20; ++t) {
                auto v = random_mode_field(grid, dim, {0, 1, 2}, rng);
                const double amp = rng.uniform(0.05, 0.5);
                for (auto& mode : v.modes)
                    for (auto& x : mode.values) x *= amp;
                std::vector<std::vector<double>> pm(3, std::vector<double>(grid.points() + 1, 0.0));
                for (int l = 0; l < 3; ++l)
                    for (int i = 0; i <= grid.points(); ++i)
                        pm[l][i] = 0.3 * amp * bump(grid.node(i), 0.4 + 0.1 * l, 0.25);
                const auto gap = convexity_gap_check(branch, v, pm, 0.08, eta, kW, kWt);
                const double scale = std::abs(gap.lhs) + std::abs(gap.rhs) + 1.0;
                CHECK(gap.slack() >= -1e-7 * scale);
            }
        }
    }
}

TEST_CASE("perturbing along the out-of-plane profile keeps the gap") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 384);
    const auto branch = solve_extended_profile(grid, 0.08, 3.0, kW, kWt);
    REQUIRE(branch.branch == ProfileBranch::ExtendedEscaping);
    ModeField zero;
    zero.dim = dim;
    zero.grid = grid;
    zero.bc = BoundaryClass::ClampedZero;
    zero.modes.push_back({1, std::vector<double>(grid.points() + 1, 0.0)});
    std::vector<std::vector<double>> pm(1);
    pm[0] = branch.g;
    for (auto& x : pm[0]) x *= 0.2;
    const auto gap = convexity_gap_check(branch, zero, pm, 0.08, 3.0, kW, kWt);
    // the out-of-plane operator annihilates its own profile
    CHECK(std::abs(gap.rhs) <= 1e-3 * (std::abs(gap.lhs) + 1.0));
    CHECK(gap.slack() >= -1e-7 * (std::abs(gap.lhs) + 1.0));
}

TEST_CASE("descent history is non-increasing and radial inits stay radial") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 96);
    AngularRule rule = AngularRule::standard(dim, 4);
    const auto prof = solve_extended_profile(grid, 0.15, 2.0, kW, kWt);
    auto cfg = embed_profile(prof, rule, 4);
    MinimizeOptions opts;
    opts.max_iterations = 50;
    const auto res = minimize_extended(cfg, 0.15, 2.0, kW, kWt, opts);
    for (std::size_t i = 1; i < res.history.size(); ++i)
        CHECK(res.history[i].energy <= res.history[i - 1].energy + 1e-12);
    CHECK(res.nonradial_mass <= 1e-7);
}

TEST_CASE("rearrangement never raises the zonal energy") {
    const int dim = 5;
    RadialGrid grid = RadialGrid::standard(dim, 192);
    AngularRule rule = AngularRule::standard(dim, 6);
    Rng rng(23);
    const auto prof = solve_extended_profile(grid, 0.1, 2.0, kW, kWt);
    for (int t = 0; t < 10; ++t) {
        auto cfg = embed_profile(prof, rule, 6);
        auto v = random_mode_field(grid, dim, {1, 2, 3}, rng);
        std::vector<std::vector<double>> pm(4, std::vector<double>(grid.points() + 1, 0.0));
        for (int l = 1; l < 4; ++l)
            for (int i = 0; i <= grid.points(); ++i)
                pm[l][i] = 0.3 * bump(grid.node(i), 0.35 + 0.12 * l, 0.25);
        add_perturbation(cfg, v, pm, 0.4);
        const auto e = energy_extended(cfg, 0.1, 2.0, kW, kWt);

        // rearranged competitor: radial derivative from the slice gradient
        // mass, nonnegative radial out-of-plane part from the slice square mass
        ZonalConfig checked = cfg;
        for (auto& row : checked.a_modes) std::fill(row.begin(), row.end(), 0.0);
        for (auto& row : checked.p_modes) std::fill(row.begin(), row.end(), 0.0);
        const int m = grid.points();
        for (int i = 0; i <= m; ++i) {
            double grad = 0.0, psq = 0.0;
            const auto u0 = cfg.potential_mode(0);
            for (int k = 0; k <= cfg.max_degree(); ++k) {
                const double uk = cfg.potential_mode(k)[i];
                grad += sq(cfg.a_modes[k][i]);
                if (k >= 1 && i > 0)
                    grad += sphere_eigenvalue(dim, k) * sq(uk) / sq(grid.node(i));
                (void)u0;
            }
            for (std::size_t l = 0; l < cfg.p_modes.size(); ++l) psq += sq(cfg.p_modes[l][i]);
            checked.a_modes[0][i] = std::sqrt(grad);
            checked.p_modes[0][i] = std::sqrt(psq);
        }
        const auto ec = energy_extended(checked, 0.1, 2.0, kW, kWt);
        CHECK(ec.total <= e.total + 1e-7 * (std::abs(e.total) + 1.0));
    }
}

TEST_CASE("unit-sphere minimization: basins and the unstable flat map") {
    const int dim = 4;
    RadialGrid grid = RadialGrid::standard(dim, 144);
    AngularRule rule = AngularRule::standard(dim, 6);
    const auto mm = solve_mm_profile(grid, 1.0, kWt);
    MinimizeOptions opts;
    opts.max_iterations = 2000;
    opts.gradient_tolerance = 1e-8;

    auto up = embed_profile(mm, rule, 6);
    auto down = up;
    for (auto& x : down.p_modes[0]) x = -x;
    const auto rp = minimize_mm(up, 1.0, kWt, {0.15, 0.08, 0.04}, opts);
    const auto rm = minimize_mm(down, 1.0, kWt, {0.15, 0.08, 0.04}, opts);
    CHECK(rp.p_sign == 1);
    CHECK(rm.p_sign == -1);
    CHECK(rp.last.energy == doctest::Approx(rm.last.energy).epsilon(1e-6));
    CHECK(rp.last.nonradial_mass <= 1e-5);

    // flat map with a small positive bias escapes upward; the origin node
    // itself carries a negligible cell weight, so probe the profile peak
    auto eq = embed_profile(equator_profile(grid, 1.0), rule, 6);
    for (int i = 0; i <= grid.points(); ++i)
        eq.p_modes[0][i] += 0.05 * eq.admissible_slope() * (1.0 - sq(grid.node(i)));
    MinimizeOptions deep = opts;
    deep.max_iterations = 20000;
    deep.gradient_tolerance = 1e-10;
    const auto re = minimize_mm(eq, 1.0, kWt, {0.15, 0.08, 0.04}, deep);
    CHECK(re.p_sign == 1);
    CHECK(max_abs(re.last.config.p_modes[0]) > 0.4 * eq.admissible_slope());
}

TEST_CASE("fourth-order constrained ground state") {
    const int dim = 5;
    RadialGrid grid = RadialGrid::standard(dim, 192);
    AngularRule rule = AngularRule::standard(dim, 8);
    ModeField init;
    init.dim = dim;
    init.grid = grid;
    init.bc = BoundaryClass::ClampedZero;
    for (int k : {0, 2}) {
        Mode mode;
        mode.degree = k;
        mode.values.assign(grid.points() + 1, 0.0);
        for (int i = 0; i <= grid.points(); ++i)
            mode.values[i] = (k == 0 ? 1.0 : 0.5) * bump(grid.node(i), 0.5, 0.3);
        init.modes.push_back(std::move(mode));
    }

    SUBCASE("preconditions") {
        CHECK_THROWS_AS(minimize_biharmonic_J(grid, dim, 2.5, 0.0, 1.0, init, {}),
                        PreconditionError);
        CHECK_THROWS_AS(minimize_biharmonic_J(grid, dim, 1.5, 1e9, 1.0, init, {}),
                        PreconditionError);
    }

    SUBCASE("witness and the rescaling chain") {
        const auto res = minimize_biharmonic_J(grid, dim, 1.5, 0.0, 1.0, init, {});
        CHECK(res.converged);
        CHECK(res.nonradial_mass <= 1e-5);
        CHECK(res.sign_definite);
        CHECK(res.monotone);
        CHECK(res.el_residual <= 1e-4);
        CHECK(res.j_value >= 0.0);
        CHECK(res.multiplier > 0.0);
        CHECK(lp_norm(res.minimizer, rule, 1.5) == doctest::Approx(1.0).epsilon(1e-10));

        // rearranged competitor, rescaled onto the constraint set, cannot win
        const auto vc = rearranged_field(res.minimizer);
        const double mu = 1.0 / lp_norm(vc, rule, 1.5);
        CHECK(mu <= 1.0 + 1e-9);
        auto scaled = vc;
        for (auto& x : scaled.modes[0].values) x *= mu;
        CHECK(biharmonic_j_value(scaled, 0.0) <= res.j_value * (1.0 + 1e-9));
    }

    SUBCASE("spectral shift below the first eigenvalue is accepted") {
        const auto res = minimize_biharmonic_J(grid, dim, 1.5, 50.0, 1.0, init, {});
        CHECK(res.converged);
        CHECK(res.j_value >= 0.0);
        CHECK(res.sign_definite);
    }
}
