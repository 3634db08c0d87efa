#include <doctest.h>

#include <cmath>

#include "vortexlab/common.hpp"
#include "vortexlab/potentials.hpp"

using namespace vortexlab;

TEST_CASE("builtin potentials match their quoted slopes") {
    const auto w = PotentialModel::half_square();
    CHECK(w.value(1.0) == doctest::Approx(0.5));
    CHECK(w.slope_at_one() == doctest::Approx(1.0));
    CHECK(w.value(0.0) == 0.0);

    const auto zero = PotentialModel::zero(PotentialDomain::Gl);
    CHECK(zero.slope_at_one() == 0.0);
    CHECK(zero.value(-3.0) == 0.0);

    const auto wt = PotentialModel::linear_mm();
    CHECK(wt.slope_at_zero() == doctest::Approx(1.0));
    CHECK(wt.value(2.0) == doctest::Approx(2.0));

    const auto sqp = PotentialModel::square();
    CHECK(sqp.slope_at_one() == doctest::Approx(2.0));
}

TEST_CASE("numerical derivative of value matches the provided derivative") {
    const auto models = {PotentialModel::half_square(), PotentialModel::square(),
                         PotentialModel::make(PotentialKind::Polynomial, PotentialDomain::Gl,
                                              {0.0, 0.0, 0.25, 0.0, 0.05})};
    const double h = 1e-5;
    for (const auto& m : models) {
        for (int i = 0; i < 20; ++i) {
            const double t = -2.0 + 2.9 * i / 19.0;
            const double fd = (m.value(t + h) - m.value(t - h)) / (2.0 * h);
            CHECK(std::abs(fd - m.deriv(t)) <= 1e-8 * (1.0 + std::abs(fd)));
        }
    }
    const auto wt = PotentialModel::linear_mm();
    for (int i = 0; i < 20; ++i) {
        const double t = 0.05 + 3.0 * i / 19.0;
        const double fd = (wt.value(t + h) - wt.value(t - h)) / (2.0 * h);
        CHECK(std::abs(fd - wt.deriv(t)) <= 1e-8 * (1.0 + std::abs(fd)));
    }
}

TEST_CASE("invalid potentials are rejected with a located report") {
    // a linear potential on the two-sided domain has nonzero slope at the minimum
    CHECK_THROWS_AS(PotentialModel::make(PotentialKind::Linear, PotentialDomain::Gl),
                    PotentialError);
    // nonnegative but locally concave cubic-quartic mix
    try {
        PotentialModel::make(PotentialKind::Polynomial, PotentialDomain::Mm,
                             {0.0, 0.0, 1.0, -1.0, 0.3});
        FAIL("expected rejection");
    } catch (const PotentialError& e) {
        CHECK(e.report.reason.find("convexity") != std::string::npos);
        CHECK(std::isfinite(e.report.location));
    }
    // negative values are caught by the sign sweep
    CHECK_THROWS_AS(PotentialModel::make(PotentialKind::Polynomial, PotentialDomain::Gl,
                                         {0.0, 0.0, 1.0, 0.0, -2.0}),
                    PotentialError);
    // nonzero value at the origin
    CHECK_THROWS_AS(PotentialModel::make(PotentialKind::Polynomial, PotentialDomain::Mm,
                                         {1.0, 1.0}),
                    PotentialError);
}

TEST_CASE("arguments outside the declared domain raise") {
    const auto w = PotentialModel::half_square();
    CHECK_THROWS_AS(w.value(1.5), PreconditionError);
    const auto wt = PotentialModel::linear_mm();
    CHECK_THROWS_AS(wt.deriv(-0.5), PreconditionError);
    CHECK_NOTHROW(w.value(-100.0));
    CHECK_NOTHROW(wt.value(100.0));
}
