// Acceptance battery: every criterion prints one pass/fail line and is
// asserted individually. The final case repeats the whole battery with the
// same seed and requires a byte-identical summary.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <thread>

#include "vortexlab/report.hpp"

using namespace vortexlab;

namespace {

constexpr std::uint64_t kSeed = 20260808u;

int worker_count() {
    if (const char* env = std::getenv("VORTEXLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

const AcceptanceSummary& summary() {
    static const AcceptanceSummary s = run_acceptance(kSeed, worker_count());
    static bool printed = false;
    if (!printed) {
        printed = true;
        for (const auto& r : s.results) std::printf("%s\n", s.one_line(r.id).c_str());
        std::fflush(stdout);
    }
    return s;
}

bool criterion(int id) {
    for (const auto& r : summary().results)
        if (r.id == id) return r.pass;
    return false;
}

}  // namespace

TEST_CASE("criterion 1: identity-profile oracle") { CHECK(criterion(1)); }
TEST_CASE("criterion 2: ball eigenvalue oracle") { CHECK(criterion(2)); }
TEST_CASE("criterion 3: mode-split lower bound") { CHECK(criterion(3)); }
TEST_CASE("criterion 4: curvature-over-gradient constants") { CHECK(criterion(4)); }
TEST_CASE("criterion 5: negativity construction") { CHECK(criterion(5)); }
TEST_CASE("criterion 6: phase diagram consistency") { CHECK(criterion(6)); }
TEST_CASE("criterion 7: out-of-plane zero mode") { CHECK(criterion(7)); }
TEST_CASE("criterion 8: rearrangement suite") { CHECK(criterion(8)); }
TEST_CASE("criterion 9: energy convexity gap") { CHECK(criterion(9)); }
TEST_CASE("criterion 10: radial symmetry of minimizers") { CHECK(criterion(10)); }
TEST_CASE("criterion 11: fourth-order ground state") { CHECK(criterion(11)); }

TEST_CASE("criterion 12: reproducible summary") {
    const auto& first = summary();
    const auto second = run_acceptance(kSeed, worker_count());
    const bool identical = first.to_json() == second.to_json();
    std::printf("criterion 12 [reproducibility]: %s (two runs, seed %llu)\n",
                identical ? "PASS" : "FAIL", static_cast<unsigned long long>(kSeed));
    std::fflush(stdout);
    CHECK(identical);
    CHECK(first.all_pass);
}
