#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "vortexlab/io.hpp"
#include "vortexlab/modefield.hpp"
#include "vortexlab/rng.hpp"

using namespace vortexlab;

namespace {

int run(const std::string& args) {
    const std::string cmd = "./vortexlab " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("field JSON round trip is bit identical") {
    RadialGrid grid = RadialGrid::standard(4, 96);
    Rng rng(404);
    const auto v = random_mode_field(grid, 4, {0, 1, 3}, rng);
    const auto text = mode_field_to_json(v);
    const auto back = mode_field_from_json(text);
    REQUIRE(back.modes.size() == v.modes.size());
    for (std::size_t k = 0; k < v.modes.size(); ++k) {
        CHECK(back.modes[k].degree == v.modes[k].degree);
        for (std::size_t i = 0; i < v.modes[k].values.size(); ++i)
            CHECK(back.modes[k].values[i] == v.modes[k].values[i]);  // exact
    }
    CHECK(mode_field_to_json(back) == text);
}

TEST_CASE("csv quoting") {
    CsvWriter csv("cli_test_quote.csv");
    csv.header({"plain", "with,comma", "with\"quote"});
    csv.row({"1.5", "a,b", "say \"hi\""});
    csv.close();
    const auto text = read_text_file("cli_test_quote.csv");
    CHECK(text == "plain,\"with,comma\",\"with\"\"quote\"\n1.5,\"a,b\",\"say \"\"hi\"\"\"\n");
    std::filesystem::remove("cli_test_quote.csv");
}

TEST_CASE("config digest is deterministic and content sensitive") {
    CHECK(config_digest("abc") == config_digest("abc"));
    CHECK(config_digest("abc") != config_digest("abd"));
    CHECK(digest_string(config_digest("abc")).size() == 16);
}

TEST_CASE("cli subcommands: formats, exit codes, reproducibility") {
    REQUIRE(std::filesystem::exists("./vortexlab"));

    SUBCASE("profile emits the documented columns") {
        CHECK(run("profile --model gl --N 3 --eps 0.5 --grid-points 96 --out cli_prof.csv") == 0);
        const auto text = read_text_file("cli_prof.csv");
        CHECK(text.rfind("r,f,g,residual_f,residual_g\n", 0) == 0);
        std::filesystem::remove("cli_prof.csv");
    }

    SUBCASE("phase lattice header and reproducibility") {
        const std::string args =
            "phase --N 4 --grid-points 96 --eps-range 0.08:0.4:3 --eta-range 0.3:3:3 "
            "--seed 7 --out cli_phase.csv --curve-out cli_curve.csv";
        CHECK(run(args) == 0);
        const auto first = read_text_file("cli_phase.csv");
        CHECK(first.rfind("eps,eta,ell,tag\n", 0) == 0);
        const auto curve = read_text_file("cli_curve.csv");
        CHECK(curve.rfind("eps,eta0\n", 0) == 0);
        CHECK(run(args) == 0);
        CHECK(read_text_file("cli_phase.csv") == first);  // byte identical rerun
        std::filesystem::remove("cli_phase.csv");
        std::filesystem::remove("cli_curve.csv");
    }

    SUBCASE("invalid dimension is a configuration error") {
        CHECK(run("profile --model gl --N 1 --eps 0.5") == 2);
    }

    SUBCASE("unknown model is a configuration error") {
        CHECK(run("profile --model nonsense --eps 0.5") == 2);
    }

    SUBCASE("rejected potential is a configuration error") {
        CHECK(run("profile --model gl --N 3 --eps 0.5 --potential-w linear") == 2);
    }

    SUBCASE("options can come from a config file") {
        write_text_file("cli_cfg.ini", "[profile]\ngrid-points=96\n");
        CHECK(run("--config cli_cfg.ini profile --model gl --N 3 --eps 0.5 "
                  "--out cli_cfg_prof.csv") == 0);
        const auto text = read_text_file("cli_cfg_prof.csv");
        // 97 node rows + header + digest footer
        CHECK(std::count(text.begin(), text.end(), '\n') == 99);
        std::filesystem::remove("cli_cfg.ini");
        std::filesystem::remove("cli_cfg_prof.csv");
    }

    SUBCASE("config schema generation") {
        CHECK(run("--write-config-schema cli_schema.ini report") == 0);
        const auto text = read_text_file("cli_schema.ini");
        CHECK(text.find("grid-points") != std::string::npos);
        CHECK(text.find("potential") != std::string::npos);
        std::filesystem::remove("cli_schema.ini");
    }
}
