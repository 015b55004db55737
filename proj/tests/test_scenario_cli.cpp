#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "kgflow/commands.hpp"
#include "kgflow/errors.hpp"
#include "kgflow/report.hpp"
#include "kgflow/scenario.hpp"
#include "kgflow/verify.hpp"

using namespace kgflow;

namespace {

const char* kMinimal = R"(
[box]
L = 6.283185307179586
T = 12

[particles]
mass = 1

[terms]
term = (1, 0) : (0, 0, 0)
)";

const char* kTwoParticle = R"(
[box]
L = 6.283185307179586
T = 60
origin = (0, 0, 0, 0)

[particles]
mass = 1
mass = 1

[terms]
term = (0.94868329805051377, 0) : (0, 0, 0) (1, 0, 0)
term = (0.31622776601683794, 0) : (1, 0, 0) (0, 0, 0)

[run]
s_max = 0.001
ds = 1e-05
seed = 9
samples = 500
burn_in = 500
thinning = 40
proposal_scale = 0.1
initial = (1, 1.5, 0.7, 0.2) (1.3, 4, 0.1, 5)
)";

}  // namespace

TEST_CASE("scenario parsing") {
    SUBCASE("minimal scenario") {
        const Scenario sc = parse_scenario_text(kMinimal);
        CHECK(sc.masses.size() == 1);
        CHECK(sc.terms.size() == 1);
        CHECK(sc.box.T == 12.0);
        const auto wf = sc.wave_function();
        CHECK(wf.particle_count() == 1);
        CHECK(wf.kg_norm() == doctest::Approx(1.0));
    }
    SUBCASE("full two-particle scenario") {
        const Scenario sc = parse_scenario_text(kTwoParticle);
        CHECK(sc.masses.size() == 2);
        CHECK(sc.sampler.seed == 9);
        CHECK(sc.sampler.thinning == 40);
        CHECK(sc.initial_configurations.size() == 1);
        CHECK(sc.initial_configurations[0].size() == 2);
        CHECK(sc.s_max == 0.001);
    }
    SUBCASE("term arity mismatch names the term and the line") {
        const std::string bad = std::string(kMinimal) + "term = (1, 0) : (0, 0, 0) (1, 0, 0)\n";
        try {
            parse_scenario_text(bad);
            FAIL("expected scenario_error");
        } catch (const scenario_error& e) {
            CHECK(e.line() > 0);
            CHECK(std::string(e.what()).find("momentum triples") != std::string::npos);
        }
    }
    SUBCASE("negative mass is rejected with a located message") {
        try {
            parse_scenario_text("[box]\nL = 1\nT = 1\n[particles]\nmass = -2\n");
            FAIL("expected scenario_error");
        } catch (const scenario_error& e) {
            CHECK(e.line() == 5);
        }
    }
    SUBCASE("all-zero coefficients are rejected") {
        CHECK_THROWS_AS(
            parse_scenario_text("[box]\nL = 1\nT = 1\n[particles]\nmass = 1\n[terms]\nterm "
                                "= (0, 0) : (0, 0, 0)\n"),
            scenario_error);
    }
    SUBCASE("unknown keys are located") {
        try {
            parse_scenario_text("[box]\nL = 1\nT = 1\nbogus = 3\n");
            FAIL("expected scenario_error");
        } catch (const scenario_error& e) {
            CHECK(e.line() == 4);
        }
    }
    SUBCASE("round trip preserves every value") {
        const Scenario sc = parse_scenario_text(kTwoParticle);
        const Scenario rt = parse_scenario_text(serialize_scenario(sc));
        CHECK(rt.box.L == sc.box.L);
        CHECK(rt.box.T == sc.box.T);
        CHECK(rt.masses == sc.masses);
        REQUIRE(rt.terms.size() == sc.terms.size());
        for (std::size_t i = 0; i < sc.terms.size(); ++i) {
            CHECK(rt.terms[i].first == sc.terms[i].first);
            CHECK(rt.terms[i].second == sc.terms[i].second);
        }
        CHECK(rt.s_max == sc.s_max);
        CHECK(rt.ds == sc.ds);
        CHECK(rt.sampler.seed == sc.sampler.seed);
        CHECK(rt.sampler.n_samples == sc.sampler.n_samples);
        CHECK(rt.sampler.proposal_scale == sc.sampler.proposal_scale);
        REQUIRE(rt.initial_configurations.size() == 1);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t mu = 0; mu < 4; ++mu)
                CHECK(rt.initial_configurations[0][a][mu] ==
                      sc.initial_configurations[0][a][mu]);
        // Serialization itself is stable.
        CHECK(serialize_scenario(rt) == serialize_scenario(sc));
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_scenario("/nonexistent/path.scn"), scenario_error);
    }
}

TEST_CASE("report formatting") {
    SUBCASE("17 significant digits round-trip") {
        const double v = 0.1 + 0.2;
        CHECK(std::stod(format_g17(v)) == v);
        CHECK(format_g17(1.0) == "1");
    }
    SUBCASE("check records and overall verdict") {
        std::ostringstream out;
        write_check_records(out, {make_check("alpha", 1e-9, 1e-6), make_check("beta", 2.0, 1.0)});
        const std::string text = out.str();
        CHECK(text.find("check = alpha") != std::string::npos);
        CHECK(text.find("pass = true") != std::string::npos);
        CHECK(text.find("pass = false") != std::string::npos);
        CHECK(text.find("overall = fail") != std::string::npos);
    }
}

TEST_CASE("verification suite on scenario files") {
    namespace fs = std::filesystem;
    const auto write_tmp = [](const char* text) {
        const fs::path p = fs::temp_directory_path() / "kgflow_test_scenario.scn";
        std::ofstream(p) << text;
        return p.string();
    };

    SUBCASE("deterministic checks pass on the entangled scenario") {
        const Scenario sc = parse_scenario_text(kTwoParticle);
        const auto records =
            run_verification(sc, ToleranceProfile::defaults(), 5, false, Exec::Parallel);
        REQUIRE(!records.empty());
        for (const auto& r : records) {
            INFO(r.name, " value=", r.value, " tolerance=", r.tolerance);
            CHECK(r.pass);
        }
    }
    SUBCASE("norm command writes a deterministic report") {
        CommandOptions opt;
        opt.scenario_path = write_tmp(kMinimal);
        opt.out_dir = (fs::temp_directory_path() / "kgflow_norm_out").string();
        std::ostringstream console;
        CHECK(run_norm(opt, console) == 0);
        std::ifstream in(fs::path(opt.out_dir) / "norm.txt");
        std::stringstream first;
        first << in.rdbuf();
        CHECK(first.str().find("kg_norm_raw = 1") != std::string::npos);
        CHECK(first.str().find("overall = pass") != std::string::npos);

        std::ostringstream console2;
        CHECK(run_norm(opt, console2) == 0);
        std::ifstream in2(fs::path(opt.out_dir) / "norm.txt");
        std::stringstream second;
        second << in2.rdbuf();
        CHECK(first.str() == second.str());
    }
    SUBCASE("trajectories command with zero span emits only initial points") {
        CommandOptions opt;
        opt.scenario_path = write_tmp(kTwoParticle);
        opt.out_dir = (fs::temp_directory_path() / "kgflow_traj_out").string();
        opt.s_max = 0.0;
        std::ostringstream console;
        CHECK(run_trajectories(opt, console) == 0);
        std::ifstream in(fs::path(opt.out_dir) / "trajectories_nonlocal.tsv");
        std::string line;
        std::size_t rows = 0;
        while (std::getline(in, line))
            if (!line.empty() && line[0] != '#' && line.find('=') == std::string::npos)
                ++rows;
        CHECK(rows == 2);  // one initial sample per particle
    }
}
