#include <doctest.h>

#include <fstream>
#include <sstream>

#include "nicadil/scenario.hpp"
#include "nicadil/version.hpp"

using namespace nicadil;

namespace {

Json parse(const char* text) { return Json::parse(text); }

const char* kScalarScenario = R"({
  "seed": 7,
  "factors": [{"kind": "cyclic", "generators": ["1"], "label": "time"}],
  "representation": {"mode": "direct", "generators": [[[[0.5]]]]},
  "tasks": [
    {"type": "kernel_check", "points": [[[0]], [[1]]]},
    {"type": "dilate", "depth": 3},
    {"type": "verify", "check": "isometry", "s": [[1]], "depth": 3},
    {"type": "verify", "check": "regularity", "g": [[-1]], "depth": 3},
    {"type": "verify", "check": "uniqueness", "depth": 2, "depth_b": 3}
  ]
})";

} // namespace

TEST_CASE("scalar scenario passes and reports the kernel floor") {
    const auto result = run_scenario_json(parse(kScalarScenario));
    CHECK(result.exit_code == 0);
    CHECK(result.report.at("verdict") == "pass");
    const auto& tasks = result.report.at("tasks");
    REQUIRE(tasks.size() == 5);
    CHECK(tasks[0].at("name") == "kernel_check");
    CHECK(tasks[0].at("min_eigenvalue").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tasks[1].at("rank").get<int>() == 4);
    for (const auto& task : tasks) CHECK(task.at("verdict") == "pass");
}

TEST_CASE("empty task list yields a passing empty report") {
    const auto result = run_scenario_json(parse(R"({
      "factors": [{"kind": "cyclic", "generators": ["1"]}],
      "tasks": []
    })"));
    CHECK(result.exit_code == 0);
    CHECK(result.report.at("tasks").empty());
    CHECK(result.report.at("verdict") == "pass");
}

TEST_CASE("norm violations surface as computation errors with exit 3") {
    const auto result = run_scenario_json(parse(R"({
      "factors": [{"kind": "cyclic", "generators": ["1"]}],
      "representation": {"mode": "direct", "generators": [[[[1.2]]]]},
      "tasks": [{"type": "dilate", "depth": 2}]
    })"));
    CHECK(result.exit_code == 3);
    CHECK(result.report.at("setup_error").at("code") == "NormExceeded");
    CHECK(result.report.at("verdict") == "error");
}

TEST_CASE("task-level computation errors are recorded and exit 3") {
    const auto result = run_scenario_json(parse(R"({
      "factors": [{"kind": "cyclic", "generators": ["1"]}],
      "representation": {"mode": "direct", "generators": [[[[0.5]]]]},
      "tasks": [
        {"type": "kernel_check", "points": [[[-1]]]},
        {"type": "kernel_check", "points": [[[0]], [[1]]]}
      ]
    })"));
    CHECK(result.exit_code == 3);
    const auto& tasks = result.report.at("tasks");
    CHECK(tasks[0].at("verdict") == "error");
    CHECK(tasks[0].at("error").at("code") == "NotInMonoid");
    // later tasks still run
    CHECK(tasks[1].at("verdict") == "pass");
}

TEST_CASE("schema violations exit with code 2") {
    for (const char* bad : {
             R"({"tasks": []})",                                        // no factors
             R"({"factors": [], "tasks": []})",                         // empty factors
             R"({"factors": [{"kind": "odd", "generators": ["1"]}], "tasks": []})",
             R"({"factors": [{"kind": "cyclic", "generators": ["1"]}]})",  // no tasks
             R"({"factors": [{"kind": "cyclic", "generators": ["1"]}],
                 "tasks": [{"type": "unknown_task"}]})",
             R"({"factors": [{"kind": "cyclic", "generators": ["1"]}],
                 "tasks": [{"type": "gauge", "polynomial": [], "characters": 2}]})",
             R"({"factors": [{"kind": "cyclic", "generators": ["1"]}],
                 "seed": "not-a-number", "tasks": []})",
             R"({"factors": [{"kind": "cyclic", "generators": ["1"]}],
                 "representation": {"mode": "direct", "generators": [[[[0.5]]]]},
                 "tasks": [{"type": "dilate", "tolerance": "tight"}]})",
         }) {
        const auto result = run_scenario_json(parse(bad));
        CHECK(result.exit_code == 2);
        CHECK(result.report.contains("schema_error"));
    }
}

TEST_CASE("verdict failures exit with code 1") {
    // The Jordan pair is commuting but not Nica-covariant; its kernel on the
    // unit square has a negative eigenvalue, so the verdict fails.
    const auto result = run_scenario_json(parse(R"({
      "factors": [{"kind": "cyclic", "generators": ["1"]},
                   {"kind": "cyclic", "generators": ["1"]}],
      "representation": {"mode": "direct",
        "generators": [[[[0, 1], [0, 0]]], [[[0, 1], [0, 0]]]]},
      "tasks": [{"type": "kernel_check",
                 "points": [[[0],[0]], [[1],[0]], [[0],[1]], [[1],[1]]]}]
    })"));
    CHECK(result.exit_code == 1);
    CHECK(result.report.at("tasks")[0].at("verdict") == "fail");
    CHECK(result.report.at("tasks")[0].at("min_eigenvalue").get<double>() ==
          doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("reports are deterministic given the seed, also under --parallel") {
    Json scenario = parse(kScalarScenario);
    scenario["tasks"].push_back(
        parse(R"({"type": "schur_check", "m": 3, "block_dim": 2, "trials": 5})"));

    const auto a = run_scenario_json(scenario);
    const auto b = run_scenario_json(scenario);
    CHECK(report_to_string(a.report, true) == report_to_string(b.report, true));

    RunFlags parallel;
    parallel.parallel = true;
    const auto c = run_scenario_json(scenario, parallel);
    CHECK(report_to_string(a.report, true) == report_to_string(c.report, true));
}

TEST_CASE("flag overrides take precedence over scenario values") {
    RunFlags flags;
    flags.seed = 99;
    flags.depth = 4;
    const auto result = run_scenario_json(parse(kScalarScenario), flags);
    CHECK(result.report.at("environment").at("seed").get<std::uint64_t>() == 99);
    CHECK(result.report.at("environment").at("depth").get<int>() == 4);
}

TEST_CASE("embedded scenario schema matches the versioned file") {
    std::ifstream in(std::string(NICADIL_SOURCE_DIR) + "/schemas/scenario.schema.json");
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(scenario_schema_text() == buffer.str());

    std::ifstream rin(std::string(NICADIL_SOURCE_DIR) + "/schemas/report.schema.json");
    REQUIRE(rin.good());
    std::stringstream rbuffer;
    rbuffer << rin.rdbuf();
    CHECK(report_schema_text() == rbuffer.str());
}

TEST_CASE("scenario file loading reports missing files as schema errors") {
    const auto result = run_scenario_file("/nonexistent/scenario.json");
    CHECK(result.exit_code == 2);
}

TEST_CASE("covariant pair scenario with dilate, induced, norms and gauge") {
    const char* text = R"({
      "seed": 11,
      "factors": [{"kind": "cyclic", "generators": ["1"]}],
      "covariant_pair": {
        "system": {"dim": 2, "algebra": "full",
                   "action": [[[[0, 1], [1, 0]]]]},
        "sigma": {"multiplicity": 1},
        "rep": {"mode": "direct", "generators": [[[[0, 0.5], [0.5, 0]]]]}
      },
      "tasks": [
        {"type": "dilate", "depth": 2},
        {"type": "induced", "depth": 3},
        {"type": "norm_estimate",
         "polynomial": [{"s": [[1]], "coeff": [[1, 0], [0, 1]]}],
         "samples": 15, "multiplicity_cap": 2, "depth": 2},
        {"type": "gauge",
         "polynomial": [{"s": [[0]], "coeff": [[1, 0], [0, -1]]},
                         {"s": [[1]], "coeff": [[0, 1], [1, 0]]}],
         "characters": 5}
      ]
    })";
    // T = (u^*/2) for u the swap: the standing covariant example.
    const auto result = run_scenario_json(parse(text));
    INFO(result.report.dump(2));
    CHECK(result.exit_code == 0);
    const auto& tasks = result.report.at("tasks");
    CHECK(tasks[0].at("covariance_defect").get<double>() <= 1e-8);
    CHECK(tasks[1].at("interior_nica_defect").get<double>() <= 1e-10);
    CHECK(tasks[2].at("min_gap").get<double>() >= -1e-8);
    CHECK(tasks[3].at("max_identity_defect").get<double>() <= 1e-10);

    const auto setup = result.report.at("setup");
    CHECK(setup.at("pair_validation").at("passed").get<bool>());
}
