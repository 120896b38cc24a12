#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "cli/commands.hpp"
#include "qaffine/error.hpp"

using namespace qaffine;
using namespace qaffine::cli;
using nlohmann::json;

namespace {

RunConfig config(const std::string& command) {
    RunConfig c;
    c.command = command;
    return c;
}

json run_json(const RunConfig& c) {
    const Artifact a = run(c);
    EXPECT_EQ(a.exit_code, kOk) << a.text;
    return json::parse(a.text);
}

std::string temp_file(const std::string& name, const std::string& contents) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << contents;
    return path;
}

}  // namespace

TEST(RunConfig, RoundTripsThroughJson) {
    RunConfig c = config("mimic");
    c.state = "qdice-sigma";
    c.bloch = std::array<double, 3>{0.1, -0.2, 0.3};
    c.theta = 1234.5;
    c.epsilon = 0.125;
    c.trials = 777;
    c.seed = 99;
    c.format = "csv";
    c.timing = true;
    EXPECT_EQ(config_from_json(json::parse(to_json(c).dump())), c);
    EXPECT_EQ(config_from_json(to_json(RunConfig{})), RunConfig{});
    EXPECT_THROW(config_from_json(json{{"trials", "many"}}), ContractError);
}

TEST(Cli, SeparateNamedStates) {
    auto c = config("separate");
    const json singlet = run_json(c);
    EXPECT_NEAR(singlet["result"]["a"].get<double>(), 6.0, 1e-12);
    EXPECT_EQ(singlet["result"]["n_terms"], 12);
    EXPECT_LE(singlet["result"]["checks"]["reconstruction_error"].get<double>(), 1e-10);
    EXPECT_EQ(singlet["seed"], c.seed);
    EXPECT_EQ(singlet["tool"], "qaffine");

    c.state = "maximally-mixed";
    c.qubits = 2;
    EXPECT_DOUBLE_EQ(run_json(c)["result"]["a"].get<double>(), 1.0);

    // qdice sigma is separable, but the generic construction charges the identity
    c.state = "qdice-sigma";
    const json sigma = run_json(c);
    EXPECT_NEAR(sigma["result"]["a"].get<double>(), 2.0, 1e-12);
    EXPECT_GE(sigma["result"]["checks"]["min_weight"].get<double>(), 0.0);
}

TEST(Cli, SeparateMatrixFileAndBloch) {
    const std::string path = temp_file("product.json", "[[[1,0],[0,0]],[[0,0],[0,0]]]");
    auto c = config("separate");
    c.matrix_file = path;
    EXPECT_DOUBLE_EQ(run_json(c)["result"]["a"].get<double>(), 1.0);

    auto b = config("separate");
    b.bloch = std::array<double, 3>{0.0, 0.0, 1.0};
    EXPECT_EQ(run_json(b)["result"]["n_terms"], 1);
}

TEST(Cli, ValidateReports) {
    const json ok = run_json(config("validate"));
    EXPECT_TRUE(ok["result"]["hermitian"].get<bool>());
    EXPECT_TRUE(ok["result"]["unit_trace"].get<bool>());
    EXPECT_TRUE(ok["result"]["positive"].get<bool>());

    // diag(1.5, -0.5): Hermitian, unit trace, not positive
    auto c = config("validate");
    c.matrix_file = temp_file("negative.json", "[[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]");
    const json bad = run_json(c);
    EXPECT_FALSE(bad["result"]["positive"].get<bool>());
    EXPECT_FALSE(bad["result"]["valid"].get<bool>());
}

TEST(Cli, Pseudopure) {
    auto c = config("pseudopure");
    c.mix = 40.0;
    const json r = run_json(c);
    EXPECT_TRUE(r["result"]["pseudo_pure"].get<bool>());
    EXPECT_NEAR(r["result"]["a"].get<double>(), 40.0, 1e-8);
    c.state = "maximally-mixed";
    EXPECT_FALSE(run_json(c)["result"]["pseudo_pure"].get<bool>());
}

TEST(Cli, Chsh) {
    auto c = config("chsh");
    c.pipeline = "a3";
    EXPECT_NEAR(run_json(c)["result"]["chsh"]["S"].get<double>(), 2 * std::sqrt(2.0), 1e-9);
    c.pipeline = "none";
    EXPECT_NEAR(run_json(c)["result"]["chsh"]["S"].get<double>(), 2 * std::sqrt(2.0) / 3, 1e-12);
    c.source = "singlet";
    EXPECT_NEAR(run_json(c)["result"]["chsh"]["S"].get<double>(), 2 * std::sqrt(2.0), 1e-12);
}

TEST(Cli, CurveCsv) {
    auto c = config("curve");
    c.format = "csv";
    const Artifact a = run(c);
    ASSERT_EQ(a.exit_code, kOk) << a.text;
    std::istringstream in(a.text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("# {", 0), 0U);
    std::getline(in, line);
    EXPECT_EQ(line, "theta,E,source");
    int rows = 0;
    while (std::getline(in, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        const double theta = std::stod(line.substr(0, first));
        const double e = std::stod(line.substr(first + 1, second - first - 1));
        EXPECT_NEAR(e, -std::cos(theta) / 3, 1e-10);
        EXPECT_EQ(line.substr(second + 1), "classical-raw");
        ++rows;
    }
    EXPECT_EQ(rows, 64);
}

TEST(Cli, MimicThetaZeroLeavesRawTable) {
    auto c = config("mimic");
    c.trials = 20000;
    c.theta = 0.0;
    const json r = run_json(c);
    EXPECT_EQ(r["result"]["zz"]["raw"], r["result"]["zz"]["distorted"]);
    EXPECT_EQ(r["result"]["chsh"]["raw"]["S"], r["result"]["chsh"]["distorted"]["S"]);
}

TEST(Cli, DeterministicArtifacts) {
    for (const char* command : {"mimic", "chsh", "curve", "separate"}) {
        auto c = config(command);
        c.trials = 30000;
        c.mode = "sampled";
        c.pipeline = "a3";
        c.points = 8;
        c.seed = 5;
        const Artifact first = run(c);
        ASSERT_EQ(first.exit_code, kOk) << first.text;
        EXPECT_EQ(first.text, run(c).text) << command;
        c.seed = 6;
        if (std::string(command) != "separate") {
            EXPECT_NE(first.text, run(c).text) << command;
        }
    }
}

TEST(Cli, TimingOnlyOnRequest) {
    auto c = config("separate");
    EXPECT_FALSE(run_json(c).contains("wall_clock_seconds"));
    c.timing = true;
    EXPECT_TRUE(run_json(c).contains("wall_clock_seconds"));
}

TEST(Cli, ExitCodes) {
    auto bad_state = config("separate");
    bad_state.state = "nope";
    EXPECT_EQ(run(bad_state).exit_code, kInvalidInput);

    auto not_a_state = config("separate");
    not_a_state.matrix_file = temp_file("notstate.json", "[[[2,0],[0,0]],[[0,0],[0,0]]]");
    EXPECT_EQ(run(not_a_state).exit_code, kInvalidInput);

    auto malformed = config("separate");
    malformed.matrix_file = temp_file("malformed.json", "[[1,2");
    EXPECT_EQ(run(malformed).exit_code, kInvalidInput);

    auto saturated = config("mimic");
    saturated.trials = 1000;
    saturated.theta = 250.0;
    EXPECT_EQ(run(saturated).exit_code, kDegenerateData);

    EXPECT_EQ(run(config("frobnicate")).exit_code, kInvalidInput);
    auto csv = config("chsh");
    csv.format = "csv";
    EXPECT_EQ(run(csv).exit_code, kInvalidInput);
}

TEST(Cli, SeedFromEnvironment) {
    ::setenv(kSeedEnvVar, "1234", 1);
    EXPECT_EQ(default_seed(), 1234U);
    ::setenv(kSeedEnvVar, "abc", 1);
    EXPECT_THROW(default_seed(), ContractError);
    ::unsetenv(kSeedEnvVar);
    EXPECT_EQ(default_seed(), kDefaultSeed);
}
