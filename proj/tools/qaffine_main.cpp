#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/commands.hpp"
#include "qaffine/error.hpp"

namespace {

using qaffine::cli::RunConfig;

void add_state_flags(CLI::App* sub, RunConfig& c) {
    sub->add_option("--state", c.state, "bell-singlet | qdice-sigma | maximally-mixed");
    sub->add_option("--qubits", c.qubits, "qubit count for maximally-mixed");
    sub->add_option("--bloch", c.bloch, "one-qubit state from a Bloch vector x y z")->expected(3);
    sub->add_option("--matrix", c.matrix_file, "JSON file with rows of [re, im] pairs");
}

void add_experiment_flags(CLI::App* sub, RunConfig& c) {
    sub->add_option("--source", c.source, "singlet | qdice");
    sub->add_option("--pipeline", c.pipeline, "none | a<value>: threshold realizing A_a");
    sub->add_option("--theta", c.theta, "threshold per outcome cell (counts)");
    sub->add_option("--epsilon", c.epsilon, "symmetric misclassification");
    sub->add_option("--scale", c.scale, "rescale s of the linear correction");
    sub->add_option("--background", c.background, "background b of the linear correction (counts)");
    sub->add_option("--mode", c.mode, "expected | sampled");
    sub->add_option("--trials", c.trials, "trials T per settings pair");
    sub->add_option("--threads", c.threads, "worker threads for sampling (0 = all cores)");
}

void add_output_flags(CLI::App* sub, RunConfig& c) {
    sub->add_option("--seed", c.seed, std::string("random seed (default from ") +
                                          qaffine::cli::kSeedEnvVar + ")");
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "json | csv");
    sub->add_flag("--timing", c.timing, "embed wall-clock duration in the artifact");
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qaffine::ContractError("cannot open config file '" + path + "'");
    try {
        return qaffine::cli::config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw qaffine::ContractError(std::string("malformed config file: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig config;
    std::string config_file;
    try {
        config.seed = qaffine::cli::default_seed();
    } catch (const qaffine::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qaffine::cli::kInvalidInput;
    }

    CLI::App app{"Affine detection loophole toolkit: separable decompositions, LHV sources and "
                 "distorted Bell statistics"};
    app.set_version_flag("--version", std::string(qaffine::cli::kToolName) + " " + QAFFINE_VERSION);
    app.add_option("--config", config_file, "run config JSON (replaces all other flags)");
    app.require_subcommand(0, 1);

    auto* separate = app.add_subcommand("separate", "constructive separable decomposition of a state");
    add_state_flags(separate, config);
    add_output_flags(separate, config);

    auto* validate = app.add_subcommand("validate", "check Hermiticity, trace and positivity");
    add_state_flags(validate, config);
    add_output_flags(validate, config);

    auto* pseudopure = app.add_subcommand("pseudopure", "split a pseudo-pure state");
    add_state_flags(pseudopure, config);
    pseudopure->add_option("--mix", config.mix, "first mix with white noise: apply A_{1/mix}");
    add_output_flags(pseudopure, config);

    auto* chsh = app.add_subcommand("chsh", "CHSH value at the canonical angles");
    add_experiment_flags(chsh, config);
    add_output_flags(chsh, config);

    auto* curve = app.add_subcommand("curve", "correlation E(theta) on [0, pi]");
    add_experiment_flags(curve, config);
    curve->add_option("--points", config.points, "grid size");
    add_output_flags(curve, config);

    auto* mimic = app.add_subcommand("mimic", "LHV source + threshold device vs the singlet");
    add_experiment_flags(mimic, config);
    add_output_flags(mimic, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qaffine::cli::kInvalidInput;
    }

    try {
        if (!config_file.empty()) {
            config = load_config_file(config_file);
        } else if (const auto subs = app.get_subcommands(); !subs.empty()) {
            config.command = subs.front()->get_name();
        }
    } catch (const qaffine::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qaffine::cli::kInvalidInput;
    }
    if (config.command.empty()) {
        std::cerr << app.help();
        return qaffine::cli::kInvalidInput;
    }

    const auto started = std::chrono::steady_clock::now();
    const qaffine::cli::Artifact artifact = qaffine::cli::run(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (artifact.exit_code != qaffine::cli::kOk) {
        std::cerr << artifact.text;
        return artifact.exit_code;
    }
    if (config.out.empty()) {
        std::cout << artifact.text;
    } else {
        std::ofstream out(config.out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << config.out << "'\n";
            return qaffine::cli::kInvalidInput;
        }
        out << artifact.text;
    }
    std::cerr << config.command << ": done in " << seconds << " s (seed " << config.seed << ")\n";
    return qaffine::cli::kOk;
}
