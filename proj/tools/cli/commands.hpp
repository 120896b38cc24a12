// Command layer behind the qaffine executable. Every command turns a RunConfig
// into a text artifact; the executable only parses flags and writes files.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qaffine/distortion.hpp"
#include "qaffine/qstate.hpp"

namespace qaffine::cli {

inline constexpr const char* kToolName = "qaffine";
inline constexpr const char* kSeedEnvVar = "QAFFINE_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kDegenerateData = 3 };

struct RunConfig {
    std::string command;

    // state spec: a named constant, a Bloch vector or a matrix file
    std::string state = "bell-singlet";
    std::optional<std::array<double, 3>> bloch;
    std::string matrix_file;
    std::size_t qubits = 2;
    double mix = 1.0;  ///< pseudopure: apply A_{1/mix} before splitting

    // Bell experiments
    std::string source = "qdice";  ///< singlet | qdice
    std::string pipeline = "none"; ///< none | a<value>, e.g. a3
    double scale = 1.0;
    double background = 0.0;
    double epsilon = 0.0;
    std::optional<double> theta;
    std::string mode = "expected";
    std::uint64_t trials = 1'200'000;
    std::size_t points = 64;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;

    std::string out;
    std::string format = "json";
    bool timing = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& c);
/// Throws ContractError on malformed config.
RunConfig config_from_json(const nlohmann::json& j);

/// Seed from the environment variable, or kDefaultSeed.
std::uint64_t default_seed();

/// Resolves the state spec; throws InvalidStateError / ContractError.
DensityMatrix load_state(const RunConfig& c);

/// The pipeline implied by --pipeline, --theta, --epsilon, --scale,
/// --background and --mode for count tables of `trials` events.
DistortionPipeline resolve_pipeline(const RunConfig& c);

struct Artifact {
    std::string text;
    int exit_code = kOk;
};

/// Runs c.command. Library errors are mapped to exit codes with the message
/// in `text`; the artifact text is a pure function of the config.
Artifact run(const RunConfig& c);

}  // namespace qaffine::cli
