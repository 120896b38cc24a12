#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "qaffine/affine.hpp"
#include "qaffine/bellharness.hpp"
#include "qaffine/error.hpp"
#include "qaffine/io.hpp"
#include "qaffine/lhv.hpp"
#include "qaffine/measurement.hpp"
#include "qaffine/separability.hpp"

#ifndef QAFFINE_VERSION
#define QAFFINE_VERSION "0.0.0"
#endif

namespace qaffine::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kBellOutcomes = 4;

// ---------------------------------------------------------------------------
// artifact assembly

json envelope(const RunConfig& c) {
    return {{"tool", kToolName}, {"version", QAFFINE_VERSION}, {"command", c.command},
            {"config", to_json(c)}, {"seed", c.seed}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string csv_preamble(const RunConfig& c) {
    return "# " + json(envelope(c)).dump() + "\n";
}

// ---------------------------------------------------------------------------
// sources

HiddenVariableModel qdice_model() { return model_from_decomposition(qdice_decomposition()); }

BellSource make_source(const RunConfig& c) {
    if (c.source == "singlet") {
        if (c.pipeline != "none") {
            throw ContractError("distortion pipelines apply to classical sources only");
        }
        return bell_singlet();
    }
    if (c.source == "qdice") {
        return ClassicalSource{qdice_model(), resolve_pipeline(c), static_cast<double>(c.trials)};
    }
    throw ContractError("unknown source '" + c.source + "' (expected singlet or qdice)");
}

json state_report(const DensityMatrix& rho) {
    const StateReport r = inspect_state(rho.matrix());
    return {{"n_qubits", rho.n_qubits()},
            {"hermitian", r.hermitian},
            {"unit_trace", r.unit_trace},
            {"positive", r.positive},
            {"valid", r.valid()},
            {"hermiticity_defect", r.hermiticity_defect},
            {"trace_defect", r.trace_defect},
            {"min_eigenvalue", r.min_eigenvalue}};
}

std::vector<double> cell_sigmas(const ProbabilityTable& p, double trials, double factor) {
    std::vector<double> out;
    for (double v : p.values()) {
        const double q = std::clamp(v, 0.0, 1.0);
        out.push_back(factor * std::sqrt(q * (1.0 - q) / trials));
    }
    return out;
}

// ---------------------------------------------------------------------------
// commands

json cmd_separate(const RunConfig& c) {
    const DensityMatrix rho = load_state(c);
    const SeparableDecomposition d = separate(rho);
    const ComplexMatrix back = affine_apply(AffineMap(d.a, rho.dim()), d.separable_state());
    json result = io::to_json(d);
    result["n_qubits"] = d.n_qubits;
    result["n_terms"] = d.terms.size();
    result["checks"] = {{"reconstruction_error", frobenius_distance(back, rho.matrix())},
                        {"min_weight", d.min_weight()},
                        {"weight_sum", d.weight_sum()}};
    return result;
}

json cmd_validate(const RunConfig& c) {
    // Validation must report on non-states instead of rejecting them.
    if (!c.matrix_file.empty()) {
        std::ifstream in(c.matrix_file);
        if (!in) throw ContractError("cannot open matrix file '" + c.matrix_file + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ContractError(std::string("malformed matrix file: ") + e.what());
        }
        const ComplexMatrix m = io::matrix_from_json(j);
        return state_report(DensityMatrix::unchecked(m));
    }
    return state_report(load_state(c));
}

json cmd_pseudopure(const RunConfig& c) {
    DensityMatrix rho = load_state(c);
    if (!(c.mix >= 1.0)) throw ContractError("--mix must be at least 1");
    if (c.mix != 1.0) {
        rho = DensityMatrix::from_matrix(affine_apply(AffineMap(1.0 / c.mix, rho.dim()), rho));
    }
    const auto split = pseudo_pure_split(rho);
    json result = {{"pseudo_pure", split.has_value()}};
    if (split) {
        result["a"] = split->a;
        result["pure_state"] = io::to_json(split->pure_state.matrix());
        result["reconstruction_error"] = frobenius_distance(split->reconstruct(), rho.matrix());
    }
    return result;
}

json cmd_chsh(const RunConfig& c) {
    const BellSource source = make_source(c);
    const ChshSettings settings = ChshSettings::canonical();
    json result = {{"source", source_label(source)}, {"settings", io::to_json(settings)}};
    if (const auto* classical = std::get_if<ClassicalSource>(&source)) {
        result["pipeline"] = io::to_json(classical->pipeline);
        if (classical->pipeline.mode == PipelineMode::sampled) {
            result["chsh"] = io::to_json(chsh_sampled(classical->model, classical->pipeline, settings,
                                                      c.trials, c.seed, c.threads));
            return result;
        }
    }
    result["chsh"] = io::to_json(chsh_exact(source, settings));
    return result;
}

AngularCurve make_curve(const RunConfig& c) {
    const BellSource source = make_source(c);
    if (const auto* classical = std::get_if<ClassicalSource>(&source)) {
        if (classical->pipeline.mode == PipelineMode::sampled) {
            return angular_sweep_sampled(*classical, c.points, c.trials, c.seed, c.threads);
        }
    }
    return angular_sweep(source, c.points);
}

json cmd_mimic(const RunConfig& c) {
    const double trials = static_cast<double>(c.trials);
    DistortionPipeline pipeline = resolve_pipeline(c);
    if (!c.theta && c.pipeline == "none") pipeline.theta = trials / 6.0;
    pipeline.mode = PipelineMode::sampled;
    const AffineMap equivalent = equivalent_affine(pipeline.theta, trials, kBellOutcomes);

    const HiddenVariableModel model = qdice_model();
    const std::array zz{MeasurementSetting::along_z(), MeasurementSetting::along_z()};
    // Arms 0-3 of the seed feed the CHSH runs; the z-z table uses its own substream.
    RandomStream zz_stream = RandomStream(c.seed).split(4);
    const CountTable raw_counts = run_trials(model, zz, c.trials, zz_stream, c.threads);
    const ProbabilityTable raw = analyze_counts(raw_counts);
    const PipelineOutput distorted = apply_pipeline(pipeline, raw_counts);
    const ProbabilityTable quantum = projective_probabilities(bell_singlet(), zz);
    const double factor = pipeline.affine_factor(trials, kBellOutcomes, 2);

    DistortionPipeline identity;
    identity.mode = PipelineMode::sampled;
    const ChshSettings settings = ChshSettings::canonical();
    const ChshResult chsh_raw = chsh_sampled(model, identity, settings, c.trials, c.seed, c.threads);
    const ChshResult chsh_distorted = chsh_sampled(model, pipeline, settings, c.trials, c.seed, c.threads);
    const ChshResult chsh_quantum = chsh_exact(bell_singlet(), settings);

    json zz_json = {
        {"raw_counts", io::to_json(raw_counts)},
        {"raw", io::to_json(raw)},
        {"raw_sigma", cell_sigmas(raw, trials, 1.0)},
        {"distorted_counts", io::to_json(distorted.processed)},
        {"distorted", io::to_json(distorted.probabilities)},
        {"distorted_sigma", cell_sigmas(raw, trials, pipeline.affine_factor(trials, kBellOutcomes, 0))},
        {"quantum", io::to_json(quantum)},
        {"max_deviation_distorted_vs_quantum", max_abs_difference(distorted.probabilities, quantum)},
        {"clipped", distorted.clipped}};
    return {{"pipeline", io::to_json(pipeline)},
            {"equivalent_affine", io::to_json(equivalent)},
            {"correlation_factor", factor},
            {"zz", std::move(zz_json)},
            {"chsh",
             {{"settings", io::to_json(settings)},
              {"raw", io::to_json(chsh_raw)},
              {"distorted", io::to_json(chsh_distorted)},
              {"quantum", io::to_json(chsh_quantum)}}}};
}

std::string run_command(const RunConfig& c) {
    static const std::map<std::string, std::function<json(const RunConfig&)>> json_commands{
        {"separate", cmd_separate}, {"validate", cmd_validate}, {"pseudopure", cmd_pseudopure},
        {"chsh", cmd_chsh},         {"mimic", cmd_mimic}};

    if (c.format != "json" && c.format != "csv") {
        throw ContractError("unknown format '" + c.format + "' (expected json or csv)");
    }
    const auto started = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    if (c.command == "curve") {
        const AngularCurve curve = make_curve(c);
        if (c.format == "csv") {
            std::string text = csv_preamble(c);
            if (c.timing) text += "# wall_clock_seconds=" + std::to_string(elapsed()) + "\n";
            return text + io::curve_csv(curve);
        }
        json doc = envelope(c);
        doc["result"] = io::to_json(curve);
        if (c.timing) doc["wall_clock_seconds"] = elapsed();
        return dump(doc);
    }

    const auto it = json_commands.find(c.command);
    if (it == json_commands.end()) throw ContractError("unknown command '" + c.command + "'");
    if (c.format == "csv") throw ContractError("csv output is available for curve only");
    json doc = envelope(c);
    doc["result"] = it->second(c);
    if (c.timing) doc["wall_clock_seconds"] = elapsed();
    return dump(doc);
}

}  // namespace

// ---------------------------------------------------------------------------
// config

json to_json(const RunConfig& c) {
    json j = {{"command", c.command},   {"state", c.state},     {"matrix_file", c.matrix_file},
              {"qubits", c.qubits},     {"mix", c.mix},         {"source", c.source},
              {"pipeline", c.pipeline}, {"scale", c.scale},     {"background", c.background},
              {"epsilon", c.epsilon},   {"mode", c.mode},       {"trials", c.trials},
              {"points", c.points},     {"seed", c.seed},       {"threads", c.threads},
              {"out", c.out},           {"format", c.format},   {"timing", c.timing}};
    j["bloch"] = c.bloch ? json(*c.bloch) : json(nullptr);
    j["theta"] = c.theta ? json(*c.theta) : json(nullptr);
    return j;
}

RunConfig config_from_json(const json& j) {
    try {
        RunConfig c;
        c.command = j.value("command", c.command);
        c.state = j.value("state", c.state);
        c.matrix_file = j.value("matrix_file", c.matrix_file);
        c.qubits = j.value("qubits", c.qubits);
        c.mix = j.value("mix", c.mix);
        c.source = j.value("source", c.source);
        c.pipeline = j.value("pipeline", c.pipeline);
        c.scale = j.value("scale", c.scale);
        c.background = j.value("background", c.background);
        c.epsilon = j.value("epsilon", c.epsilon);
        c.mode = j.value("mode", c.mode);
        c.trials = j.value("trials", c.trials);
        c.points = j.value("points", c.points);
        c.seed = j.value("seed", c.seed);
        c.threads = j.value("threads", c.threads);
        c.out = j.value("out", c.out);
        c.format = j.value("format", c.format);
        c.timing = j.value("timing", c.timing);
        if (j.contains("bloch") && !j.at("bloch").is_null()) c.bloch = j.at("bloch").get<std::array<double, 3>>();
        if (j.contains("theta") && !j.at("theta").is_null()) c.theta = j.at("theta").get<double>();
        return c;
    } catch (const json::exception& e) {
        throw ContractError(std::string("malformed run config: ") + e.what());
    }
}

std::uint64_t default_seed() {
    const char* env = std::getenv(kSeedEnvVar);
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
        throw ContractError(std::string(kSeedEnvVar) + " must be an unsigned integer");
    }
    return value;
}

DensityMatrix load_state(const RunConfig& c) {
    if (c.bloch) {
        const auto& v = *c.bloch;
        return density_from_bloch({v[0], v[1], v[2]});
    }
    if (!c.matrix_file.empty()) {
        std::ifstream in(c.matrix_file);
        if (!in) throw ContractError("cannot open matrix file '" + c.matrix_file + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ContractError(std::string("malformed matrix file: ") + e.what());
        }
        return DensityMatrix::from_matrix(io::matrix_from_json(j));
    }
    if (c.state == "bell-singlet") return bell_singlet();
    if (c.state == "qdice-sigma") return qdice_sigma();
    if (c.state == "maximally-mixed") {
        if (c.qubits < 1 || c.qubits > 8) throw ContractError("--qubits must be between 1 and 8");
        return maximally_mixed(c.qubits);
    }
    throw ContractError("unknown state '" + c.state +
                        "' (expected bell-singlet, qdice-sigma or maximally-mixed)");
}

DistortionPipeline resolve_pipeline(const RunConfig& c) {
    DistortionPipeline p;
    p.mode = parse_pipeline_mode(c.mode);
    p.correction = {c.scale, c.background};
    p.epsilon = c.epsilon;
    if (c.pipeline != "none") {
        if (c.pipeline.size() < 2 || c.pipeline.front() != 'a') {
            throw ContractError("pipeline must be 'none' or 'a<value>', got '" + c.pipeline + "'");
        }
        double a = 0.0;
        try {
            std::size_t used = 0;
            a = std::stod(c.pipeline.substr(1), &used);
            if (used != c.pipeline.size() - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ContractError("cannot parse affine parameter in pipeline '" + c.pipeline + "'");
        }
        p.theta = DistortionPipeline::threshold_for(a, static_cast<double>(c.trials), kBellOutcomes).theta;
    }
    if (c.theta) p.theta = *c.theta;
    p.validate();
    return p;
}

Artifact run(const RunConfig& c) {
    try {
        return {run_command(c), kOk};
    } catch (const DeviceSaturatedError& e) {
        return {std::string("error: ") + e.what() + "\n", kDegenerateData};
    } catch (const DegenerateDataError& e) {
        return {std::string("error: ") + e.what() + "\n", kDegenerateData};
    } catch (const Error& e) {
        return {std::string("error: ") + e.what() + "\n", kInvalidInput};
    }
}

}  // namespace qaffine::cli
