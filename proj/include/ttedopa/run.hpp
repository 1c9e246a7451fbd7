// run.hpp — Configuration-driven orchestration and run manifests
//
// One run per temperature: thermalize, map to a chain, size the chain
// (estimator or explicit override), build the dimension schedule, evolve,
// write the observable CSV plus a manifest holding every resolved parameter.
// A manifest is itself a valid config, so re-running one reproduces the run.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttedopa/chain.hpp"
#include "ttedopa/diagnostics.hpp"
#include "ttedopa/errors.hpp"
#include "ttedopa/hamiltonian.hpp"
#include "ttedopa/model.hpp"
#include "ttedopa/oracle.hpp"
#include "ttedopa/tebd.hpp"
#include "ttedopa/timeseries.hpp"

namespace ttedopa {

inline constexpr int kManifestSchemaVersion = 1;

struct RunConfig {
    std::string preset = "custom";  // dephasing-wscp | dimer-wscp | custom
    ModelSpec model;                // resolved model (presets fill it per temperature)
    std::vector<double> temperatures;
    EvolutionConfig evolution;
    int chain_length = 0;       // explicit N; 0 with auto_estimate
    bool auto_estimate = true;  // mutually exclusive with explicit chain_length
    double return_threshold = 1e-6;
    int d_max = 12;
    int coefficient_reserve = 0;  // coefficients computed ahead of the estimator; 0 = auto
    std::string output = "run.csv";
    int threads = 1;

    void validate() const {
        if (temperatures.empty()) throw validation_error("config: at least one temperature required");
        for (double t : temperatures)
            if (t < 0.0 || !std::isfinite(t))
                throw validation_error("config: invalid temperature " + std::to_string(t));
        if (auto_estimate && chain_length > 0)
            throw validation_error("config: auto_estimate and explicit chain_length are mutually exclusive");
        if (!auto_estimate && chain_length < 1)
            throw validation_error("config: chain_length must be >= 1 when auto_estimate is off");
        if (d_max < 2) throw validation_error("config: d_max must be >= 2");
        if (threads < 1) throw validation_error("config: threads must be >= 1");
        if (preset != "custom" && preset != "dephasing-wscp" && preset != "dimer-wscp")
            throw validation_error("config: unknown preset '" + preset + "'");
        evolution.validate();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["preset"] = preset;
        if (preset == "custom") j["model"] = model.to_json();
        j["temperatures"] = temperatures;
        j["evolution"] = evolution.to_json();
        j["chain_length"] = chain_length;
        j["auto_estimate"] = auto_estimate;
        j["return_threshold"] = return_threshold;
        j["d_max"] = d_max;
        j["output"] = output;
        j["threads"] = threads;
        return j;
    }

    static RunConfig from_json(const nlohmann::json& j) {
        RunConfig c;
        c.preset = j.value("preset", "custom");
        c.temperatures = j.value("temperatures", std::vector<double>{});
        if (j.contains("evolution")) c.evolution = EvolutionConfig::from_json(j.at("evolution"));
        c.chain_length = j.value("chain_length", 0);
        c.auto_estimate = j.value("auto_estimate", c.chain_length == 0);
        c.return_threshold = j.value("return_threshold", 1e-6);
        c.d_max = j.value("d_max", 12);
        c.coefficient_reserve = j.value("coefficient_reserve", 0);
        c.output = j.value("output", "run.csv");
        c.threads = j.value("threads", 1);
        if (c.preset == "custom") {
            if (!j.contains("model"))
                throw validation_error("config: preset 'custom' requires a 'model' block");
            c.model = ModelSpec::from_json(j.at("model"));
            if (c.temperatures.empty())
                for (const auto& b : c.model.baths) {
                    c.temperatures = {b.temperature};
                    break;
                }
        }
        c.validate();
        return c;
    }

    // Model resolved to a specific temperature (all baths set to T).
    ModelSpec model_at(double temperature_K) const {
        ModelSpec m;
        if (preset == "dephasing-wscp") m = ModelSpec::dephasing_wscp(temperature_K);
        else if (preset == "dimer-wscp") m = ModelSpec::dimer_wscp(temperature_K);
        else {
            m = model;
            for (auto& b : m.baths) b.temperature = temperature_K;
        }
        return m;
    }
};

// FNV-1a over the raw bytes of the coefficient doubles; manifest fingerprint.
inline std::string coefficients_checksum(const ChainCoefficients& c) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::vector<double>& v) {
        for (double x : v) {
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(x));
            std::memcpy(&bits, &x, sizeof(bits));
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xff;
                h *= 1099511628211ull;
            }
        }
    };
    mix(c.omegas);
    mix(c.kappas);
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

struct RunArtifacts {
    std::string csv_path;
    std::string manifest_path;
    TimeSeries series;
    nlohmann::json manifest;
};

inline std::string output_path_for(const std::string& base, double temperature_K, bool multi) {
    if (!multi) return base;
    auto dot = base.rfind('.');
    std::ostringstream os;
    os << temperature_K;
    std::string stem = dot == std::string::npos ? base : base.substr(0, dot);
    std::string ext = dot == std::string::npos ? ".csv" : base.substr(dot);
    return stem + "_T" + os.str() + "K" + ext;
}

// Single-temperature pipeline. Chain coefficients are recomputed
// deterministically from the density, so the manifest needs only their
// checksum and the resolved length.
inline RunArtifacts run_single(const RunConfig& cfg, double temperature_K, bool multi) {
    auto wall0 = std::chrono::steady_clock::now();
    ModelSpec model = cfg.model_at(temperature_K);
    model.validate();

    // default reserve: enough coefficients for the estimator's 2M probe
    int reserve = cfg.coefficient_reserve;
    if (reserve <= 0) reserve = cfg.auto_estimate ? 400 : cfg.chain_length;

    std::vector<ChainCoefficients> chains;
    std::vector<std::vector<int>> dims;
    std::vector<std::size_t> lengths;
    for (std::size_t b = 0; b < model.baths.size(); ++b) {
        auto tsd = thermalize(model.baths[b].density, model.baths[b].temperature);
        std::string desc = cfg.preset + "/bath" + std::to_string(b);
        auto coeffs = recurrence_coefficients(tsd, std::size_t(reserve), desc);
        std::size_t n;
        if (cfg.auto_estimate) {
            ChainLengthOptions opt;
            opt.return_threshold = cfg.return_threshold;
            n = estimate_chain_length(coeffs, cfg.evolution.t_max, opt);
        } else {
            n = std::size_t(cfg.chain_length);
        }
        coeffs.omegas.resize(n);
        coeffs.kappas.resize(n);
        chains.push_back(std::move(coeffs));
        dims.push_back(local_dimension_schedule(cfg.d_max, n));
        lengths.push_back(n);
    }

    auto ham = assemble_chain(model, chains, dims);
    auto psi = init_vacuum(ham);
    EvolutionConfig evo = cfg.evolution;
    evo.threads = cfg.threads;
    auto series = tebd_evolve(psi, ham, evo);

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

    RunArtifacts art;
    art.csv_path = output_path_for(cfg.output, temperature_K, multi);
    art.manifest_path = art.csv_path + ".manifest.json";
    art.series = std::move(series);

    nlohmann::json manifest;
    manifest["schema_version"] = kManifestSchemaVersion;
    manifest["preset"] = "custom";  // manifests always carry the fully resolved model
    manifest["model"] = model.to_json();
    manifest["temperatures"] = std::vector<double>{temperature_K};
    manifest["evolution"] = evo.to_json();
    manifest["chain_length"] = int(lengths[0]);
    manifest["auto_estimate"] = false;
    manifest["return_threshold"] = cfg.return_threshold;
    manifest["d_max"] = cfg.d_max;
    manifest["output"] = art.csv_path;
    manifest["threads"] = cfg.threads;
    nlohmann::json results;
    results["source_preset"] = cfg.preset;
    if (model.kind == ModelKind::dimer) results["lambda"] = model.lambda;
    results["chain_lengths"] = lengths;
    nlohmann::json sums = nlohmann::json::array();
    for (const auto& c : chains) sums.push_back(coefficients_checksum(c));
    results["coefficient_checksums"] = sums;
    nlohmann::json dj = nlohmann::json::array();
    for (const auto& d : dims) dj.push_back(d);
    results["local_dims"] = dj;
    results["discarded_weight_total"] =
        art.series.discarded_weight.empty() ? 0.0 : art.series.discarded_weight.back();
    results["max_bond_dim"] =
        art.series.max_bond_dim.empty() ? 1.0 : *std::max_element(art.series.max_bond_dim.begin(),
                                                                  art.series.max_bond_dim.end());
    results["wall_time_s"] = wall;
    results["warnings"] = art.series.warnings;
    manifest["results"] = results;
    art.manifest = manifest;
    return art;
}

struct RunOutcome {
    int exit_status = 0;
    std::vector<std::string> errors;  // one JSON record per failed temperature
};

// Multi-temperature driver: each temperature runs independently; a failure
// is recorded (stderr + <output>.error.json) and the others proceed.
inline RunOutcome run(const RunConfig& cfg) {
    cfg.validate();
    RunOutcome outcome;
    const bool multi = cfg.temperatures.size() > 1;
    for (double t : cfg.temperatures) {
        try {
            auto art = run_single(cfg, t, multi);
            art.series.write_csv_file(art.csv_path);
            std::ofstream mf(art.manifest_path);
            if (!mf) throw validation_error("cannot open manifest path '" + art.manifest_path + "'");
            mf << art.manifest.dump(2) << "\n";
        } catch (const std::exception& e) {
            nlohmann::json err;
            err["temperature"] = t;
            err["error"] = e.what();
            bool numerical = dynamic_cast<const std::runtime_error*>(&e) != nullptr;
            err["class"] = numerical ? "numerical" : "validation";
            std::string path = output_path_for(cfg.output, t, multi) + ".error.json";
            std::ofstream ef(path);
            if (ef) ef << err.dump(2) << "\n";
            outcome.errors.push_back(err.dump());
            outcome.exit_status = std::max(outcome.exit_status, numerical ? 3 : 2);
        }
    }
    return outcome;
}

}  // namespace ttedopa
