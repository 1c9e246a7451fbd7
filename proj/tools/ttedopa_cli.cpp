// ttedopa_cli.cpp — Command-line front end
//
// Subcommands: chain-coeffs, occupation, chain-length, simulate,
// dephasing-oracle, ed-oracle, compare. Exit status: 0 success,
// 2 validation error, 3 numerical error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ttedopa/chain.hpp"
#include "ttedopa/diagnostics.hpp"
#include "ttedopa/oracle.hpp"
#include "ttedopa/run.hpp"

using namespace ttedopa;

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw validation_error("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error("config parse error in '" + path + "': " + e.what());
    }
    return j;
}

SpectralDensity density_from(const std::string& preset, const std::string& config_path) {
    if (!config_path.empty()) return SpectralDensity::from_json(load_json(config_path));
    if (preset == "wscp") return SpectralDensity::wscp();
    if (preset == "wscp-background") return SpectralDensity::wscp_background();
    throw validation_error("unknown spectral density preset '" + preset +
                           "' (expected 'wscp' or 'wscp-background', or use --config)");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw validation_error("cannot open output file '" + path + "'");
    return f;
}

int cmd_chain_coeffs(const std::string& preset, const std::string& config, double temperature,
                     std::size_t n, const std::string& output, const std::string& json_out) {
    auto sd = density_from(preset, config);
    auto coeffs = recurrence_coefficients(thermalize(sd, temperature), n,
                                          preset.empty() ? config : preset);
    auto f = open_out(output);
    coeffs.write_csv(f);
    if (!json_out.empty()) {
        auto jf = open_out(json_out);
        jf << coeffs.to_json().dump(2) << "\n";
    }
    return 0;
}

int cmd_occupation(const std::string& preset, const std::string& config, const std::string& coeffs_json,
                   double temperature, std::size_t n, const std::string& output) {
    ChainCoefficients coeffs;
    if (!coeffs_json.empty()) {
        coeffs = ChainCoefficients::from_json(load_json(coeffs_json));
    } else {
        auto sd = density_from(preset, config);
        coeffs = recurrence_coefficients(sd, n == 0 ? 50 : n, preset);
    }
    if (n == 0) n = coeffs.size();
    auto prof = thermal_occupation(coeffs, temperature, n);
    auto f = open_out(output);
    f << "n, occupation\n";
    f.precision(17);
    for (std::size_t i = 0; i < prof.occupations.size(); ++i)
        f << i << ", " << prof.occupations[i] << "\n";
    return 0;
}

int cmd_chain_length(const std::string& preset, const std::string& config, double temperature,
                     double t_max, double threshold, const std::string& output,
                     const std::string& profile_out, std::size_t reserve) {
    auto sd = density_from(preset, config);
    auto coeffs = recurrence_coefficients(thermalize(sd, temperature), reserve, preset);
    ChainLengthOptions opt;
    opt.return_threshold = threshold;
    std::size_t n = estimate_chain_length(coeffs, t_max, opt);
    auto f = open_out(output);
    f << "N_estimate, " << n << "\n";
    if (!profile_out.empty()) {
        std::vector<double> times;
        for (int i = 0; i <= 200; ++i) times.push_back(t_max * i / 200.0);
        auto walk = quantum_walk(coeffs, n, times);
        auto pf = open_out(profile_out);
        pf << "t_ps";
        for (std::size_t s = 0; s < walk.n_sites; ++s) pf << ", p" << s;
        pf << "\n";
        pf.precision(17);
        for (std::size_t it = 0; it < times.size(); ++it) {
            pf << times[it];
            for (std::size_t s = 0; s < walk.n_sites; ++s) pf << ", " << walk.prob[s][it];
            pf << "\n";
        }
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& output,
                 std::optional<double> temperature, std::optional<int> threads,
                 const std::string& preset) {
    nlohmann::json j = config_path.empty() ? nlohmann::json::object() : load_json(config_path);
    if (!preset.empty()) j["preset"] = preset;
    auto cfg = RunConfig::from_json(j);
    if (!output.empty()) cfg.output = output;
    if (temperature) cfg.temperatures = {*temperature};
    if (threads) cfg.threads = *threads;
    cfg.validate();
    auto outcome = run(cfg);
    for (const auto& e : outcome.errors) std::cerr << e << "\n";
    return outcome.exit_status;
}

int cmd_dephasing_oracle(const std::string& preset, const std::string& config, double temperature,
                         double t_max, double dt, int stride, const std::string& output) {
    auto sd = density_from(preset, config);
    std::vector<double> times;
    long steps = std::lround(t_max / dt);
    for (long i = 0; i <= steps; ++i)
        if (i % stride == 0 || i == steps) times.push_back(i * dt);
    auto curve = dephasing_coherence(sd, temperature, times);
    TimeSeries ts;
    ts.t_ps = curve.t_ps;
    ts.columns = {"coherence"};
    ts.values = {curve.theta};
    ts.discarded_weight.assign(times.size(), 0.0);
    ts.max_bond_dim.assign(times.size(), 1.0);
    ts.write_csv_file(output);
    return 0;
}

int cmd_ed_oracle(const std::string& config_path, const std::string& output) {
    auto j = load_json(config_path);
    auto model = ModelSpec::from_json(j.at("model"));
    auto evo = EvolutionConfig::from_json(j.value("evolution", nlohmann::json::object()));
    std::size_t n = j.value("chain_length", 3);
    int d = j.value("local_dim", 4);
    std::vector<ChainCoefficients> chains;
    std::vector<std::vector<int>> dims;
    for (const auto& bath : model.baths) {
        auto coeffs = recurrence_coefficients(thermalize(bath.density, bath.temperature), n, "ed");
        chains.push_back(std::move(coeffs));
        dims.push_back(std::vector<int>(n, d));
    }
    auto ham = assemble_chain(model, chains, dims);
    auto ts = ed_evolve(ham, evo);
    ts.write_csv_file(output);
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& column,
                std::optional<double> tol) {
    auto sa = TimeSeries::read_csv_file(a);
    auto sb = TimeSeries::read_csv_file(b);
    auto rep = compare_series(sa, sb, column);
    std::printf("max_abs_diff = %.17g at t_ps = %.17g\n", rep.max_abs_diff, rep.at_t_ps);
    if (tol && rep.max_abs_diff > *tol) {
        std::fprintf(stderr, "difference exceeds tolerance %.17g\n", *tol);
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-temperature open-system dynamics via thermalized chain mapping and MPS evolution"};
    app.require_subcommand(1);

    std::string preset, config, output, json_out, coeffs_json, profile_out, column;
    std::string file_a, file_b;
    double temperature = 0.0, t_max = 1.0, threshold = 1e-6, dt = 2.5e-4;
    std::size_t n = 0, reserve = 400;
    int stride = 1;
    std::optional<double> opt_temperature, opt_tol;
    std::optional<int> opt_threads;

    auto* cc = app.add_subcommand("chain-coeffs", "Chain coefficients of a (thermalized) spectral density");
    cc->add_option("--preset", preset, "wscp | wscp-background");
    cc->add_option("--config", config, "spectral density JSON");
    cc->add_option("--temperature", temperature, "temperature in K (0 = plain measure)");
    cc->add_option("-N,--length", n, "number of coefficients")->required();
    cc->add_option("--output", output, "CSV output path")->required();
    cc->add_option("--json", json_out, "also write ChainCoefficients JSON");

    auto* oc = app.add_subcommand("occupation", "Thermal occupation profile of a mapped chain");
    oc->add_option("--preset", preset, "wscp | wscp-background");
    oc->add_option("--config", config, "spectral density JSON");
    oc->add_option("--coeffs", coeffs_json, "ChainCoefficients JSON (from chain-coeffs --json)");
    oc->add_option("--temperature", temperature, "temperature in K")->required();
    oc->add_option("-N,--length", n, "profile length (default: all coefficients)");
    oc->add_option("--output", output, "CSV output path")->required();

    auto* cl = app.add_subcommand("chain-length", "Quantum-walk chain length estimate");
    cl->add_option("--preset", preset, "wscp | wscp-background");
    cl->add_option("--config", config, "spectral density JSON");
    cl->add_option("--temperature", temperature, "temperature in K")->required();
    cl->add_option("--t-max", t_max, "simulation horizon in ps")->required();
    cl->add_option("--threshold", threshold, "return-probability threshold");
    cl->add_option("--reserve", reserve, "coefficients computed for the probe");
    cl->add_option("--output", output, "output path")->required();
    cl->add_option("--profile", profile_out, "also write the walk probability profile CSV");

    auto* sim = app.add_subcommand("simulate", "Run the chain-MPS evolution pipeline");
    sim->add_option("--config", config, "RunConfig JSON (or a manifest)")->required();
    sim->add_option("--output", output, "CSV output path (overrides config)");
    sim->add_option("--temperature", opt_temperature, "single temperature override (K)");
    sim->add_option("--threads", opt_threads, "worker threads (overrides config)");
    sim->add_option("--preset", preset, "preset override");

    auto* deph = app.add_subcommand("dephasing-oracle", "Analytic pure-dephasing coherence");
    deph->add_option("--preset", preset, "wscp | wscp-background");
    deph->add_option("--config", config, "spectral density JSON");
    deph->add_option("--temperature", temperature, "temperature in K")->required();
    deph->add_option("--t-max", t_max, "horizon in ps")->required();
    deph->add_option("--dt", dt, "output grid step in ps");
    deph->add_option("--stride", stride, "sampling stride");
    deph->add_option("--output", output, "CSV output path")->required();

    auto* ed = app.add_subcommand("ed-oracle", "Dense reference evolution of a small instance");
    ed->add_option("--config", config, "model + evolution JSON")->required();
    ed->add_option("--output", output, "CSV output path")->required();

    auto* cmp = app.add_subcommand("compare", "Max-abs-difference of a column between two CSVs");
    cmp->add_option("a", file_a, "first CSV")->required();
    cmp->add_option("b", file_b, "second CSV")->required();
    cmp->add_option("--column", column, "column name")->required();
    cmp->add_option("--tol", opt_tol, "fail (exit 3) if the difference exceeds this");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cc->parsed()) return cmd_chain_coeffs(preset, config, temperature, n, output, json_out);
        if (oc->parsed()) return cmd_occupation(preset, config, coeffs_json, temperature, n, output);
        if (cl->parsed())
            return cmd_chain_length(preset, config, temperature, t_max, threshold, output,
                                    profile_out, reserve);
        if (sim->parsed()) return cmd_simulate(config, output, opt_temperature, opt_threads, preset);
        if (deph->parsed())
            return cmd_dephasing_oracle(preset, config, temperature, t_max, dt, stride, output);
        if (ed->parsed()) return cmd_ed_oracle(config, output);
        if (cmp->parsed()) return cmd_compare(file_a, file_b, column, opt_tol);
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
