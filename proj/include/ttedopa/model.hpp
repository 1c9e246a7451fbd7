// model.hpp — System models: dephasing TLS and excitonic dimer

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttedopa/errors.hpp"
#include "ttedopa/spectral.hpp"

namespace ttedopa {

enum class ModelKind { dephasing_tls, dimer };

inline std::string to_string(ModelKind k) {
    return k == ModelKind::dephasing_tls ? "dephasing-TLS" : "dimer";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "dephasing-TLS") return ModelKind::dephasing_tls;
    if (s == "dimer") return ModelKind::dimer;
    throw validation_error("unknown model kind '" + s + "' (expected 'dephasing-TLS' or 'dimer')");
}

struct BathSpec {
    SpectralDensity density;
    double temperature = 0.0;  // Kelvin
};

// A dephasing TLS couples one bath through the excited-state projector; the
// dimer couples two independent baths, one per TLS, with a cross coupling
// lambda between the sites.
struct ModelSpec {
    ModelKind kind = ModelKind::dephasing_tls;
    double lambda = 0.0;             // dimer cross coupling, cm^-1
    double epsilon = 0.0;            // optional TLS splitting (dephasing only), cm^-1
    std::string initial_state = "plus";  // "plus" | "plus_D" | "minus_D"
    std::vector<BathSpec> baths;

    void validate() const {
        if (kind == ModelKind::dephasing_tls) {
            if (baths.size() != 1)
                throw validation_error("dephasing-TLS model requires exactly one bath");
            if (initial_state != "plus")
                throw unsupported_error("dephasing-TLS initial_state must be 'plus' (pure states only)");
        } else {
            if (baths.size() != 2)
                throw validation_error("dimer model requires exactly two baths");
            if (initial_state != "plus_D" && initial_state != "minus_D")
                throw unsupported_error("dimer initial_state must be 'plus_D' or 'minus_D' (pure states only)");
        }
        for (const auto& b : baths)
            if (b.temperature < 0.0)
                throw validation_error("bath temperature must be >= 0");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["kind"] = to_string(kind);
        if (kind == ModelKind::dimer) j["lambda"] = lambda;
        if (kind == ModelKind::dephasing_tls && epsilon != 0.0) j["epsilon"] = epsilon;
        j["initial_state"] = initial_state;
        j["baths"] = nlohmann::json::array();
        for (const auto& b : baths)
            j["baths"].push_back({{"spectral_density", b.density.to_json()}, {"temperature", b.temperature}});
        return j;
    }

    static ModelSpec from_json(const nlohmann::json& j) {
        ModelSpec m;
        m.kind = model_kind_from_string(j.at("kind").get<std::string>());
        m.lambda = j.value("lambda", 0.0);
        m.epsilon = j.value("epsilon", 0.0);
        m.initial_state = j.value("initial_state", m.kind == ModelKind::dimer ? "plus_D" : "plus");
        for (const auto& b : j.at("baths"))
            m.baths.push_back({SpectralDensity::from_json(b.at("spectral_density")),
                               b.at("temperature").get<double>()});
        m.validate();
        return m;
    }

    // Pure-dephasing TLS coupled to the pigment-protein density.
    static ModelSpec dephasing_wscp(double temperature_K) {
        ModelSpec m;
        m.kind = ModelKind::dephasing_tls;
        m.initial_state = "plus";
        m.baths.push_back({SpectralDensity::wscp(), temperature_K});
        return m;
    }

    // Homodimer with lambda = 69 cm^-1 and two identical local baths.
    static ModelSpec dimer_wscp(double temperature_K, bool background_only = false) {
        ModelSpec m;
        m.kind = ModelKind::dimer;
        m.lambda = 69.0;
        m.initial_state = "plus_D";
        auto sd = background_only ? SpectralDensity::wscp_background() : SpectralDensity::wscp();
        m.baths.push_back({sd, temperature_K});
        m.baths.push_back({sd, temperature_K});
        return m;
    }
};

}  // namespace ttedopa
