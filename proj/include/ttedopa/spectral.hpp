// spectral.hpp — Parametric spectral densities and their thermal transform
//
// A SpectralDensity is a log-normal background plus Lorentzian peaks with a
// hard cutoff. ThermalizedSD extends it to negative frequencies with the
// detailed-balance weight so a vacuum-initialized environment reproduces
// thermal reduced dynamics.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttedopa/errors.hpp"
#include "ttedopa/quadrature.hpp"
#include "ttedopa/units.hpp"

namespace ttedopa {

struct LogNormalTerm {
    double S;      // dimensionless weight
    double sigma;  // dimensionless width
    double omega;  // center frequency, cm^-1
};

struct LorentzianTerm {
    double g;      // dimensionless weight
    double gamma;  // half width, cm^-1
    double Omega;  // center frequency, cm^-1
};

class SpectralDensity {
public:
    SpectralDensity(std::vector<LogNormalTerm> lognormal,
                    std::vector<LorentzianTerm> lorentzian, double cutoff)
        : lognormal_(std::move(lognormal)), lorentzian_(std::move(lorentzian)), cutoff_(cutoff) {
        if (!(cutoff_ > 0.0) || !std::isfinite(cutoff_))
            throw validation_error("SpectralDensity: cutoff must be positive and finite");
        for (const auto& t : lognormal_) {
            if (t.S < 0.0 || !(t.sigma > 0.0) || !(t.omega > 0.0))
                throw validation_error("SpectralDensity: log-normal term requires S >= 0, sigma > 0, omega > 0");
        }
        for (const auto& t : lorentzian_) {
            if (t.g < 0.0 || !(t.gamma > 0.0) || !(t.Omega > 0.0))
                throw validation_error("SpectralDensity: Lorentzian term requires g >= 0, gamma > 0, Omega > 0");
        }
    }

    // J(w); zero outside (0, cutoff]. Non-finite w is a domain error.
    double operator()(double w) const {
        if (!std::isfinite(w)) throw std::domain_error("SpectralDensity: non-finite frequency");
        if (w <= 0.0 || w > cutoff_) return 0.0;
        double j = 0.0;
        for (const auto& t : lognormal_) {
            double u = std::log(w / t.omega);
            j += t.S / (t.sigma * std::sqrt(2.0 * std::numbers::pi)) * w *
                 std::exp(-u * u / (2.0 * t.sigma * t.sigma));
        }
        for (const auto& t : lorentzian_) {
            double dp = w + t.Omega, dm = w - t.Omega;
            j += 4.0 * t.gamma * t.Omega * t.g * (t.Omega * t.Omega + t.gamma * t.gamma) * w /
                 (std::numbers::pi * (t.gamma * t.gamma + dp * dp) * (t.gamma * t.gamma + dm * dm));
        }
        return j;
    }

    double cutoff() const { return cutoff_; }
    const std::vector<LogNormalTerm>& lognormal_terms() const { return lognormal_; }
    const std::vector<LorentzianTerm>& lorentzian_terms() const { return lorentzian_; }

    // eta = lim_{w->0+} J(w)/w. Log-normal terms vanish faster than any
    // power at zero, so only Lorentzians contribute.
    double slope_at_zero() const {
        double eta = 0.0;
        for (const auto& t : lorentzian_) {
            double q = t.gamma * t.gamma + t.Omega * t.Omega;
            eta += 4.0 * t.gamma * t.Omega * t.g * q / (std::numbers::pi * q * q);
        }
        return eta;
    }

    // Panel edges pinned to the narrow peaks; quadrature over (0, cutoff]
    // should always start from these.
    std::vector<double> breakpoints() const {
        std::vector<double> pts;
        for (const auto& t : lognormal_) pts.push_back(t.omega);
        for (const auto& t : lorentzian_) {
            pts.push_back(t.Omega - 5.0 * t.gamma);
            pts.push_back(t.Omega);
            pts.push_back(t.Omega + 5.0 * t.gamma);
        }
        return quad::clip_breakpoints(std::move(pts), 0.0, cutoff_);
    }

    // ∫_0^cutoff J(w) dw
    double total_mass(double abs_tol = 1e-10) const {
        return quad::integrate([this](double w) { return (*this)(w); }, breakpoints(), abs_tol).value;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["lognormal"] = nlohmann::json::array();
        for (const auto& t : lognormal_)
            j["lognormal"].push_back({{"S", t.S}, {"sigma", t.sigma}, {"omega", t.omega}});
        j["lorentzian"] = nlohmann::json::array();
        for (const auto& t : lorentzian_)
            j["lorentzian"].push_back({{"g", t.g}, {"gamma", t.gamma}, {"Omega", t.Omega}});
        j["cutoff"] = cutoff_;
        return j;
    }

    static SpectralDensity from_json(const nlohmann::json& j) {
        std::vector<LogNormalTerm> ln;
        std::vector<LorentzianTerm> lo;
        for (const auto& t : j.value("lognormal", nlohmann::json::array()))
            ln.push_back({t.at("S").get<double>(), t.at("sigma").get<double>(), t.at("omega").get<double>()});
        for (const auto& t : j.value("lorentzian", nlohmann::json::array()))
            lo.push_back({t.at("g").get<double>(), t.at("gamma").get<double>(), t.at("Omega").get<double>()});
        if (!j.contains("cutoff")) throw validation_error("spectral density JSON: missing 'cutoff'");
        return SpectralDensity(std::move(ln), std::move(lo), j.at("cutoff").get<double>());
    }

    // Pigment–protein density: three log-normal background terms plus three
    // Lorentzian peaks, hard cutoff at 350 cm^-1.
    static SpectralDensity wscp() {
        return SpectralDensity(
            {{0.39, 0.4, 26.0}, {0.23, 0.25, 51.0}, {0.23, 0.2, 85.0}},
            {{0.0173, 5.0, 181.0}, {0.0246, 5.0, 221.0}, {0.0182, 5.0, 240.0}}, 350.0);
    }

    // Background-only variant (no Lorentzian peaks).
    static SpectralDensity wscp_background() {
        return SpectralDensity({{0.39, 0.4, 26.0}, {0.23, 0.25, 51.0}, {0.23, 0.2, 85.0}}, {}, 350.0);
    }

private:
    std::vector<LogNormalTerm> lognormal_;
    std::vector<LorentzianTerm> lorentzian_;
    double cutoff_;
};

// Bose–Einstein occupation 1/(e^x - 1), stable for small x.
inline double bose_einstein(double x) { return 1.0 / std::expm1(x); }

// J extended to [-cutoff, cutoff] with the temperature weight
// (1 + coth(beta w / 2)) / 2. Evaluated through the occupation form
//   w > 0:  J(w) (1 + n(beta w))
//   w < 0:  J(|w|) n(beta |w|)
//   w = 0:  eta kB T   (continuous limit)
// which keeps detailed balance exact to rounding.
class ThermalizedSD {
public:
    ThermalizedSD(SpectralDensity base, double temperature_K)
        : base_(std::move(base)), temperature_(temperature_K) {
        if (temperature_K < 0.0 || !std::isfinite(temperature_K))
            throw std::domain_error("thermalize: temperature must be >= 0");
        beta_ = units::inverse_temperature(temperature_K);
    }

    double operator()(double w) const {
        if (!std::isfinite(w)) throw std::domain_error("ThermalizedSD: non-finite frequency");
        const double wc = base_.cutoff();
        if (w > wc || w < -wc) return 0.0;
        if (std::isinf(beta_)) return w > 0.0 ? base_(w) : 0.0;
        if (w == 0.0) return base_.slope_at_zero() * units::k_boltzmann * temperature_;
        if (w > 0.0) return base_(w) * (1.0 + bose_einstein(beta_ * w));
        return base_(-w) * bose_einstein(-beta_ * w);
    }

    const SpectralDensity& base() const { return base_; }
    double temperature() const { return temperature_; }
    double beta() const { return beta_; }

    // Support interval: [0, wc] at T = 0, [-wc, wc] otherwise.
    double support_min() const { return std::isinf(beta_) ? 0.0 : -base_.cutoff(); }
    double support_max() const { return base_.cutoff(); }

    std::vector<double> breakpoints() const {
        std::vector<double> pts = base_.breakpoints();
        if (!std::isinf(beta_)) {
            std::vector<double> sym;
            for (double p : pts) {
                sym.push_back(p);
                sym.push_back(-p);
            }
            return quad::clip_breakpoints(std::move(sym), -base_.cutoff(), base_.cutoff());
        }
        return pts;
    }

    // ∫ J_beta over the support; the square of the system-chain coupling.
    double total_mass(double abs_tol = 1e-10) const {
        return quad::integrate([this](double w) { return (*this)(w); }, breakpoints(), abs_tol).value;
    }

private:
    SpectralDensity base_;
    double temperature_;
    double beta_;
};

inline ThermalizedSD thermalize(const SpectralDensity& sd, double temperature_K) {
    return ThermalizedSD(sd, temperature_K);
}

// Two-time bath correlation S(t) = ∫_0^wc J(w) [e^{-iwt}(1+n_w) + e^{iwt} n_w] dw
// with t in ps. At T = 0 the occupation term is absent.
inline std::vector<std::complex<double>> correlation_function(
    const SpectralDensity& sd, double temperature_K, const std::vector<double>& times_ps,
    double abs_tol = 1e-9) {
    if (temperature_K < 0.0) throw std::domain_error("correlation_function: temperature must be >= 0");
    const double beta = units::inverse_temperature(temperature_K);
    std::vector<std::complex<double>> out;
    out.reserve(times_ps.size());
    for (double t : times_ps) {
        if (t < 0.0 || !std::isfinite(t))
            throw std::domain_error("correlation_function: times must be finite and >= 0");
        // pin panels to ~half an oscillation period so bisection starts sane
        std::vector<double> pts = sd.breakpoints();
        double phase_rate = units::rad_per_ps * t;
        if (phase_rate > 0.0)
            pts = quad::subdivide(pts, std::max(1.0, std::numbers::pi / phase_rate));
        auto integrand = [&](double w) -> std::complex<double> {
            double j = sd(w);
            double arg = w * phase_rate;
            std::complex<double> down(std::cos(arg), -std::sin(arg));
            if (std::isinf(beta)) return j * down;
            double n = bose_einstein(beta * w);
            return j * (down * (1.0 + n) + std::conj(down) * n);
        };
        out.push_back(quad::integrate(integrand, pts, abs_tol).value);
    }
    return out;
}

}  // namespace ttedopa
