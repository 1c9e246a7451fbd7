// diagnostics.hpp — Pre-simulation estimators
//
// thermal_occupation: per-site thermal occupation of a mapped chain via the
// normal modes of its tridiagonal single-particle matrix; what a mixed-state
// simulation would have to represent.
// estimate_chain_length: single-excitation quantum walk on the chain,
// detecting end-reflection contamination at the first site by comparing
// chains of length M and 2M.
// local_dimension_schedule: linearly decreasing Fock truncation along the
// chain.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ttedopa/chain.hpp"
#include "ttedopa/errors.hpp"
#include "ttedopa/spectral.hpp"
#include "ttedopa/tridiag.hpp"
#include "ttedopa/units.hpp"

namespace ttedopa {

struct OccupationProfile {
    std::vector<double> occupations;  // <c_n^dag c_n> per site
    double temperature = 0.0;         // Kelvin
};

// Thermal occupation of the first n_sites chain oscillators at temperature
// T: diagonalize the tridiagonal mode matrix, Bose-Einstein occupation per
// normal mode, map back through the squared eigenvector components.
inline OccupationProfile thermal_occupation(const ChainCoefficients& coeffs, double temperature_K,
                                            std::size_t n_sites) {
    if (temperature_K < 0.0) throw std::domain_error("thermal_occupation: temperature must be >= 0");
    if (n_sites < 1 || n_sites > coeffs.size())
        throw validation_error("thermal_occupation: need 1 <= N <= coefficient count");

    OccupationProfile prof;
    prof.temperature = temperature_K;
    prof.occupations.assign(n_sites, 0.0);
    if (temperature_K == 0.0) return prof;  // vacuum

    std::vector<double> diag(coeffs.omegas.begin(), coeffs.omegas.begin() + n_sites);
    std::vector<double> off(coeffs.kappas.begin() + 1, coeffs.kappas.begin() + n_sites);
    auto eig = tridiag_eigen(diag, off);

    const double beta = units::inverse_temperature(temperature_K);
    std::vector<double> mode_occ(n_sites);
    for (std::size_t k = 0; k < n_sites; ++k) {
        // modes at or below zero (1e-12 floor against roundoff) have no
        // thermal state
        if (eig.values[k] <= 1e-12)
            throw std::domain_error("thermal_occupation: normal mode " + std::to_string(k) +
                                    " is non-positive (" + std::to_string(eig.values[k]) +
                                    " cm^-1); thermal state undefined");
        mode_occ[k] = bose_einstein(beta * eig.values[k]);
    }
    for (std::size_t n = 0; n < n_sites; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_sites; ++k) {
            double u = eig.vec(n, k);
            acc += u * u * mode_occ[k];
        }
        prof.occupations[n] = acc;
    }
    return prof;
}

// Fock-space truncation suggested by an occupation profile: at least the
// ceil(occupation) lowest levels are occupied; the safety factor covers the
// spread above the mean (default 4, a configuration choice).
inline std::vector<int> suggested_local_dims(const OccupationProfile& prof, double safety = 4.0) {
    std::vector<int> dims;
    dims.reserve(prof.occupations.size());
    for (double occ : prof.occupations)
        dims.push_back(std::max(2, int(std::ceil(safety * occ)) + 1));
    return dims;
}

struct WalkProfile {
    std::vector<double> t_ps;
    std::size_t n_sites = 0;
    std::vector<std::vector<double>> prob;  // prob[n][time] = |alpha_n(t)|^2

    double norm_at(std::size_t it) const {
        double s = 0.0;
        for (const auto& site : prob) s += site[it];
        return s;
    }
};

// Single-excitation evolution |psi(0)> = |n=0> under the chain-only
// tridiagonal Hamiltonian (site energies + hops; the system coupling is
// removed). Exact through the eigendecomposition.
inline WalkProfile quantum_walk(const ChainCoefficients& coeffs, std::size_t n_sites,
                                const std::vector<double>& times_ps) {
    if (n_sites < 1 || n_sites > coeffs.size())
        throw validation_error("quantum_walk: need 1 <= M <= coefficient count");
    std::vector<double> diag(coeffs.omegas.begin(), coeffs.omegas.begin() + n_sites);
    std::vector<double> off(coeffs.kappas.begin() + 1, coeffs.kappas.begin() + n_sites);
    auto eig = tridiag_eigen(diag, off);

    WalkProfile wp;
    wp.t_ps = times_ps;
    wp.n_sites = n_sites;
    wp.prob.assign(n_sites, std::vector<double>(times_ps.size(), 0.0));
    for (std::size_t it = 0; it < times_ps.size(); ++it) {
        const double scale = units::rad_per_ps * times_ps[it];
        for (std::size_t n = 0; n < n_sites; ++n) {
            std::complex<double> amp = 0.0;
            for (std::size_t k = 0; k < n_sites; ++k) {
                double a = eig.values[k] * scale;
                amp += eig.vec(n, k) * eig.vec(0, k) * std::complex<double>(std::cos(a), -std::sin(a));
            }
            wp.prob[n][it] = std::norm(amp);
        }
    }
    return wp;
}

struct ChainLengthOptions {
    double return_threshold = 1e-6;  // allowed site-0 probability contamination
    std::size_t floor = 2;
    std::size_t cap = 2000;
    std::size_t time_samples = 400;
};

// Smallest chain length M such that reflection off the chain end does not
// reach the first site with probability above the threshold within t_max:
// the site-0 return probability of the length-M walk is compared against
// the length-2M walk, whose end reflection arrives much later.
inline std::size_t estimate_chain_length(const ChainCoefficients& coeffs, double t_max_ps,
                                         const ChainLengthOptions& opt = {}) {
    if (t_max_ps < 0.0) throw validation_error("estimate_chain_length: t_max must be >= 0");
    if (!(opt.return_threshold > 0.0 && opt.return_threshold < 1.0))
        throw validation_error("estimate_chain_length: return_threshold must be in (0, 1)");
    if (t_max_ps == 0.0) return opt.floor;

    std::vector<double> times(opt.time_samples);
    for (std::size_t i = 0; i < times.size(); ++i)
        times[i] = t_max_ps * double(i + 1) / double(times.size());

    std::size_t m = opt.floor;
    while (true) {
        if (m > opt.cap)
            throw numerical_error("estimate_chain_length: no convergence up to M = " +
                                  std::to_string(opt.cap));
        if (2 * m > coeffs.size())
            throw numerical_error("estimate_chain_length: coefficient table exhausted at M = " +
                                  std::to_string(m) + " (need 2M = " + std::to_string(2 * m) + ")");
        auto ref = quantum_walk(coeffs, 2 * m, times);
        auto cur = quantum_walk(coeffs, m, times);
        double divergence = 0.0;
        for (std::size_t it = 0; it < times.size(); ++it)
            divergence = std::max(divergence, std::abs(cur.prob[0][it] - ref.prob[0][it]));
        if (divergence < opt.return_threshold) return m;
        m = std::max(m + 1, m + (m + 3) / 4);  // grow ~25%
    }
}

// Linearly decreasing local dimension d(n) = round(d_max - n (d_max - 2)/N),
// clamped to >= 2; endpoint value at n = N is exactly 2.
inline int schedule_value(int d_max, std::size_t n_sites, std::size_t n) {
    if (d_max < 2) throw validation_error("local_dimension_schedule: d_max must be >= 2");
    if (n_sites < 1) throw validation_error("local_dimension_schedule: N must be >= 1");
    double v = d_max - double(n) * (d_max - 2) / double(n_sites);
    return std::max(2, int(std::lround(v)));
}

inline std::vector<int> local_dimension_schedule(int d_max, std::size_t n_sites) {
    std::vector<int> dims(n_sites);
    for (std::size_t n = 0; n < n_sites; ++n) dims[n] = schedule_value(d_max, n_sites, n);
    return dims;
}

}  // namespace ttedopa
