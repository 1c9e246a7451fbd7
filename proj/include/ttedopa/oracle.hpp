// oracle.hpp — Independent verification backends
//
// dephasing_coherence: the exactly solvable pure-dephasing coherence decay,
// by adaptive quadrature of the decoherence integral.
// ed_evolve: dense eigendecomposition evolution of small truncated
// system-chain instances, producing the same observable columns as the
// tensor-network engine.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ttedopa/errors.hpp"
#include "ttedopa/hamiltonian.hpp"
#include "ttedopa/quadrature.hpp"
#include "ttedopa/spectral.hpp"
#include "ttedopa/tebd.hpp"
#include "ttedopa/timeseries.hpp"
#include "ttedopa/units.hpp"

namespace ttedopa {

struct DecoherenceCurve {
    std::vector<double> t_ps;
    std::vector<double> gamma;  // decoherence exponent, dimensionless
    std::vector<double> theta;  // exp(-gamma)/2 for the |+> initial state
};

namespace detail {

inline double coth_stable(double x) {
    if (std::abs(x) < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

// (1 - cos x) without cancellation
inline double one_minus_cos(double x) {
    double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

}  // namespace detail

// gamma(t) = int_0^wc J(w) coth(beta w / 2) (1 - cos wt) / w^2 dw, with the
// coth factor equal to 1 at T = 0. The w -> 0 limit of the integrand is
// finite for densities with finite reorganization energy.
inline DecoherenceCurve dephasing_coherence(const SpectralDensity& sd, double temperature_K,
                                            const std::vector<double>& times_ps,
                                            double abs_tol = 1e-10, int order = 15) {
    if (temperature_K < 0.0) throw std::domain_error("dephasing_coherence: temperature must be >= 0");
    const double beta = units::inverse_temperature(temperature_K);
    DecoherenceCurve curve;
    curve.t_ps = times_ps;
    curve.gamma.reserve(times_ps.size());
    curve.theta.reserve(times_ps.size());
    for (double t : times_ps) {
        if (t < 0.0 || !std::isfinite(t))
            throw std::domain_error("dephasing_coherence: times must be finite and >= 0");
        const double phase_rate = units::rad_per_ps * t;
        std::vector<double> pts = sd.breakpoints();
        if (phase_rate > 0.0)
            pts = quad::subdivide(pts, std::max(1.0, std::numbers::pi / phase_rate));
        auto integrand = [&](double w) {
            double cothf = std::isinf(beta) ? 1.0 : detail::coth_stable(0.5 * beta * w);
            return sd(w) * cothf * detail::one_minus_cos(w * phase_rate) / (w * w);
        };
        double g = quad::integrate(integrand, pts, abs_tol, order).value;
        curve.gamma.push_back(g);
        curve.theta.push_back(0.5 * std::exp(-g));
    }
    return curve;
}

// Operator embedded on one lattice site (identities elsewhere), site-0-major
// index convention.
inline Eigen::MatrixXcd dense_embed_one(const std::vector<int>& dims, std::size_t site,
                                        const Eigen::MatrixXcd& op) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t i = 0; i < dims.size(); ++i)
        acc = ops::kron(acc, i == site ? op : Eigen::MatrixXcd(ops::identity(dims[i])));
    return acc;
}

inline Eigen::MatrixXcd dense_embed_two(const std::vector<int>& dims, std::size_t bond,
                                        const Eigen::MatrixXcd& op) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i == bond) {
            acc = ops::kron(acc, op);
            ++i;  // op covers (bond, bond+1)
        } else {
            acc = ops::kron(acc, ops::identity(dims[i]));
        }
    }
    return acc;
}

// Dense reference evolution: builds the full Hamiltonian on the truncated
// product space and evolves by eigendecomposition (time-independent H, so
// arbitrary output times cost one decomposition).
class EDInstance {
public:
    explicit EDInstance(const ChainHamiltonian& ham, std::size_t dim_cap = 4096) : ham_(ham) {
        std::size_t dim = 1;
        for (int d : ham.dims) {
            dim *= std::size_t(d);
            if (dim > dim_cap)
                throw validation_error("ed_evolve: Hilbert dimension " + std::to_string(dim) +
                                       "+ exceeds cap " + std::to_string(dim_cap));
        }
        dim_ = dim;

        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        for (std::size_t i = 0; i < ham.n_sites(); ++i)
            if (ham.one_site[i].size() > 0) h += dense_embed_one(ham.dims, i, ham.one_site[i]);
        for (std::size_t b = 0; b + 1 < ham.n_sites(); ++b)
            if (ham.two_site[b].size() > 0) h += dense_embed_two(ham.dims, b, ham.two_site[b]);
        h_ = h;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        if (es.info() != Eigen::Success)
            throw numerical_error("ed_evolve: eigendecomposition failed");
        evals_ = es.eigenvalues();
        evecs_ = es.eigenvectors();

        psi0_ = initial_state();
    }

    std::size_t dim() const { return dim_; }
    const Eigen::MatrixXcd& hamiltonian_matrix() const { return h_; }
    const Eigen::VectorXcd& initial() const { return psi0_; }

    Eigen::VectorXcd state_at(double t_ps) const {
        Eigen::VectorXcd coeff = evecs_.adjoint() * psi0_;
        const double scale = units::rad_per_ps * t_ps;
        for (int k = 0; k < coeff.size(); ++k) {
            double a = evals_(k) * scale;
            coeff(k) *= std::complex<double>(std::cos(a), -std::sin(a));
        }
        return evecs_ * coeff;
    }

    double energy(const Eigen::VectorXcd& psi) const { return (psi.adjoint() * h_ * psi)(0).real(); }

    double observe(const Eigen::VectorXcd& psi, const Observable& o) const {
        using K = Observable::Kind;
        switch (o.kind) {
            case K::sigma_x: return expect(psi, dense_embed_one(ham_.dims, o.site, ops::sigma_x()));
            case K::sigma_y: return expect(psi, dense_embed_one(ham_.dims, o.site, ops::sigma_y()));
            case K::sigma_z: return expect(psi, dense_embed_one(ham_.dims, o.site, ops::sigma_z()));
            case K::coherence: {
                Eigen::MatrixXcd ge = Eigen::MatrixXcd::Zero(2, 2);
                ge(0, 1) = 1.0;  // |g><e|
                auto v = (psi.adjoint() * dense_embed_one(ham_.dims, o.site, ge) * psi)(0);
                return std::abs(v);
            }
            case K::p_plus:
                return expect(psi, dense_embed_two(ham_.dims, o.site, ops::dimer_plus_projector()));
            case K::occupation:
                return expect(psi, dense_embed_one(ham_.dims, o.site, ops::number(ham_.dims[o.site])));
        }
        return 0.0;
    }

    TimeSeries evolve(const EvolutionConfig& cfg) const {
        cfg.validate();
        std::vector<Observable> obs;
        for (const auto& s : cfg.observables) obs.push_back(Observable::parse(s, ham_));
        TimeSeries ts;
        for (const auto& o : obs) ts.columns.push_back(o.name);
        ts.values.resize(obs.size());
        const long n_steps = std::lround(cfg.t_max / cfg.dt);
        for (long step = 0; step <= n_steps; ++step) {
            if (step != 0 && step % cfg.sampling_stride != 0 && step != n_steps) continue;
            Eigen::VectorXcd psi = state_at(step * cfg.dt);
            ts.t_ps.push_back(step * cfg.dt);
            for (std::size_t c = 0; c < obs.size(); ++c) ts.values[c].push_back(observe(psi, obs[c]));
            ts.discarded_weight.push_back(0.0);
            ts.max_bond_dim.push_back(1.0);
        }
        return ts;
    }

private:
    double expect(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& op) const {
        return (psi.adjoint() * op * psi)(0).real();
    }

    Eigen::VectorXcd initial_state() const {
        const auto& model = ham_.model;
        std::vector<Eigen::VectorXcd> locals;
        for (std::size_t i = 0; i < ham_.n_sites(); ++i) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(ham_.dims[i]);
            v(0) = 1.0;
            locals.push_back(v);
        }
        if (model.kind == ModelKind::dephasing_tls) {
            Eigen::VectorXcd plus(2);
            plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
            locals[ham_.system_sites[0]] = plus;
            return kron_all(locals);
        }
        // dimer: treat the TLS pair as a single factor
        double sign = model.initial_state == "minus_D" ? -1.0 : 1.0;
        Eigen::VectorXcd pair = Eigen::VectorXcd::Zero(4);
        pair(1 * 2 + 0) = 1.0 / std::sqrt(2.0);
        pair(0 * 2 + 1) = sign / std::sqrt(2.0);
        Eigen::VectorXcd acc = Eigen::VectorXcd::Ones(1);
        for (std::size_t i = 0; i < ham_.n_sites(); ++i) {
            if (int(i) == ham_.system_sites[0]) {
                acc = kron_vec(acc, pair);
                ++i;
            } else {
                acc = kron_vec(acc, locals[i]);
            }
        }
        return acc;
    }

    static Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
        Eigen::VectorXcd out(a.size() * b.size());
        for (int i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
        return out;
    }

    static Eigen::VectorXcd kron_all(const std::vector<Eigen::VectorXcd>& locals) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Ones(1);
        for (const auto& v : locals) acc = kron_vec(acc, v);
        return acc;
    }

    ChainHamiltonian ham_;
    std::size_t dim_ = 0;
    Eigen::MatrixXcd h_;
    Eigen::VectorXd evals_;
    Eigen::MatrixXcd evecs_;
    Eigen::VectorXcd psi0_;
};

inline TimeSeries ed_evolve(const ChainHamiltonian& ham, const EvolutionConfig& cfg,
                            std::size_t dim_cap = 4096) {
    return EDInstance(ham, dim_cap).evolve(cfg);
}

}  // namespace ttedopa
