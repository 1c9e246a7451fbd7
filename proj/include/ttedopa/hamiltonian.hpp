// hamiltonian.hpp — Assembly of the system-plus-chain lattice Hamiltonian
//
// Maps a model and its per-bath chain coefficients onto a one-dimensional
// site layout with one- and two-site terms only. Dimer layout places the two
// TLSs adjacent, the left chain reversed to their left and the right chain
// to their right, so every term is nearest-neighbor:
//   c^L_{N-1} ... c^L_0  TLS_L  TLS_R  c^R_0 ... c^R_{N-1}

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ttedopa/chain.hpp"
#include "ttedopa/errors.hpp"
#include "ttedopa/model.hpp"
#include "ttedopa/operators.hpp"

namespace ttedopa {

struct ChainHamiltonian {
    std::vector<int> dims;                       // per-site local dimensions
    std::vector<Eigen::MatrixXcd> one_site;      // per-site term (may be zero)
    std::vector<Eigen::MatrixXcd> two_site;      // per-bond term on (i, i+1)
    std::vector<int> system_sites;               // MPS indices of the TLS site(s)
    std::vector<std::vector<int>> chain_sites;   // [bath][n] -> MPS site index
    ModelSpec model;

    std::size_t n_sites() const { return dims.size(); }

    // Hermiticity residual across all terms; construction keeps it at rounding.
    double hermiticity_residual() const {
        double r = 0.0;
        for (const auto& h : one_site) r = std::max(r, (h - h.adjoint()).norm());
        for (const auto& h : two_site) r = std::max(r, (h - h.adjoint()).norm());
        return r;
    }
};

namespace detail {

inline void check_dims(const ChainCoefficients& coeffs, const std::vector<int>& dims) {
    if (dims.size() != coeffs.size())
        throw validation_error("assemble_chain: local_dims length must equal chain length");
    for (int d : dims)
        if (d < 2) throw std::domain_error("assemble_chain: local dimensions must be >= 2");
}

}  // namespace detail

// Dephasing TLS: site 0 is the TLS, chain sites follow in order.
// Dimer: both chains extend outward from the adjacent TLS pair.
inline ChainHamiltonian assemble_chain(const ModelSpec& model,
                                       const std::vector<ChainCoefficients>& chains,
                                       const std::vector<std::vector<int>>& local_dims) {
    model.validate();
    if (chains.size() != model.baths.size() || local_dims.size() != model.baths.size())
        throw validation_error("assemble_chain: one coefficient set and one dim schedule per bath");
    for (std::size_t b = 0; b < chains.size(); ++b) detail::check_dims(chains[b], local_dims[b]);

    ChainHamiltonian ham;
    ham.model = model;

    if (model.kind == ModelKind::dephasing_tls) {
        const auto& c = chains[0];
        const auto& dims = local_dims[0];
        const std::size_t n = c.size();
        ham.dims.push_back(2);
        for (std::size_t k = 0; k < n; ++k) ham.dims.push_back(dims[k]);
        ham.system_sites = {0};
        ham.chain_sites.resize(1);
        for (std::size_t k = 0; k < n; ++k) ham.chain_sites[0].push_back(int(k) + 1);

        ham.one_site.resize(ham.n_sites());
        ham.one_site[0] = 0.5 * model.epsilon * ops::sigma_z();
        for (std::size_t k = 0; k < n; ++k)
            ham.one_site[k + 1] = c.omegas[k] * ops::number(dims[k]);

        ham.two_site.resize(ham.n_sites() - 1);
        ham.two_site[0] = c.kappas[0] * ops::kron(ops::excited_projector(), ops::position(dims[0]));
        for (std::size_t k = 1; k < n; ++k) {
            auto al = ops::annihilator(dims[k - 1]);
            auto ar = ops::annihilator(dims[k]);
            ham.two_site[k] = c.kappas[k] * (ops::kron(al.adjoint(), ar) + ops::kron(al, ar.adjoint()));
        }
        return ham;
    }

    // dimer
    const auto& cl = chains[0];
    const auto& cr = chains[1];
    const auto& dl = local_dims[0];
    const auto& dr = local_dims[1];
    const std::size_t nl = cl.size(), nr = cr.size();

    // site layout
    for (std::size_t k = 0; k < nl; ++k) ham.dims.push_back(dl[nl - 1 - k]);  // reversed left chain
    ham.dims.push_back(2);
    ham.dims.push_back(2);
    for (std::size_t k = 0; k < nr; ++k) ham.dims.push_back(dr[k]);
    const int tls_l = int(nl), tls_r = int(nl) + 1;
    ham.system_sites = {tls_l, tls_r};
    ham.chain_sites.resize(2);
    for (std::size_t k = 0; k < nl; ++k) ham.chain_sites[0].push_back(int(nl - 1 - k));
    for (std::size_t k = 0; k < nr; ++k) ham.chain_sites[1].push_back(tls_r + 1 + int(k));

    ham.one_site.resize(ham.n_sites());
    ham.one_site[tls_l] = Eigen::MatrixXcd::Zero(2, 2);
    ham.one_site[tls_r] = Eigen::MatrixXcd::Zero(2, 2);
    for (std::size_t k = 0; k < nl; ++k)
        ham.one_site[ham.chain_sites[0][k]] = cl.omegas[k] * ops::number(dl[k]);
    for (std::size_t k = 0; k < nr; ++k)
        ham.one_site[ham.chain_sites[1][k]] = cr.omegas[k] * ops::number(dr[k]);

    ham.two_site.resize(ham.n_sites() - 1);
    for (auto& t : ham.two_site) t = Eigen::MatrixXcd();  // filled below

    // left chain hops: bond between chain sites (k, k-1) at MPS (nl-1-k, nl-k)
    for (std::size_t k = 1; k < nl; ++k) {
        auto ak = ops::annihilator(dl[k]);       // left MPS site: chain k
        auto akm = ops::annihilator(dl[k - 1]);  // right MPS site: chain k-1
        ham.two_site[nl - 1 - k] = cl.kappas[k] * (ops::kron(ak.adjoint(), akm) + ops::kron(ak, akm.adjoint()));
    }
    // left coupling on (c^L_0, TLS_L)
    ham.two_site[tls_l - 1] = cl.kappas[0] * ops::kron(ops::position(dl[0]), ops::excited_projector());
    // cross coupling on the TLS pair
    ham.two_site[tls_l] = model.lambda * (ops::kron(ops::sigma_plus(), ops::sigma_minus()) +
                                          ops::kron(ops::sigma_minus(), ops::sigma_plus()));
    // right coupling on (TLS_R, c^R_0)
    ham.two_site[tls_r] = cr.kappas[0] * ops::kron(ops::excited_projector(), ops::position(dr[0]));
    // right chain hops
    for (std::size_t k = 1; k < nr; ++k) {
        auto akm = ops::annihilator(dr[k - 1]);
        auto ak = ops::annihilator(dr[k]);
        ham.two_site[ham.chain_sites[1][k - 1]] =
            cr.kappas[k] * (ops::kron(akm.adjoint(), ak) + ops::kron(akm, ak.adjoint()));
    }
    for (std::size_t b = 0; b < ham.two_site.size(); ++b)
        if (ham.two_site[b].size() == 0)
            ham.two_site[b] = Eigen::MatrixXcd::Zero(ham.dims[b] * ham.dims[b + 1], ham.dims[b] * ham.dims[b + 1]);
    return ham;
}

}  // namespace ttedopa
