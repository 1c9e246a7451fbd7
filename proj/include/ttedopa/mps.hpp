// mps.hpp — Matrix-product state in right-canonical (B, lambda) form
//
// Site tensors are stored as one (dl x dr) matrix per physical index, kept
// right-canonical; lambda[i] holds the Schmidt values on bond (i, i+1).
// Two-site gates use the inverse-free update: the gate is applied to the
// bare B_i B_{i+1} product, the SVD runs on the lambda-weighted version,
// and the new left tensor is recovered by contracting with V instead of
// dividing by the left Schmidt values.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ttedopa/errors.hpp"

namespace ttedopa {

class MPS {
public:
    using Matrix = Eigen::MatrixXcd;

    struct GateResult {
        double discarded_weight = 0.0;  // relative to the pre-truncation weight
        int bond_dim = 1;
    };

    MPS() = default;

    // Product state: one normalized local state vector per site.
    static MPS product_state(const std::vector<int>& dims,
                             const std::vector<Eigen::VectorXcd>& local_states) {
        if (dims.size() != local_states.size())
            throw validation_error("MPS::product_state: dims/states length mismatch");
        MPS psi;
        psi.dims_ = dims;
        psi.sites_.resize(dims.size());
        for (std::size_t i = 0; i < dims.size(); ++i) {
            if (local_states[i].size() != dims[i])
                throw validation_error("MPS::product_state: state dimension mismatch at site " + std::to_string(i));
            auto& blocks = psi.sites_[i];
            blocks.resize(dims[i]);
            for (int s = 0; s < dims[i]; ++s) {
                blocks[s] = Matrix::Constant(1, 1, local_states[i](s));
            }
        }
        psi.lambdas_.assign(dims.size() > 0 ? dims.size() - 1 : 0, Eigen::VectorXd::Ones(1));
        return psi;
    }

    std::size_t n_sites() const { return dims_.size(); }
    const std::vector<int>& dims() const { return dims_; }

    int bond_dim(std::size_t bond) const { return int(lambdas_[bond].size()); }
    int max_bond_dim() const {
        int m = 1;
        for (const auto& l : lambdas_) m = std::max(m, int(l.size()));
        return m;
    }

    const Eigen::VectorXd& schmidt_values(std::size_t bond) const { return lambdas_[bond]; }

    double entanglement_entropy(std::size_t bond) const {
        double s = 0.0;
        for (double l : lambdas_[bond]) {
            double p = l * l;
            if (p > 1e-300) s -= p * std::log(p);
        }
        return s;
    }

    // Exact <psi|psi> by full contraction (independent of canonical form).
    double norm_squared() const {
        Matrix r = Matrix::Identity(1, 1);
        for (std::size_t i = n_sites(); i-- > 0;) {
            const auto& blocks = sites_[i];
            Matrix next = Matrix::Zero(blocks[0].rows(), blocks[0].rows());
            for (const auto& b : blocks) next += b * r * b.adjoint();
            r = std::move(next);
        }
        return r(0, 0).real();
    }

    // Max deviation from right-canonical form over all sites (test hook).
    double canonical_residual() const {
        double worst = 0.0;
        for (const auto& blocks : sites_) {
            Matrix acc = Matrix::Zero(blocks[0].rows(), blocks[0].rows());
            for (const auto& b : blocks) acc += b * b.adjoint();
            worst = std::max(worst, (acc - Matrix::Identity(acc.rows(), acc.cols())).norm());
        }
        return worst;
    }

    // Reduced density matrix of one site: rho(s, s') = <s|rho|s'>.
    Matrix reduced_density_one(std::size_t site) const {
        const auto& blocks = sites_[site];
        const int d = dims_[site];
        Eigen::VectorXd lam2 = left_weights(site);
        Matrix rho(d, d);
        for (int s = 0; s < d; ++s)
            for (int sp = 0; sp < d; ++sp)
                rho(s, sp) = (lam2.asDiagonal() * blocks[s] * blocks[sp].adjoint()).trace();
        return rho;
    }

    // Reduced density matrix of the adjacent pair (site, site+1),
    // composite index s_left * d_right + s_right.
    Matrix reduced_density_two(std::size_t site) const {
        const int d1 = dims_[site], d2 = dims_[site + 1];
        Eigen::VectorXd lam2 = left_weights(site);
        std::vector<Matrix> theta(d1 * d2);
        for (int s1 = 0; s1 < d1; ++s1)
            for (int s2 = 0; s2 < d2; ++s2)
                theta[s1 * d2 + s2] = sites_[site][s1] * sites_[site + 1][s2];
        Matrix rho(d1 * d2, d1 * d2);
        for (int a = 0; a < d1 * d2; ++a)
            for (int b = 0; b < d1 * d2; ++b)
                rho(a, b) = (lam2.asDiagonal() * theta[a] * theta[b].adjoint()).trace();
        return rho;
    }

    std::complex<double> expectation_one(std::size_t site, const Matrix& op) const {
        return (op * reduced_density_one(site)).trace();
    }

    // Expectation of a product of two local operators; sites must be
    // adjacent or equal.
    std::complex<double> expectation_product(std::size_t site_a, const Matrix& op_a,
                                             std::size_t site_b, const Matrix& op_b) const {
        if (site_a == site_b) return expectation_one(site_a, op_a * op_b);
        if (site_b != site_a + 1)
            throw unsupported_error("expectation_product: observables must act on adjacent sites");
        Matrix op(op_a.rows() * op_b.rows(), op_a.cols() * op_b.cols());
        for (int i = 0; i < op_a.rows(); ++i)
            for (int j = 0; j < op_a.cols(); ++j)
                op.block(i * op_b.rows(), j * op_b.cols(), op_b.rows(), op_b.cols()) = op_a(i, j) * op_b;
        return expectation_two(site_a, op);
    }

    std::complex<double> expectation_two(std::size_t site, const Matrix& op) const {
        return (op * reduced_density_two(site)).trace();
    }

    // Apply a two-site gate on bond (site, site+1) with SVD truncation.
    GateResult apply_two_site_gate(std::size_t site, const Matrix& gate, int chi_max,
                                   double svd_cutoff) {
        const int d1 = dims_[site], d2 = dims_[site + 1];
        auto& b1 = sites_[site];
        auto& b2 = sites_[site + 1];
        const int dl = int(b1[0].rows());
        const int dr = int(b2[0].cols());

        // C(s1,s2) = sum_t gate[(s1 s2),(t1 t2)] B1[t1] B2[t2]
        std::vector<Matrix> theta(d1 * d2);
        for (int t1 = 0; t1 < d1; ++t1)
            for (int t2 = 0; t2 < d2; ++t2) theta[t1 * d2 + t2] = b1[t1] * b2[t2];
        std::vector<Matrix> c(d1 * d2, Matrix::Zero(dl, dr));
        for (int a = 0; a < d1 * d2; ++a)
            for (int t = 0; t < d1 * d2; ++t) {
                const std::complex<double> g = gate(a, t);
                if (g != 0.0) c[a] += g * theta[t];
            }

        // lambda-weighted two-site matrix, rows (s1, l), cols (s2, r)
        Eigen::VectorXd lam = (site == 0) ? Eigen::VectorXd::Ones(dl) : lambdas_[site - 1];
        Matrix m(d1 * dl, d2 * dr);
        for (int s1 = 0; s1 < d1; ++s1)
            for (int s2 = 0; s2 < d2; ++s2)
                m.block(s1 * dl, s2 * dr, dl, dr) = lam.asDiagonal() * c[s1 * d2 + s2];

        Matrix u, v;
        Eigen::VectorXd sv;
        if (std::min(m.rows(), m.cols()) <= 48) {
            Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
            sv = svd.singularValues();
            v = svd.matrixV();
        } else {
            Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
            sv = svd.singularValues();
            v = svd.matrixV();
        }

        const double total = sv.squaredNorm();
        if (!(total > 0.0) || !std::isfinite(total))
            throw numerical_error("MPS gate update produced non-finite tensor entries");

        // keep the smallest rank whose discarded relative weight stays
        // within svd_cutoff, capped at chi_max
        int keep = int(sv.size());
        double discarded = 0.0;
        while (keep > 1) {
            double w = sv(keep - 1) * sv(keep - 1);
            if (discarded + w > svd_cutoff * total) break;
            discarded += w;
            --keep;
        }
        if (keep > chi_max) {
            for (int k = chi_max; k < keep; ++k) discarded += sv(k) * sv(k);
            keep = chi_max;
        }
        const double kept = total - discarded;

        lambdas_[site] = sv.head(keep) / std::sqrt(kept);

        // new right tensor: rows of V^dagger
        std::vector<Matrix> nb2(d2);
        for (int s2 = 0; s2 < d2; ++s2)
            nb2[s2] = v.block(s2 * dr, 0, dr, keep).transpose().conjugate().eval();

        // new left tensor: C V, renormalized by the kept weight
        std::vector<Matrix> nb1(d1);
        const double scale = 1.0 / std::sqrt(kept);
        for (int s1 = 0; s1 < d1; ++s1) {
            Matrix acc = Matrix::Zero(dl, keep);
            for (int s2 = 0; s2 < d2; ++s2) acc += c[s1 * d2 + s2] * v.block(s2 * dr, 0, dr, keep);
            nb1[s1] = scale * acc;
        }
        b1 = std::move(nb1);
        b2 = std::move(nb2);
        return {discarded / total, keep};
    }

    // Direct access for oracles/tests.
    const std::vector<Matrix>& site_tensors(std::size_t i) const { return sites_[i]; }

    // Dense state vector; refuses above the exact-diagonalization scale.
    Eigen::VectorXcd dense_state(std::size_t cap = 1 << 14) const {
        std::size_t dim = 1;
        for (int d : dims_) {
            dim *= std::size_t(d);
            if (dim > cap) throw validation_error("dense_state: Hilbert dimension exceeds cap");
        }
        // accumulate left-to-right; state has shape (flattened physical, bond)
        Matrix state = Matrix::Identity(1, 1);
        for (std::size_t i = 0; i < n_sites(); ++i) {
            const auto& blocks = sites_[i];
            const int d = dims_[i];
            Matrix next(state.rows() * d, blocks[0].cols());
            for (int s = 0; s < d; ++s) {
                // row layout: earlier indices major, current site minor
                Matrix chunk = state * blocks[s];
                for (int r = 0; r < state.rows(); ++r) next.row(r * d + s) = chunk.row(r);
            }
            state = std::move(next);
        }
        return Eigen::VectorXcd(state.col(0));
    }

private:
    Eigen::VectorXd left_weights(std::size_t site) const {
        if (site == 0) return Eigen::VectorXd::Ones(sites_[0][0].rows());
        Eigen::VectorXd lam2 = lambdas_[site - 1];
        return lam2.array().square().matrix();
    }

    std::vector<int> dims_;
    std::vector<std::vector<Matrix>> sites_;
    std::vector<Eigen::VectorXd> lambdas_;

    friend MPS init_vacuum_state(const std::vector<int>&, const std::vector<Eigen::VectorXcd>&,
                                 int, const Eigen::VectorXcd&);
};

// Product state except for one adjacent pair prepared in an arbitrary
// two-site pure state (Schmidt-decomposed across the central bond).
inline MPS init_vacuum_state(const std::vector<int>& dims,
                             const std::vector<Eigen::VectorXcd>& local_states, int pair_site,
                             const Eigen::VectorXcd& pair_state) {
    MPS psi = MPS::product_state(dims, local_states);
    if (pair_site < 0) return psi;
    const int d1 = dims[pair_site], d2 = dims[pair_site + 1];
    if (pair_state.size() != d1 * d2)
        throw validation_error("init_vacuum_state: pair state dimension mismatch");
    Eigen::MatrixXcd m(d1, d2);
    for (int s1 = 0; s1 < d1; ++s1)
        for (int s2 = 0; s2 < d2; ++s2) m(s1, s2) = pair_state(s1 * d2 + s2);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    int keep = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > 1e-14) ++keep;
    keep = std::max(keep, 1);
    psi.lambdas_[pair_site] = sv.head(keep);
    auto& left = psi.sites_[pair_site];
    auto& right = psi.sites_[pair_site + 1];
    for (int s = 0; s < d1; ++s) {
        left[s] = Eigen::MatrixXcd(1, keep);
        for (int k = 0; k < keep; ++k) left[s](0, k) = svd.matrixU()(s, k) * sv(k);
    }
    for (int s = 0; s < d2; ++s) {
        right[s] = Eigen::MatrixXcd(keep, 1);
        for (int k = 0; k < keep; ++k) right[s](k, 0) = std::conj(svd.matrixV()(s, k));
    }
    return psi;
}

}  // namespace ttedopa
