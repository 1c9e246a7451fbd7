// operators.hpp — Dense local operators on truncated site spaces
//
// TLS basis convention: index 0 = |g>, 1 = |e>, sigma_z = diag(-1, +1),
// so the bath coupling (1 + sigma_z)/2 projects onto the excited state.

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "ttedopa/errors.hpp"

namespace ttedopa::ops {

using Eigen::MatrixXcd;

inline MatrixXcd identity(int d) { return MatrixXcd::Identity(d, d); }

// Bosonic annihilator on a d-level Fock space.
inline MatrixXcd annihilator(int d) {
    if (d < 2) throw std::domain_error("annihilator: local dimension must be >= 2");
    MatrixXcd a = MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

inline MatrixXcd creator(int d) { return annihilator(d).adjoint(); }

inline MatrixXcd number(int d) {
    MatrixXcd n = MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = double(k);
    return n;
}

// a + a^dagger
inline MatrixXcd position(int d) {
    MatrixXcd a = annihilator(d);
    return a + a.adjoint();
}

inline MatrixXcd sigma_x() {
    MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline MatrixXcd sigma_y() {
    MatrixXcd m(2, 2);
    m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
    return m;
}

inline MatrixXcd sigma_z() {
    MatrixXcd m(2, 2);
    m << -1, 0, 0, 1;
    return m;
}

inline MatrixXcd sigma_plus() {
    MatrixXcd m = MatrixXcd::Zero(2, 2);
    m(1, 0) = 1.0;  // |e><g|
    return m;
}

inline MatrixXcd sigma_minus() { return sigma_plus().adjoint(); }

// Excited-state projector (1 + sigma_z)/2.
inline MatrixXcd excited_projector() {
    MatrixXcd m = MatrixXcd::Zero(2, 2);
    m(1, 1) = 1.0;
    return m;
}

// Kronecker product with A on the left site: row index s_a * dim_b + s_b.
inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Two-site projector |+_D><+_D| on an adjacent TLS pair,
// |+_D> = (|e g> + |g e>)/sqrt(2).
inline MatrixXcd dimer_plus_projector() {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(1 * 2 + 0) = 1.0 / std::sqrt(2.0);  // |e g>
    v(0 * 2 + 1) = 1.0 / std::sqrt(2.0);  // |g e>
    return v * v.adjoint();
}

}  // namespace ttedopa::ops
