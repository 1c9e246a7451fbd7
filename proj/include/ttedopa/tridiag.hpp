// tridiag.hpp — Symmetric tridiagonal eigensolver (implicit-shift QL)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ttedopa/errors.hpp"

namespace ttedopa {

struct TridiagEigen {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column-major: vectors[i + n*k] = <i|v_k>
    std::size_t n = 0;

    double vec(std::size_t i, std::size_t k) const { return vectors[i + n * k]; }
};

// Eigendecomposition of the symmetric tridiagonal matrix with diagonal d
// and off-diagonal e (e[i] couples rows i and i+1, size n-1).
// QL with implicit shifts; eigenvectors accumulated from the identity.
inline TridiagEigen tridiag_eigen(std::vector<double> d, std::vector<double> e) {
    const std::size_t n = d.size();
    if (n == 0) throw validation_error("tridiag_eigen: empty matrix");
    if (e.size() + 1 != n) throw validation_error("tridiag_eigen: off-diagonal size must be n-1");

    TridiagEigen out;
    out.n = n;
    out.vectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) out.vectors[i + n * i] = 1.0;
    std::vector<double>& z = out.vectors;

    e.push_back(0.0);  // sentinel
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw numerical_error("tridiag_eigen: QL failed to converge at row " + std::to_string(l));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (std::size_t k = 0; k < n; ++k) {
                        f = z[k + n * (i + 1)];
                        z[k + n * (i + 1)] = s * z[k + n * i] + c * f;
                        z[k + n * i] = c * z[k + n * i] - s * f;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // sort ascending, permuting vectors alongside
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    out.values.resize(n);
    std::vector<double> sorted(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = d[perm[k]];
        for (std::size_t i = 0; i < n; ++i) sorted[i + n * k] = z[i + n * perm[k]];
    }
    out.vectors = std::move(sorted);
    return out;
}

}  // namespace ttedopa
