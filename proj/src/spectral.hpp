#pragma once

#include "coulombflow/torus_field.hpp"

#include <complex>
#include <vector>

namespace coulombflow::detail {

using Coeffs = std::vector<std::complex<double>>;

// Number of r2c coefficients for the grid: (n/2+1) in 1-D, n*(n/2+1) in 2-D.
std::size_t spectrum_size(const TorusGrid& g);

// Fourier coefficients u_hat(k) = (1/N) sum_j u_j exp(-2 pi i k.x_j), half spectrum.
Coeffs forward(const TorusGrid& g, std::span<const double> u);

// Synthesis sum_k c(k) exp(2 pi i k.x_j); the input is consumed.
std::vector<double> inverse(const TorusGrid& g, Coeffs c);

struct Mode {
    std::size_t index;
    int k0;         // frequency along axis 0, in [0, n/2]
    int k1;         // signed frequency along axis 1 (0 in 1-D)
    double weight;  // multiplicity of this coefficient in the full spectrum
    bool nyquist0;
    bool nyquist1;
};

template <class F>
void for_each_mode(const TorusGrid& g, F&& f) {
    const int half = g.n / 2 + 1;
    const int rows = g.dim == 1 ? 1 : g.n;
    for (int j = 0; j < rows; ++j) {
        const int k1 = g.dim == 1 ? 0 : (j <= g.n / 2 ? j : j - g.n);
        for (int i = 0; i < half; ++i) {
            const double w = (i == 0 || 2 * i == g.n) ? 1.0 : 2.0;
            f(Mode{std::size_t(j) * half + i, i, k1, w, 2 * i == g.n, g.dim == 2 && 2 * j == g.n});
        }
    }
}

// Sum over k != 0 of |c(k)|^2 / (4 pi^2 |k|^2) across the full spectrum.
double inverse_laplacian_quadratic(const TorusGrid& g, const Coeffs& c);

// Derivative along `axis` of the Coulomb potential, optionally half-shifted to faces.
std::vector<double> potential_gradient(const TorusGrid& g, const Coeffs& u_hat, int axis, bool at_face);

} // namespace coulombflow::detail
