#include "spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>

namespace coulombflow::detail {
namespace {

struct Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

// The FFTW planner is not thread safe; execution with the new-array interface is.
std::mutex planner_mutex;

const Plans& plans_for(const TorusGrid& g) {
    static std::map<std::pair<int, int>, Plans> cache;
    std::lock_guard lock(planner_mutex);
    auto key = std::make_pair(g.dim, g.n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<double> real(g.size());
    Coeffs spec(spectrum_size(g));
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    if (g.dim == 1) {
        p.r2c = fftw_plan_dft_r2c_1d(g.n, real.data(), cplx, flags);
        p.c2r = fftw_plan_dft_c2r_1d(g.n, cplx, real.data(), flags);
    } else {
        // FFTW is row-major with the last index contiguous: that is our axis 0.
        p.r2c = fftw_plan_dft_r2c_2d(g.n, g.n, real.data(), cplx, flags);
        p.c2r = fftw_plan_dft_c2r_2d(g.n, g.n, cplx, real.data(), flags);
    }
    if (!p.r2c || !p.c2r) throw std::runtime_error("FFTW planning failed");
    return cache.emplace(key, p).first->second;
}

} // namespace

std::size_t spectrum_size(const TorusGrid& g) {
    const std::size_t half = std::size_t(g.n / 2 + 1);
    return g.dim == 1 ? half : half * std::size_t(g.n);
}

Coeffs forward(const TorusGrid& g, std::span<const double> u) {
    const Plans& p = plans_for(g);
    Coeffs out(spectrum_size(g));
    // r2c leaves its input untouched, the const_cast is only for the C signature.
    fftw_execute_dft_r2c(p.r2c, const_cast<double*>(u.data()), reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / double(g.size());
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<double> inverse(const TorusGrid& g, Coeffs c) {
    const Plans& p = plans_for(g);
    std::vector<double> out(g.size());
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(c.data()), out.data());
    return out;
}

double inverse_laplacian_quadratic(const TorusGrid& g, const Coeffs& c) {
    constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    double acc = 0.0;
    for_each_mode(g, [&](const Mode& md) {
        const double k2 = double(md.k0) * md.k0 + double(md.k1) * md.k1;
        if (k2 == 0.0) return;
        acc += md.weight * std::norm(c[md.index]) / (four_pi2 * k2);
    });
    return acc;
}

std::vector<double> potential_gradient(const TorusGrid& g, const Coeffs& u_hat, int axis, bool at_face) {
    constexpr double pi = std::numbers::pi;
    Coeffs d(u_hat.size());
    for_each_mode(g, [&](const Mode& md) {
        const double k2 = double(md.k0) * md.k0 + double(md.k1) * md.k1;
        const int ka = axis == 0 ? md.k0 : md.k1;
        const bool nyq = axis == 0 ? md.nyquist0 : md.nyquist1;
        // The odd derivative symbol has no real-valued Nyquist representative.
        if (k2 == 0.0 || ka == 0 || nyq) return;
        std::complex<double> c = u_hat[md.index] / (4.0 * pi * pi * k2);
        c *= std::complex<double>(0.0, 2.0 * pi * ka);
        if (at_face) c *= std::polar(1.0, pi * ka * g.h);
        d[md.index] = c;
    });
    return inverse(g, std::move(d));
}

} // namespace coulombflow::detail
