#pragma once

// Real-energy scattering by the slab: transfer matrix, r and t amplitudes,
// transmission coefficient, the transmission phase and the FBW superposition
// approximation of T.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "leaky/core.hpp"
#include "leaky/errors.hpp"
#include "leaky/fbw.hpp"

namespace leaky {

namespace detail {

struct Mat2 {
    cplx a, b, c, d;  // [[a, b], [c, d]]

    Mat2 operator*(const Mat2& o) const
    {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

// Maps plane-wave amplitudes (alpha, beta) of alpha e^{ikx} + beta e^{-ikx}
// to the value and slope (u, u') at x.
inline Mat2 value_slope_basis(cplx k, double x)
{
    const cplx e = std::exp(cplx(0.0, 1.0) * k * x);
    const cplx ik = cplx(0.0, 1.0) * k;
    return {e, 1.0 / e, ik * e, -ik / e};
}

inline Mat2 value_slope_basis_inverse(cplx k, double x)
{
    const cplx e = std::exp(cplx(0.0, 1.0) * k * x);
    const cplx ik = cplx(0.0, 1.0) * k;
    const cplx det = -2.0 * ik;
    return {(-ik / e) / det, (-1.0 / e) / det, (-ik * e) / det, e / det};
}

} // namespace detail

/// Transfer matrix M with (1, r) = M (t, 0) for a wave incident from the left:
/// region I amplitudes in terms of region III amplitudes, matching value and
/// slope at x = -A and x = +A. Valid for complex K and Q.
inline detail::Mat2 slab_transfer_matrix(const Wavenumbers& w, const SlabConfig& cfg)
{
    using namespace detail;
    const double A = cfg.half_width_A;
    return value_slope_basis_inverse(w.K, -A) * value_slope_basis(w.Q, -A)
           * value_slope_basis_inverse(w.Q, A) * value_slope_basis(w.K, A);
}

struct ScatteringAmplitudes {
    cplx r;
    cplx t;
    double phase_phi;  // transmission phase, continuous in K
};

namespace detail {

inline void require_radiation_band(double eps_R, const char* who)
{
    if (!(eps_R > -1.0 && eps_R < 0.0))
        throw DomainError(std::string(who) + ": eps_R must lie in the radiation band (-1, 0), got "
                          + std::to_string(eps_R));
}

inline Wavenumbers real_wavenumbers(double eps_R, const SlabConfig& cfg)
{
    const double K = std::sqrt(2.0 * (eps_R + 1.0));
    return {cplx(K, 0.0), cplx(std::sqrt(cfg.core_index_U0 * (K * K + 2.0 * (cfg.core_index_U0 - 1.0))), 0.0)};
}

// Phase phi with t = |t| exp(i(-2KA + phi + pi/2)), reduced to (-pi, pi].
inline double wrapped_phase(cplx t, double K, double A)
{
    return std::remainder(std::arg(t) + 2.0 * K * A - 0.5 * std::numbers::pi, 2.0 * std::numbers::pi);
}

} // namespace detail

/// r and t for real eps_R in (-1, 0) by the 2x2 transfer matrix. The phase is
/// put on the 2 pi branch nearest the interior optical path 2QA - pi/2, which
/// it never leaves by more than pi/2; that branch choice is continuous in K.
inline ScatteringAmplitudes transfer_amplitudes(double eps_R, const SlabConfig& cfg)
{
    detail::require_radiation_band(eps_R, "transfer_amplitudes");
    const Wavenumbers w = detail::real_wavenumbers(eps_R, cfg);
    const detail::Mat2 M = slab_transfer_matrix(w, cfg);
    const cplx t = 1.0 / M.a;
    const cplx r = M.c / M.a;

    const double two_pi = 2.0 * std::numbers::pi;
    const double A = cfg.half_width_A;
    const double wrapped = detail::wrapped_phase(t, w.K.real(), A);
    const double anchor = 2.0 * w.Q.real() * A - 0.5 * std::numbers::pi;
    const double phi = wrapped + two_pi * std::round((anchor - wrapped) / two_pi);
    return {r, t, phi};
}

inline double transmission_coefficient(double eps_R, const SlabConfig& cfg)
{
    return std::norm(transfer_amplitudes(eps_R, cfg).t);
}

/// phi(k) = -arctan(2kq cos 2qa / ((k^2 + q^2) sin 2qa)), principal branch.
/// At sin 2qa = 0 the two-sided limit (-pi/2, equal to +pi/2 mod pi) is used.
inline double closed_form_phase(double eps_R, const SlabConfig& cfg)
{
    detail::require_radiation_band(eps_R, "closed_form_phase");
    const Wavenumbers w = detail::real_wavenumbers(eps_R, cfg);
    const double K = w.K.real(), Q = w.Q.real();
    const double theta = 2.0 * Q * cfg.half_width_A;
    const double den = (K * K + Q * Q) * std::sin(theta);
    if (den == 0.0) return -0.5 * std::numbers::pi;
    return -std::atan(2.0 * K * Q * std::cos(theta) / den);
}

/// Transmission phase along an increasing eps grid, unwrapped by accumulating
/// sample-to-sample increments. Intervals where the increment reaches pi/4 are
/// bisected until it does not. The first sample sits on the same branch as
/// transfer_amplitudes.
inline std::vector<double> phase_sweep(std::span<const double> eps_grid, const SlabConfig& cfg)
{
    std::vector<double> out;
    out.reserve(eps_grid.size());
    if (eps_grid.empty()) return out;

    const double A = cfg.half_width_A;
    const double two_pi = 2.0 * std::numbers::pi;
    auto wrapped_at = [&](double e) {
        detail::require_radiation_band(e, "phase_sweep");
        const Wavenumbers w = detail::real_wavenumbers(e, cfg);
        const detail::Mat2 M = slab_transfer_matrix(w, cfg);
        return detail::wrapped_phase(1.0 / M.a, w.K.real(), A);
    };
    auto advance = [&](auto&& self, double phi, double e0, double e1, int depth) -> double {
        const double step = std::remainder(wrapped_at(e1) - phi, two_pi);
        if (std::abs(step) < 0.25 * std::numbers::pi) return phi + step;
        if (depth > 48) throw NumericalError("phase_sweep: phase not resolved by refinement");
        const double mid = 0.5 * (e0 + e1);
        return self(self, self(self, phi, e0, mid, depth + 1), mid, e1, depth + 1);
    };

    out.push_back(transfer_amplitudes(eps_grid[0], cfg).phase_phi);
    for (std::size_t i = 1; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > eps_grid[i - 1]))
            throw ValidationError("phase_sweep: eps grid must be strictly increasing");
        out.push_back(advance(advance, out.back(), eps_grid[i - 1], eps_grid[i], 0));
    }
    return out;
}

/// omega_N(E) = sum over the first N lines of their FBW lineshapes.
inline double fbw_superposition(double E, std::span<const FbwLine> lines, std::size_t N)
{
    if (N == 0) throw ValidationError("fbw_superposition: N must be >= 1");
    if (N > lines.size())
        throw ValidationError("fbw_superposition: N exceeds the number of resonances");
    for (std::size_t i = 1; i < lines.size(); ++i)
        if (lines[i].center_E0 < lines[i - 1].center_E0)
            throw ValidationError("fbw_superposition: resonances must be sorted by E_n");
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) sum += lineshape(lines[i], E);
    return sum;
}

} // namespace leaky
