#pragma once

// Longitudinal (stationary-phase) shifts of the transmitted or reflected wave,
// the optical counterpart of the quantum phase time, plus a wave-packet
// measurement of the same quantity.
//
// With t = |t| exp(i(-2KA + phi + pi/2)) the stationary-phase trajectory of a
// Fourier component behind the slab is x = 2A + K z - dphi/dK. A component
// reaches the left wall at z_in = -A/K and leaves at z_t = (-A + dphi/dK)/K.
// Free space gives dphi/dK = 2A, i.e. a transit of 2A/K, and k0_delta_z is
// measured relative to that free transit.

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "leaky/core.hpp"
#include "leaky/curve.hpp"
#include "leaky/errors.hpp"
#include "leaky/scattering.hpp"

namespace leaky {

/// Analytic dphi/dK. Writing phi = psi - pi/2 with tan psi = S tan(2QA),
/// S = (K^2 + Q^2) / (2KQ), the derivative
///   (S theta' + S' sin(theta) cos(theta)) / (cos^2(theta) + S^2 sin^2(theta))
/// has no singularity where sin(2QA) = 0.
inline double phase_derivative(double eps_R, const SlabConfig& cfg)
{
    detail::require_radiation_band(eps_R, "phase_derivative");
    const double u0 = cfg.core_index_U0;
    const double A = cfg.half_width_A;
    const double K = std::sqrt(2.0 * (eps_R + 1.0));
    const double Q = std::sqrt(u0 * (K * K + 2.0 * (u0 - 1.0)));
    const double dQ = u0 * K / Q;

    const double theta = 2.0 * Q * A;
    const double dtheta = 2.0 * A * dQ;
    const double P = K * K + Q * Q, dP = 2.0 * K * (1.0 + u0);
    const double R = 2.0 * K * Q, dR = 2.0 * Q + 2.0 * K * dQ;
    const double S = P / R;
    const double dS = (dP * R - P * dR) / (R * R);

    const double s = std::sin(theta), c = std::cos(theta);
    return (S * dtheta + dS * s * c) / (c * c + S * S * s * s);
}

/// dphi/dK - 2A: the phase slope in excess of free propagation across 2A.
inline double excess_phase_derivative(double eps_R, const SlabConfig& cfg)
{
    return phase_derivative(eps_R, cfg) - 2.0 * cfg.half_width_A;
}

struct ShiftSample {
    double eps_R = 0.0;
    double k0_delta_z = 0.0;  // shift relative to free propagation
    double z_in = 0.0;        // entry at the left wall
    double z_t = 0.0;         // exit at the right wall
    double dphi_dK = 0.0;

    /// z_t - z_in, which includes the free transit 2A/K.
    double transit() const { return z_t - z_in; }
};

inline ShiftSample longitudinal_shift(double eps_R, const SlabConfig& cfg)
{
    const double dphi = phase_derivative(eps_R, cfg);
    const double K = std::sqrt(2.0 * (eps_R + 1.0));
    const double A = cfg.half_width_A;
    ShiftSample s;
    s.eps_R = eps_R;
    s.dphi_dK = dphi;
    s.k0_delta_z = (dphi - 2.0 * A) / K;
    s.z_in = -A / K;
    s.z_t = (-A + dphi) / K;
    return s;
}

struct WavepacketOptions {
    double observation_x = 0.0;   // 0 selects 4A
    std::size_t panels = 200;     // 10-point Gauss-Legendre panels over +-6 sigma
    std::size_t coarse_samples = 4001;
    std::size_t fine_samples = 401;
    double window_durations = 40.0;  // half-width of the z scan in units of 1/(K_c sigma)
    double ambiguity_ratio = 0.95;   // a second local max above this fraction is ambiguous
};

namespace detail {

struct PacketSpectrum {
    std::vector<cplx> weight;   // quadrature weight * f(K) * t(K) * exp(iKX)
    std::vector<double> eps;    // eps(K) = K^2/2 - 1
};

inline double packet_intensity(const PacketSpectrum& s, double z)
{
    cplx sum = 0.0;
    for (std::size_t j = 0; j < s.eps.size(); ++j)
        sum += s.weight[j] * std::polar(1.0, -s.eps[j] * z);
    return std::norm(sum);
}

// Peak z of |E(X, z)|^2 by a coarse scan, an ambiguity check, a fine rescan
// around the winner and a parabola through the three largest fine samples.
inline double packet_peak(const PacketSpectrum& s, double z_lo, double z_hi, const WavepacketOptions& opt)
{
    const std::vector<double> zc = linspace(z_lo, z_hi, opt.coarse_samples);
    std::vector<double> Ic(zc.size());
    for (std::size_t i = 0; i < zc.size(); ++i) Ic[i] = packet_intensity(s, zc[i]);

    const auto top = static_cast<std::size_t>(std::max_element(Ic.begin(), Ic.end()) - Ic.begin());
    if (top == 0 || top + 1 == Ic.size())
        throw PeakAmbiguity("wavepacket_shift: envelope peak at the edge of the scan window");
    for (std::size_t i : local_maxima(Ic))
        if (i + 1 < top || i > top + 1)
            if (Ic[i] >= opt.ambiguity_ratio * Ic[top])
                throw PeakAmbiguity("wavepacket_shift: multimodal envelope, secondary peak at z = "
                                    + std::to_string(zc[i]));

    const std::vector<double> zf = linspace(zc[top - 1], zc[top + 1], opt.fine_samples);
    std::vector<double> If(zf.size());
    for (std::size_t i = 0; i < zf.size(); ++i) If[i] = packet_intensity(s, zf[i]);
    auto k = static_cast<std::size_t>(std::max_element(If.begin(), If.end()) - If.begin());
    k = std::clamp<std::size_t>(k, 1, If.size() - 2);
    const double y0 = If[k - 1], y1 = If[k], y2 = If[k + 1];
    const double den = y0 - 2.0 * y1 + y2;
    const double h = zf[1] - zf[0];
    return den == 0.0 ? zf[k] : zf[k] + 0.5 * h * (y0 - y2) / den;
}

} // namespace detail

/// Synthesizes the transmitted packet E_III(X, z) = int dK f(K) t(K) e^{i(KX - eps(K) z)}
/// for a Gaussian f centred on K_c = sqrt(2(eps_center + 1)), locates the
/// envelope peak in z and subtracts the arrival of the same packet through
/// free space (t = 1). The result tends to longitudinal_shift().k0_delta_z as
/// sigma_K -> 0.
inline double wavepacket_shift(double eps_center, double sigma_K, const SlabConfig& cfg,
                               const WavepacketOptions& opt = {})
{
    detail::require_radiation_band(eps_center, "wavepacket_shift");
    const double Kc = std::sqrt(2.0 * (eps_center + 1.0));
    if (!(sigma_K > 0.0) || sigma_K > Kc / 6.0)
        throw DomainError("wavepacket_shift: sigma_K must lie in (0, K_c/6]");
    const double k_lo = Kc - 6.0 * sigma_K, k_hi = Kc + 6.0 * sigma_K;
    if (!(k_lo > 0.0) || !(k_hi < std::numbers::sqrt2))
        throw DomainError("wavepacket_shift: packet support leaves the radiation band (0, sqrt 2)");

    const double X = opt.observation_x > 0.0 ? opt.observation_x : 4.0 * cfg.half_width_A;
    if (X < cfg.half_width_A) throw ValidationError("wavepacket_shift: observation_x must be >= A");

    // Even order: the rule stores only the positive abscissas.
    using rule = boost::math::quadrature::gauss<double, 10>;
    detail::PacketSpectrum slab, free;
    const double panel = (k_hi - k_lo) / static_cast<double>(opt.panels);
    for (std::size_t p = 0; p < opt.panels; ++p) {
        const double mid = k_lo + (static_cast<double>(p) + 0.5) * panel;
        const double half = 0.5 * panel;
        for (std::size_t i = 0; i < rule::abscissa().size(); ++i) {
            for (double sign : {-1.0, 1.0}) {
                const double K = mid + sign * half * rule::abscissa()[i];
                const double eps = 0.5 * K * K - 1.0;
                const double g = std::exp(-0.5 * (K - Kc) * (K - Kc) / (sigma_K * sigma_K));
                const cplx w = half * rule::weights()[i] * g * std::polar(1.0, K * X);
                const cplx t = 1.0 / slab_transfer_matrix(detail::real_wavenumbers(eps, cfg), cfg).a;
                slab.weight.push_back(w * t);
                slab.eps.push_back(eps);
                free.weight.push_back(w);
                free.eps.push_back(eps);
            }
        }
    }

    const double duration = 1.0 / (Kc * sigma_K);
    const double z0 = X / Kc;
    const double span = opt.window_durations * duration;
    const double z_slab = detail::packet_peak(slab, z0 - span, z0 + span, opt);
    const double z_free = detail::packet_peak(free, z0 - span, z0 + span, opt);
    return z_slab - z_free;
}

} // namespace leaky
