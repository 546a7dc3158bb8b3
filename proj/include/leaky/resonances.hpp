#pragma once

// Leaky modes of the slab. Closed-form estimates seed a Newton iteration on
// the Siegert (purely outgoing) quantization condition
//
//     f = cos(2QA) - i (K^2 + Q^2) / (2KQ) sin(2QA) = 0,
//
// which is e^{-2iKA} / t, i.e. the vanishing of the transmission-amplitude
// denominator continued to complex eps.

#include <algorithm>
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

enum class ResonanceMethod { approximate, refined };

inline const char* to_string(ResonanceMethod m)
{
    return m == ResonanceMethod::refined ? "refined" : "approximate";
}

struct Resonance {
    int mode_index_m = 0;
    ComplexEigenvalue eigenvalue;
    Wavenumbers wavenumbers;
    double residual = 0.0;  // |f| at the eigenvalue
    ResonanceMethod method = ResonanceMethod::approximate;
};

/// Admissible mode indices, sqrt(2U0(U0-1)) < m pi / (2A) < sqrt(2) U0.
struct ModeRange {
    int m_min = 1;
    int m_max = 0;

    bool empty() const { return m_max < m_min; }
    std::size_t size() const { return empty() ? 0 : static_cast<std::size_t>(m_max - m_min + 1); }
    bool contains(int m) const { return m >= m_min && m <= m_max; }
};

inline ModeRange mode_index_range(const SlabConfig& cfg)
{
    const double u0 = cfg.core_index_U0;
    const double scale = 2.0 * cfg.half_width_A / std::numbers::pi;
    const double lo = scale * std::sqrt(2.0 * u0 * (u0 - 1.0));
    const double hi = scale * std::sqrt(2.0 * u0 * u0);
    return {static_cast<int>(std::floor(lo)) + 1, static_cast<int>(std::ceil(hi)) - 1};
}

/// Quantization function in terms of the clad wavenumber.
inline cplx siegert_residual_K(cplx K, const SlabConfig& cfg)
{
    const cplx Q = core_wavenumber(K, cfg);
    if (K == 0.0 || Q == 0.0)
        throw PoleError("siegert_residual: K = 0 or Q = 0 is a pole of the quantization function");
    const cplx theta = 2.0 * Q * cfg.half_width_A;
    return std::cos(theta) - cplx(0.0, 1.0) * (K * K + Q * Q) / (2.0 * K * Q) * std::sin(theta);
}

inline cplx siegert_residual(const ComplexEigenvalue& eps, const SlabConfig& cfg)
{
    return siegert_residual_K(clad_wavenumber(eps.value()), cfg);
}

/// eps_R(m) = (m pi / 2A)^2 / (2 U0) - U0 and Gamma/2 = sqrt(2(eps_R + 1)) / (A U0).
inline Resonance approximate_resonance(int m, const SlabConfig& cfg)
{
    const double u0 = cfg.core_index_U0;
    const double A = cfg.half_width_A;
    const double q = m * std::numbers::pi / (2.0 * A);
    const double eps_R = q * q / (2.0 * u0) - u0;
    const double half_gamma = std::sqrt(std::max(0.0, 2.0 * (eps_R + 1.0))) / (A * u0);

    Resonance res;
    res.mode_index_m = m;
    res.eigenvalue = ComplexEigenvalue(eps_R, half_gamma);
    res.wavenumbers = eigenvalue_to_wavenumbers(res.eigenvalue, cfg);
    res.residual = std::abs(siegert_residual(res.eigenvalue, cfg));
    res.method = ResonanceMethod::approximate;
    return res;
}

/// One approximate resonance per admissible m; empty for a degenerate slab.
inline std::vector<Resonance> approximate_resonances(const SlabConfig& cfg)
{
    const ModeRange range = mode_index_range(cfg);
    std::vector<Resonance> out;
    out.reserve(range.size());
    for (int m = range.m_min; m <= range.m_max; ++m) out.push_back(approximate_resonance(m, cfg));
    return out;
}

struct RefineOptions {
    int max_iterations = 100;
    double residual_tolerance = 1e-12;
    double step_tolerance = 1e-14;
    double accept_residual = 1e-10;
    double trust_widths = 5.0;  // trust region radius in units of the seed Gamma
};

/// Newton iteration in K with a central-difference derivative taken along a
/// complex step. Working in K keeps f analytic away from the branch point
/// K = 0 that eps-space has at eps = -1.
inline Resonance refine_resonance(const Resonance& seed, const SlabConfig& cfg,
                                  const RefineOptions& opt = {})
{
    const cplx eps_seed = seed.eigenvalue.value();
    const double radius = opt.trust_widths * seed.eigenvalue.width();
    const std::string tag = "refine_resonance(m=" + std::to_string(seed.mode_index_m) + ")";

    cplx K = clad_wavenumber(eps_seed);
    cplx f = siegert_residual_K(K, cfg);
    bool converged = std::abs(f) <= opt.residual_tolerance;
    for (int it = 0; it < opt.max_iterations && !converged; ++it) {
        const cplx h(1e-7 * (1.0 + std::abs(K)), 0.0);
        const cplx df = (siegert_residual_K(K + h, cfg) - siegert_residual_K(K - h, cfg)) / (2.0 * h);
        if (df == 0.0) throw NoConvergence(tag + ": vanishing derivative");
        const cplx step = f / df;
        K -= step;
        if (!std::isfinite(K.real()) || !std::isfinite(K.imag()))
            throw NoConvergence(tag + ": iterate diverged");
        if (std::abs(eigenvalue_from_K(K) - eps_seed) > radius)
            throw RootJumped(tag + ": iterate left the trust region of " + std::to_string(radius));
        f = siegert_residual_K(K, cfg);
        converged = std::abs(f) <= opt.residual_tolerance || std::abs(step) < opt.step_tolerance;
    }
    if (!converged || std::abs(f) > opt.accept_residual)
        throw NoConvergence(tag + ": no convergence after " + std::to_string(opt.max_iterations)
                            + " iterations, |f| = " + std::to_string(std::abs(f)));

    const cplx eps = eigenvalue_from_K(K);
    if (eps.imag() > 0.0) throw RootJumped(tag + ": converged to a root with Gamma < 0");

    Resonance out;
    out.mode_index_m = seed.mode_index_m;
    out.eigenvalue = ComplexEigenvalue::from_complex(eps);
    out.wavenumbers = wavenumbers_from_K(K, cfg);
    out.residual = std::abs(f);
    out.method = ResonanceMethod::refined;
    return out;
}

inline std::vector<Resonance> refined_resonances(const SlabConfig& cfg, const RefineOptions& opt = {})
{
    std::vector<Resonance> out;
    for (const Resonance& seed : approximate_resonances(cfg)) out.push_back(refine_resonance(seed, cfg, opt));
    return out;
}

/// (Gamma_n / 2) / (eps_R,n+1 - eps_R,n) for each adjacent pair.
inline std::vector<double> narrowness_diagnostic(std::span<const Resonance> resonances)
{
    if (resonances.size() < 2)
        throw ValidationError("narrowness_diagnostic: need at least two resonances");
    std::vector<double> out;
    out.reserve(resonances.size() - 1);
    for (std::size_t i = 0; i + 1 < resonances.size(); ++i) {
        const double spacing = resonances[i + 1].eigenvalue.eps_R - resonances[i].eigenvalue.eps_R;
        if (!(spacing > 0.0))
            throw ValidationError("narrowness_diagnostic: resonances must be sorted by eps_R");
        out.push_back(resonances[i].eigenvalue.half_width_Gamma / spacing);
    }
    return out;
}

/// FBW lines (E_n = eps_R, Gamma_n = 2 * half width) for a resonance list.
inline std::vector<FbwLine> fbw_lines(std::span<const Resonance> resonances)
{
    std::vector<FbwLine> out;
    out.reserve(resonances.size());
    for (const Resonance& r : resonances) out.emplace_back(r.eigenvalue.eps_R, r.eigenvalue.width());
    return out;
}

} // namespace leaky
