#pragma once

// Units and the optics/quantum dictionary for a homogeneous slab.
//
// Every length is measured in units of 1/k0 and every wavenumber in units of
// k0, so k0 never appears explicitly. The paraxial eigenproblem
//
//     [-(1/2 n0) d^2/dx^2 + 1 - n(x)] phi = (eps + 1) phi
//
// maps onto a square well of depth U0 - 1 and width 2A. The clad wavenumber
// obeys K^2 / 2 = eps + 1 and the core wavenumber Q^2 = U0 (K^2 + 2 (U0 - 1)).

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "leaky/errors.hpp"

namespace leaky {

using cplx = std::complex<double>;

struct SlabConfig {
    double half_width_A;   // k0 * a
    double core_index_U0;  // refractive index inside |x| <= a
    static constexpr double clad_index = 1.0;

    SlabConfig(double half_width, double core_index)
        : half_width_A(half_width), core_index_U0(core_index)
    {
        if (!(half_width_A > 0.0) || !std::isfinite(half_width_A))
            throw ValidationError("half_width_A (k0a) must be a finite positive number, got "
                                  + std::to_string(half_width_A));
        if (!(core_index_U0 > clad_index) || !std::isfinite(core_index_U0))
            throw ValidationError("core_index_U0 (u0) must exceed the clad index 1, got "
                                  + std::to_string(core_index_U0));
    }

    /// Well depth V0 = |1 - U0|.
    double well_depth() const { return core_index_U0 - clad_index; }
    /// Reference index n0 of the paraxial reduction (the maximum of n(x)).
    double reference_index() const { return core_index_U0; }
    /// Step profile; the interface value is the average of both sides.
    double index_at(double x) const
    {
        const double ax = std::abs(x);
        if (ax < half_width_A) return core_index_U0;
        if (ax > half_width_A) return clad_index;
        return 0.5 * (core_index_U0 + clad_index);
    }
};

/// eps = eps_R - i Gamma/2.
struct ComplexEigenvalue {
    double eps_R = 0.0;
    double half_width_Gamma = 0.0;

    ComplexEigenvalue() = default;
    ComplexEigenvalue(double real_part, double half_gamma)
        : eps_R(real_part), half_width_Gamma(half_gamma)
    {
        if (!(half_width_Gamma >= 0.0))
            throw ValidationError("half_width_Gamma must be >= 0, got "
                                  + std::to_string(half_width_Gamma));
    }

    static ComplexEigenvalue from_complex(cplx eps) { return {eps.real(), -eps.imag()}; }

    cplx value() const { return {eps_R, -half_width_Gamma}; }
    double width() const { return 2.0 * half_width_Gamma; }
};

struct Wavenumbers {
    cplx K;  // clad, closed fourth quadrant
    cplx Q;  // core, principal root
};

/// Clad wavenumber from K^2 = 2 (eps + 1), on the branch Re K >= 0 and
/// Im K <= 0 when Re K = 0.
inline cplx clad_wavenumber(cplx eps)
{
    cplx k = std::sqrt(2.0 * (eps + 1.0));
    if (k.real() < 0.0 || (k.real() == 0.0 && k.imag() > 0.0)) k = -k;
    return k;
}

inline cplx core_wavenumber(cplx K, const SlabConfig& cfg)
{
    const double u0 = cfg.core_index_U0;
    return std::sqrt(u0 * (K * K + 2.0 * (u0 - 1.0)));
}

inline Wavenumbers wavenumbers_from_K(cplx K, const SlabConfig& cfg)
{
    return {K, core_wavenumber(K, cfg)};
}

inline Wavenumbers eigenvalue_to_wavenumbers(const ComplexEigenvalue& eps, const SlabConfig& cfg)
{
    return wavenumbers_from_K(clad_wavenumber(eps.value()), cfg);
}

/// Inverse map eps = K^2 / 2 - 1.
inline cplx eigenvalue_from_K(cplx K) { return 0.5 * K * K - 1.0; }

/// Real eps in [-U0, -1) is the guided band.
inline bool in_guided_band(double eps_R, const SlabConfig& cfg)
{
    return eps_R >= -cfg.core_index_U0 && eps_R < -1.0;
}

/// Real eps in [-1, 0) is the radiation band.
inline bool in_radiation_band(double eps_R) { return eps_R >= -1.0 && eps_R < 0.0; }

/// Ray angle from eps = -n(x) cos(theta), in [0, pi/2].
inline double beam_slope(double eps_R, double local_index)
{
    if (!(local_index > 0.0))
        throw ValidationError("local index n(x) must be positive");
    if (std::abs(eps_R) > local_index)
        throw DomainError("beam_slope: |eps_R| exceeds n(x); the field is evanescent there");
    if (eps_R > 0.0)
        throw DomainError("beam_slope: eps_R > 0 has no forward-propagating ray");
    return std::acos(-eps_R / local_index);
}

} // namespace leaky
