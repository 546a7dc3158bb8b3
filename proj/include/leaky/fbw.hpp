#pragma once

// Fock-Breit-Wigner (Cauchy/Lorentz) line and its time evolution, in units
// where hbar = 1. In the optical reading the evolution variable is k0 z.

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <string>

#include "leaky/errors.hpp"

namespace leaky {

template <std::floating_point Real>
struct BasicFbwLine {
    Real center_E0{};
    Real width_Gamma{};

    BasicFbwLine() = default;
    BasicFbwLine(Real center, Real width) : center_E0(center), width_Gamma(width)
    {
        if (!(width_Gamma >= Real(0)))
            throw ValidationError("width_Gamma must be >= 0, got " + std::to_string(width_Gamma));
    }

    Real half_width() const { return width_Gamma / Real(2); }
    /// Poles E0 -+ i Gamma/2 of the lineshape; the lower one is the resonance.
    std::complex<Real> pole() const { return {center_E0, -half_width()}; }
};

using FbwLine = BasicFbwLine<double>;

/// omega(E) = (G/2)^2 / ((E - E0)^2 + (G/2)^2). For G = 0 this is the
/// delta-like limit: 1 at E0, 0 elsewhere.
template <std::floating_point Real>
Real lineshape(const BasicFbwLine<Real>& line, Real E)
{
    const Real h = line.half_width();
    const Real d = E - line.center_E0;
    if (h == Real(0)) return d == Real(0) ? Real(1) : Real(0);
    return h * h / (d * d + h * h);
}

/// C(E) = (G/2) / (E - E0 + i G/2), so that |C|^2 = omega.
template <std::floating_point Real>
std::complex<Real> fourier_coefficient(const BasicFbwLine<Real>& line, Real E)
{
    const Real h = line.half_width();
    const Real d = E - line.center_E0;
    if (h == Real(0)) return d == Real(0) ? std::complex<Real>(0, -1) : std::complex<Real>(0, 0);
    return h / std::complex<Real>(d, h);
}

/// T(t) = (G/2) exp(-i E0 t) exp(-G t / 2) for t >= 0. The prefactor G/2 is
/// kept as printed; use the ratio |T(t)|^2 / |T(0)|^2 for a normalized decay.
template <std::floating_point Real>
std::complex<Real> survival_amplitude(const BasicFbwLine<Real>& line, Real t)
{
    if (!(t >= Real(0)))
        throw DomainError("survival_amplitude: the decay law holds for t >= 0 only");
    const Real h = line.half_width();
    return h * std::exp(std::complex<Real>(-h * t, -line.center_E0 * t));
}

/// tau = 1 / Gamma. A stable line (Gamma = 0) returns +infinity.
template <std::floating_point Real>
Real lifetime(const BasicFbwLine<Real>& line)
{
    if (line.width_Gamma == Real(0)) return std::numeric_limits<Real>::infinity();
    return Real(1) / line.width_Gamma;
}

template <std::floating_point Real>
bool is_stable(const BasicFbwLine<Real>& line)
{
    return std::isinf(lifetime(line));
}

} // namespace leaky
