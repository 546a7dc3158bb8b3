#pragma once

// Leaky-mode profiles and their axial evolution. A mode is
//   region I   (x < -A):  left  e^{-iKx}
//   region II  (|x| <= A): inner_plus e^{iQx} + inner_minus e^{-iQx}
//   region III (x > A):   right e^{+iKx}
// so both exterior pieces are outgoing, and E(x, z) = phi(x) e^{-i eps z}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "leaky/core.hpp"
#include "leaky/errors.hpp"
#include "leaky/resonances.hpp"
#include "leaky/scattering.hpp"

namespace leaky {

struct ModeField {
    Resonance resonance;
    double half_width_A = 0.0;
    cplx left, inner_plus, inner_minus, right;
    double incoming_residual = 0.0;  // relative size of the e^{iKx} piece left over in region I
    std::string normalization = "interior_max";

    cplx K() const { return resonance.wavenumbers.K; }
    cplx Q() const { return resonance.wavenumbers.Q; }

    cplx value(double x) const
    {
        const cplx i(0.0, 1.0);
        if (x < -half_width_A) return left * std::exp(-i * K() * x);
        if (x > half_width_A) return right * std::exp(i * K() * x);
        return inner_plus * std::exp(i * Q() * x) + inner_minus * std::exp(-i * Q() * x);
    }

    cplx slope(double x) const
    {
        const cplx i(0.0, 1.0);
        if (x < -half_width_A) return -i * K() * left * std::exp(-i * K() * x);
        if (x > half_width_A) return i * K() * right * std::exp(i * K() * x);
        return i * Q() * (inner_plus * std::exp(i * Q() * x) - inner_minus * std::exp(-i * Q() * x));
    }

    /// beta = -d/dx ln phi; tends to -iK on the right and +iK on the left.
    cplx log_derivative(double x) const { return -slope(x) / value(x); }

    /// Value and slope just outside (exterior formula) and just inside
    /// (interior formula) the wall at x = side * A.
    struct WallJump {
        double value_jump;  // relative
        double slope_jump;  // relative
    };

    WallJump wall_jump(int side) const
    {
        const cplx i(0.0, 1.0);
        const double x = side * half_width_A;
        const cplx in_v = inner_plus * std::exp(i * Q() * x) + inner_minus * std::exp(-i * Q() * x);
        const cplx in_s = i * Q() * (inner_plus * std::exp(i * Q() * x) - inner_minus * std::exp(-i * Q() * x));
        const cplx out_v = side > 0 ? right * std::exp(i * K() * x) : left * std::exp(-i * K() * x);
        const cplx out_s = side > 0 ? i * K() * out_v : -i * K() * out_v;
        return {std::abs(in_v - out_v) / std::max(std::abs(in_v), std::abs(out_v)),
                std::abs(in_s - out_s) / std::max(std::abs(in_s), std::abs(out_s))};
    }
};

struct ModeFieldOptions {
    double max_quantization_residual = 1e-8;
    std::size_t normalization_samples = 4096;
};

/// Solves the four-coefficient outgoing matching for an exact (refined) root
/// and scales the profile so that max |phi| over |x| <= A is 1, attained
/// with phase 0.
inline ModeField mode_profile(const Resonance& res, const SlabConfig& cfg, const ModeFieldOptions& opt = {})
{
    const double f = std::abs(siegert_residual(res.eigenvalue, cfg));
    if (!(f <= opt.max_quantization_residual))
        throw MatchingFailure("mode_profile(m=" + std::to_string(res.mode_index_m)
                              + "): quantization residual " + std::to_string(f)
                              + " exceeds tolerance; refine the resonance first");

    using namespace detail;
    const double A = cfg.half_width_A;
    const Wavenumbers w = eigenvalue_to_wavenumbers(res.eigenvalue, cfg);

    // Right wall: outgoing e^{iKx} with unit amplitude fixes the interior.
    const Mat2 right_match = value_slope_basis_inverse(w.Q, A) * value_slope_basis(w.K, A);
    const cplx B = right_match.a, C = right_match.c;
    // Left wall: interior to (incoming, outgoing) amplitudes of region I.
    const Mat2 left_match = value_slope_basis_inverse(w.K, -A) * value_slope_basis(w.Q, -A);
    const cplx incoming = left_match.a * B + left_match.b * C;
    const cplx outgoing = left_match.c * B + left_match.d * C;

    ModeField field;
    field.resonance = res;
    field.resonance.wavenumbers = w;
    field.half_width_A = A;
    field.left = outgoing;
    field.inner_plus = B;
    field.inner_minus = C;
    field.right = 1.0;
    field.incoming_residual = std::abs(incoming) / std::max({std::abs(outgoing), std::abs(B), std::abs(C)});

    // Divide by the complex value at the interior maximum, so the profile is
    // real and equal to 1 there and Re(phi) carries the standing-wave nodes.
    cplx peak = 0.0;
    const std::size_t n = std::max<std::size_t>(opt.normalization_samples, 16 * static_cast<std::size_t>(std::abs(res.mode_index_m) + 1));
    for (std::size_t k = 0; k < n; ++k) {
        const double x = -A + 2.0 * A * static_cast<double>(k) / static_cast<double>(n - 1);
        const cplx v = field.value(x);
        if (std::abs(v) > std::abs(peak)) peak = v;
    }
    if (!(std::abs(peak) > 0.0)) throw MatchingFailure("mode_profile: interior profile vanishes");
    field.left /= peak;
    field.inner_plus /= peak;
    field.inner_minus /= peak;
    field.right /= peak;
    return field;
}

/// Complex samples E(x_j, z_i) stored row-major with z as the row index.
struct FieldGrid {
    std::vector<double> x_grid;
    std::vector<double> z_grid;
    std::vector<cplx> amplitudes;

    FieldGrid(std::vector<double> x, std::vector<double> z)
        : x_grid(std::move(x)), z_grid(std::move(z)), amplitudes(x_grid.size() * z_grid.size())
    {
        check_increasing(x_grid, "x_grid");
        check_increasing(z_grid, "z_grid");
    }

    std::size_t nx() const { return x_grid.size(); }
    std::size_t nz() const { return z_grid.size(); }
    cplx& at(std::size_t iz, std::size_t ix) { return amplitudes[iz * nx() + ix]; }
    const cplx& at(std::size_t iz, std::size_t ix) const { return amplitudes[iz * nx() + ix]; }
    std::span<const cplx> row(std::size_t iz) const { return {amplitudes.data() + iz * nx(), nx()}; }
    std::span<cplx> row(std::size_t iz) { return {amplitudes.data() + iz * nx(), nx()}; }

private:
    static void check_increasing(const std::vector<double>& g, const char* name)
    {
        if (g.empty()) throw ValidationError(std::string(name) + " must not be empty");
        for (std::size_t i = 1; i < g.size(); ++i)
            if (!(g[i] > g[i - 1])) throw ValidationError(std::string(name) + " must be strictly increasing");
    }
};

/// E(x, z) = phi(x) exp(-i eps z); |E|^2 decays as exp(-Gamma z) at every x.
inline FieldGrid propagate_mode(const ModeField& field, std::vector<double> x_grid, std::vector<double> z_grid)
{
    FieldGrid grid(std::move(x_grid), std::move(z_grid));
    if (grid.z_grid.front() < 0.0) throw ValidationError("propagate_mode: z_grid must be >= 0");
    const cplx eps = field.resonance.eigenvalue.value();
    std::vector<cplx> profile(grid.nx());
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) profile[ix] = field.value(grid.x_grid[ix]);
    for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
        const double z = grid.z_grid[iz];
        const cplx phase = z == 0.0 ? cplx(1.0) : std::exp(cplx(0.0, -1.0) * eps * z);
        for (std::size_t ix = 0; ix < grid.nx(); ++ix) grid.at(iz, ix) = profile[ix] * phase;
    }
    return grid;
}

} // namespace leaky
