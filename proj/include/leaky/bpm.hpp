#pragma once

// Finite-difference paraxial beam propagation, used as an independent check
// on the analytic leaky modes.
//
// The transverse operator is -(1/2n(x)) d^2/dx^2 - (n(x) - n_ref): the clad
// and core each keep their own index as the paraxial "mass", which is the
// operator whose slab eigenfunctions have K^2 = 2(eps + 1) outside and
// Q^2 = 2 U0 (eps + U0) inside, with value and slope continuous. In a
// homogeneous medium it is the usual -(1/2n0) d^2/dx^2. Written as
//
//     M i dE/dz = [-(1/2) D2 - M (n - n_ref + i W)] E,   M = diag(n),
//
// the Crank-Nicolson (Cayley) step conserves sum n |E|^2 dx exactly when the
// absorber W vanishes, and needs one tridiagonal solve per step.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leaky/core.hpp"
#include "leaky/errors.hpp"
#include "leaky/fields.hpp"

namespace leaky {

struct BpmConfig {
    double domain_X = 0.0;           // transverse window [-X, X]
    std::size_t nx = 4097;
    double dz = 0.05;
    double absorber_width = 0.0;
    double absorber_strength = 0.0;  // peak imaginary potential at |x| = X
    std::function<double(double)> n_profile;
    double core_half_width = 0.0;    // A; 0 when there is no slab

    /// Defaults for a slab: X = 8A, nx = 4097, dz = 0.05, absorber X/4 wide.
    static BpmConfig for_slab(const SlabConfig& slab)
    {
        BpmConfig c;
        c.domain_X = 8.0 * slab.half_width_A;
        c.absorber_width = 0.25 * c.domain_X;
        c.absorber_strength = 0.05;
        c.n_profile = [slab](double x) { return slab.index_at(x); };
        c.core_half_width = slab.half_width_A;
        return c;
    }

    /// Homogeneous medium of index n0.
    static BpmConfig uniform(double n0, double X, std::size_t points, double step)
    {
        BpmConfig c;
        c.domain_X = X;
        c.nx = points;
        c.dz = step;
        c.n_profile = [n0](double) { return n0; };
        return c;
    }

    void validate() const
    {
        const double A = core_half_width;
        if (!n_profile) throw ValidationError("bpm: n_profile is not set");
        if (!(domain_X > 0.0)) throw ValidationError("bpm: transverse_domain X must be positive");
        if (domain_X < 4.0 * A) throw ValidationError("bpm: transverse_domain X must be >= 4A");
        if (nx < 513) throw ValidationError("bpm: nx must be >= 513");
        if (!(dz > 0.0)) throw ValidationError("bpm: dz must be positive");
        if (absorber_width < 0.0 || !(absorber_width < domain_X - A))
            throw ValidationError("bpm: absorber_width must lie in [0, X - A)");
        if (absorber_strength < 0.0) throw ValidationError("bpm: absorber_strength must be >= 0");
    }

    double dx() const { return 2.0 * domain_X / static_cast<double>(nx - 1); }

    std::vector<double> x_grid() const
    {
        std::vector<double> x(nx);
        for (std::size_t j = 0; j < nx; ++j) x[j] = -domain_X + dx() * static_cast<double>(j);
        x.back() = domain_X;
        return x;
    }

    double absorber_at(double x) const
    {
        const double start = domain_X - absorber_width;
        const double ax = std::abs(x);
        if (absorber_width <= 0.0 || ax <= start) return 0.0;
        const double s = (ax - start) / absorber_width;
        return absorber_strength * s * s;
    }
};

class Propagator {
public:
    explicit Propagator(BpmConfig cfg) : cfg_(std::move(cfg))
    {
        cfg_.validate();
        x_ = cfg_.x_grid();
        const std::size_t n = cfg_.nx;
        const double dx = cfg_.dx();
        mass_.resize(n);
        for (std::size_t j = 0; j < n; ++j) mass_[j] = cfg_.n_profile(x_[j]);
        n_ref_ = *std::max_element(mass_.begin(), mass_.end());
        for (double m : mass_)
            if (!(m > 0.0)) throw ValidationError("bpm: n_profile must be positive on the grid");

        const cplx half_step(0.0, 0.5 * cfg_.dz);
        diag_.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            diag_[j] = 1.0 / (dx * dx) - mass_[j] * cplx(mass_[j] - n_ref_, cfg_.absorber_at(x_[j]));
        off_ = -0.5 / (dx * dx);

        // Thomas factorization of M + i dz/2 L.
        const cplx sub = half_step * off_;
        upper_.resize(n);
        inv_pivot_.resize(n);
        cplx pivot = mass_[0] + half_step * diag_[0];
        inv_pivot_[0] = 1.0 / pivot;
        upper_[0] = sub * inv_pivot_[0];
        for (std::size_t j = 1; j < n; ++j) {
            pivot = mass_[j] + half_step * diag_[j] - sub * upper_[j - 1];
            inv_pivot_[j] = 1.0 / pivot;
            upper_[j] = sub * inv_pivot_[j];
        }

        const double interior = cfg_.domain_X - cfg_.absorber_width;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(x_[j]) <= interior) interior_.push_back(j);
            if (cfg_.core_half_width > 0.0 && std::abs(x_[j]) <= cfg_.core_half_width) core_.push_back(j);
        }
    }

    const BpmConfig& config() const { return cfg_; }
    const std::vector<double>& x() const { return x_; }
    double reference_index() const { return n_ref_; }

    /// One Crank-Nicolson step in place.
    void advance(std::span<cplx> field) const
    {
        const std::size_t n = cfg_.nx;
        if (field.size() != n)
            throw ValidationError("bpm: field column length " + std::to_string(field.size())
                                  + " does not match nx = " + std::to_string(n));
        const double before = interior_norm(field);

        const cplx half_step(0.0, 0.5 * cfg_.dz);
        const cplx sub = half_step * off_;
        std::vector<cplx> rhs(n);
        for (std::size_t j = 0; j < n; ++j) {
            cplx neighbours = 0.0;
            if (j > 0) neighbours += field[j - 1];
            if (j + 1 < n) neighbours += field[j + 1];
            rhs[j] = mass_[j] * field[j] - half_step * (diag_[j] * field[j] + off_ * neighbours);
        }
        // Forward sweep then back substitution.
        field[0] = rhs[0] * inv_pivot_[0];
        for (std::size_t j = 1; j < n; ++j) field[j] = (rhs[j] - sub * field[j - 1]) * inv_pivot_[j];
        for (std::size_t j = n - 1; j-- > 0;) field[j] -= upper_[j] * field[j + 1];

        const double after = interior_norm(field);
        if (before > 0.0 && after > 1.01 * before)
            throw InstabilityDetected("bpm: interior norm grew by more than 1% in one step");
    }

    std::vector<cplx> step(std::span<const cplx> field) const
    {
        std::vector<cplx> out(field.begin(), field.end());
        advance(out);
        return out;
    }

    /// sum n |E|^2 dx over the whole window; conserved without absorber.
    double weighted_norm(std::span<const cplx> field) const
    {
        double s = 0.0;
        for (std::size_t j = 0; j < field.size(); ++j) s += mass_[j] * std::norm(field[j]);
        return s * cfg_.dx();
    }

    /// Plain power int |E|^2 dx over the whole window.
    double power(std::span<const cplx> field) const
    {
        double s = 0.0;
        for (const cplx& v : field) s += std::norm(v);
        return s * cfg_.dx();
    }

    /// int_{|x| <= A} |E|^2 dx.
    double core_power(std::span<const cplx> field) const
    {
        double s = 0.0;
        for (std::size_t j : core_) s += std::norm(field[j]);
        return s * cfg_.dx();
    }

private:
    double interior_norm(std::span<const cplx> field) const
    {
        double s = 0.0;
        for (std::size_t j : interior_) s += mass_[j] * std::norm(field[j]);
        return s;
    }

    BpmConfig cfg_;
    std::vector<double> x_;
    std::vector<double> mass_;
    std::vector<cplx> diag_;
    double off_ = 0.0;
    double n_ref_ = 1.0;
    std::vector<cplx> upper_;
    std::vector<cplx> inv_pivot_;
    std::vector<std::size_t> interior_;
    std::vector<std::size_t> core_;
};

/// Single step with a throwaway propagator; prefer Propagator for loops.
inline std::vector<cplx> step(std::span<const cplx> field_column, const BpmConfig& cfg)
{
    return Propagator(cfg).step(field_column);
}

struct DecayFit {
    double rate = 0.0;        // fitted -d ln P / dz
    double r_squared = 0.0;
    double rms_residual = 0.0;
    bool exponential = false; // false flags a non-exponential regime
    std::vector<double> z;
    std::vector<double> core_power;
};

struct DecayOptions {
    double window_lo = 0.2;   // fit window as fractions of z_max
    double window_hi = 0.8;
    double min_r_squared = 0.99;
    double flat_rms = 1e-6;   // a flat trace this clean counts as exponential with rate 0
    // Called with (step index, z, field) at z = 0 and after every step.
    std::function<void(std::size_t, double, std::span<const cplx>)> observer;
};

/// Propagates to z_max, then least-squares fits ln P(z) of the core power over
/// the fit window. The decay rate compares with Gamma.
inline DecayFit measure_decay(const BpmConfig& cfg, std::span<const cplx> init, double z_max,
                              const DecayOptions& opt = {})
{
    if (!(cfg.core_half_width > 0.0))
        throw ValidationError("measure_decay: core_half_width must be set to define the core power");
    if (!(z_max > 0.0)) throw ValidationError("measure_decay: z_max must be positive");
    const Propagator prop(cfg);
    const auto steps = static_cast<std::size_t>(std::llround(z_max / cfg.dz));
    if (steps < 10) throw ValidationError("measure_decay: z_max must span at least 10 steps");

    std::vector<cplx> field(init.begin(), init.end());
    DecayFit fit;
    fit.z.reserve(steps + 1);
    fit.core_power.reserve(steps + 1);
    fit.z.push_back(0.0);
    fit.core_power.push_back(prop.core_power(field));
    if (opt.observer) opt.observer(0, 0.0, field);
    for (std::size_t s = 1; s <= steps; ++s) {
        prop.advance(field);
        fit.z.push_back(static_cast<double>(s) * cfg.dz);
        fit.core_power.push_back(prop.core_power(field));
        if (opt.observer) opt.observer(s, fit.z.back(), field);
    }

    const double z_end = fit.z.back();
    double n = 0, sz = 0, sy = 0, szz = 0, szy = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < fit.z.size(); ++i) {
        const double z = fit.z[i];
        if (z < opt.window_lo * z_end || z > opt.window_hi * z_end) continue;
        if (!(fit.core_power[i] > 0.0)) throw NumericalError("measure_decay: core power vanished");
        const double y = std::log(fit.core_power[i]);
        pts.emplace_back(z, y);
        n += 1;
        sz += z;
        sy += y;
        szz += z * z;
        szy += z * y;
    }
    const double slope = (n * szy - sz * sy) / (n * szz - sz * sz);
    const double intercept = (sy - slope * sz) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (const auto& [z, y] : pts) {
        const double r = y - (intercept + slope * z);
        ss_res += r * r;
        ss_tot += (y - mean) * (y - mean);
    }
    fit.rate = -slope;
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.rms_residual = std::sqrt(ss_res / n);
    fit.exponential = fit.r_squared >= opt.min_r_squared || fit.rms_residual < opt.flat_rms;
    return fit;
}

/// Samples a mode on x and applies a window that is 1 for |x| <= A and falls
/// as a raised cosine to 0 at |x| = 3A, cutting off the growing exterior tail.
inline std::vector<cplx> tapered_mode(const ModeField& field, std::span<const double> x)
{
    const double A = field.half_width_A;
    std::vector<cplx> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double r = std::clamp((std::abs(x[j]) - A) / (2.0 * A), 0.0, 1.0);
        const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * r));
        out[j] = window == 0.0 ? cplx(0.0) : window * field.value(x[j]);
    }
    return out;
}

/// exp(-(x - x0)^2 / (4 sigma^2)) e^{iKx}; |E|^2 has standard deviation sigma.
inline std::vector<cplx> gaussian_beam(std::span<const double> x, double center, double sigma, double K = 0.0)
{
    if (!(sigma > 0.0)) throw ValidationError("gaussian_beam: width must be positive");
    std::vector<cplx> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - center;
        out[j] = std::exp(-d * d / (4.0 * sigma * sigma)) * std::polar(1.0, K * x[j]);
    }
    return out;
}

} // namespace leaky
