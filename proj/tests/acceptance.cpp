// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "leaky/leaky.hpp"
#include "oracles.hpp"

using namespace leaky;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail)
{
    std::printf("%s criterion %2d: %s [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c)
{
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const SlabConfig slab(30.0, 1.5);

void table_reproduction()
{
    std::vector<double> times;
    std::vector<Resonance> list;
    for (int rep = 0; rep < 101; ++rep) {
        const auto t0 = clock_type::now();
        list = approximate_resonances(slab);
        times.push_back(seconds_since(t0));
    }
    std::nth_element(times.begin(), times.begin() + 50, times.end());
    bool ok = list.size() == 17;
    double worst = 0.0;
    for (std::size_t i = 0; ok && i < list.size(); ++i) {
        ok = ok && list[i].mode_index_m == oracle::table1[i].m;
        worst = std::max({worst, std::abs(list[i].eigenvalue.eps_R - oracle::table1[i].eps_R),
                          std::abs(list[i].eigenvalue.half_width_Gamma - oracle::table1[i].half_gamma)});
    }
    ok = ok && worst <= 1e-6 && times[50] < 1e-3;
    report(1, ok, "approximate resonances reproduce the 34 tabulated numbers",
           fmt("modes=%.0f max|diff|=%.2e median runtime=%.2e s", static_cast<double>(list.size()), worst, times[50]));
}

void mode_range()
{
    const ModeRange r = mode_index_range(slab);
    report(2, r.m_min == 24 && r.m_max == 40, "mode index range is [24, 40]",
           fmt("got [%.0f, %.0f]", r.m_min, r.m_max));
}

std::vector<Resonance> exact_roots()
{
    const auto t0 = clock_type::now();
    const std::vector<Resonance> seeds = approximate_resonances(slab);
    std::vector<Resonance> roots;
    double worst_res = 0.0, worst_dist = 0.0;
    bool ok = true;
    try {
        roots = refined_resonances(slab);
    } catch (const std::exception& e) {
        report(3, false, "refined roots are exact, near their seeds and complete", e.what());
        return roots;
    }
    for (std::size_t i = 0; i < roots.size(); ++i) {
        worst_res = std::max(worst_res, std::abs(siegert_residual(roots[i].eigenvalue, slab)));
        const double dist = std::abs(roots[i].eigenvalue.value() - seeds[i].eigenvalue.value()) / seeds[i].eigenvalue.width();
        worst_dist = std::max(worst_dist, dist);
    }
    auto f = [](cplx e) { return oracle::quantization(e, 30.0, 1.5); };
    const int count = oracle::winding_number(f, -1.0 + 1e-6, -1e-6, -0.05, 0.0);
    const double elapsed = seconds_since(t0);
    ok = roots.size() == 17 && worst_res <= 1e-10 && worst_dist <= 5.0 && count == 17 && elapsed < 1.0;
    report(3, ok, "refined roots are exact, near their seeds and complete",
           fmt("max|f|=%.2e max dist=%.2f Gamma", worst_res, worst_dist)
               + fmt(" zeros in strip=%.0f runtime=%.2e s", count, elapsed));
    return roots;
}

void outgoing_condition(const std::vector<Resonance>& roots)
{
    double worst = 0.0;
    for (const Resonance& r : roots) {
        const ModeField f = mode_profile(r, slab);
        const cplx iK = cplx(0, 1) * f.K();
        for (double d : {1e-6, 1e-3, 1.0}) {
            worst = std::max(worst, std::abs(f.log_derivative(30.0 + d) + iK));
            worst = std::max(worst, std::abs(f.log_derivative(-30.0 - d) - iK));
        }
    }
    report(4, roots.size() == 17 && worst <= 1e-8, "exterior log derivative equals -/+ iK for every mode",
           fmt("max|beta -+ iK|=%.2e", worst));
}

void fbw_properties()
{
    const FbwLine line(-0.973621, 0.0102084);
    const double peak = lineshape(line, line.center_E0);
    const double lo = lineshape(line, line.center_E0 - line.half_width());
    const double hi = lineshape(line, line.center_E0 + line.half_width());
    const double surv = std::norm(survival_amplitude(line, lifetime(line))) / std::norm(survival_amplitude(line, 0.0));
    const double err = std::max({std::abs(peak - 1.0), std::abs(lo - 0.5), std::abs(hi - 0.5),
                                 std::abs(surv - std::exp(-1.0))});
    report(5, err <= 1e-12, "FBW peak, half maximum and one-lifetime survival", fmt("max error=%.2e", err));
}

std::vector<std::size_t> transmission_peaks(const std::vector<double>& grid, std::vector<double>& T)
{
    T.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) T[i] = transmission_coefficient(grid[i], slab);
    return local_maxima(T);
}

void superposition_vs_transmission(const std::vector<double>& grid)
{
    std::vector<double> T;
    const std::vector<std::size_t> peaks = transmission_peaks(grid, T);
    std::vector<FbwLine> lines;
    for (const Resonance& r : approximate_resonances(slab)) lines.emplace_back(r.eigenvalue.eps_R, r.eigenvalue.width());
    double worst = 0.0, at = 0.0;
    for (std::size_t i : peaks) {
        const double d = std::abs(fbw_superposition(grid[i], lines, lines.size()) - T[i]);
        if (d > worst) worst = d, at = grid[i];
    }
    report(6, peaks.size() == 17 && worst <= 0.05, "17-line FBW sum tracks T within 0.05 at every T peak",
           fmt("peaks=%.0f max|omega_17 - T|=%.3f at eps_R=%.4f", static_cast<double>(peaks.size()), worst, at));
}

void peak_coincidence(const std::vector<double>& grid)
{
    std::vector<double> T, dz(grid.size());
    const std::vector<std::size_t> tp = transmission_peaks(grid, T);
    for (std::size_t i = 0; i < grid.size(); ++i) dz[i] = longitudinal_shift(grid[i], slab).k0_delta_z;
    const std::vector<std::size_t> zp = local_maxima(dz);
    bool ok = tp.size() == 17 && zp.size() == 17;
    std::size_t worst = 0;
    for (std::size_t k = 0; ok && k < tp.size(); ++k) {
        const std::size_t off = tp[k] > zp[k] ? tp[k] - zp[k] : zp[k] - tp[k];
        worst = std::max(worst, off);
    }
    ok = ok && worst <= 1;
    report(7, ok, "T maxima and shift maxima coincide on the 4096-point grid",
           fmt("T peaks=%.0f shift peaks=%.0f max offset=%.0f steps", static_cast<double>(tp.size()),
               static_cast<double>(zp.size()), static_cast<double>(worst)));
}

void negative_shift()
{
    double lowest = 1e300, at = 0.0;
    for (double A : linspace(1.0, 60.0, 1200)) {
        const double v = longitudinal_shift(-0.995, SlabConfig(A, 1.5)).k0_delta_z;
        if (v < lowest) lowest = v, at = A;
    }
    report(8, lowest < 0.0, "shift at eps_R=-0.995 goes negative for some k0a in [1, 60]",
           fmt("min k0 dz=%.3f at k0a=%.3f", lowest, at));
}

void phase_derivative_oracle()
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> e(-0.999, -0.001);
    auto phi = [](double K) { return transfer_amplitudes(0.5 * K * K - 1.0, slab).phase_phi; };
    double worst = 0.0, worst_rel = 0.0, worst_rich = 0.0;
    const double h = 1e-5;
    auto central = [&](double K, double step) { return (phi(K + step) - phi(K - step)) / (2.0 * step); };
    for (int i = 0; i < 100; ++i) {
        const double eps = e(rng);
        const double K = std::sqrt(2.0 * (eps + 1.0));
        const double fd = central(K, h);
        const double exact = phase_derivative(eps, slab);
        worst = std::max(worst, std::abs(exact - fd));
        worst_rel = std::max(worst_rel, std::abs(exact - fd) / std::abs(exact));
        // Richardson: removes the h^2 truncation term of the difference quotient.
        const double rich = (4.0 * fd - central(K, 2.0 * h)) / 3.0;
        worst_rich = std::max(worst_rich, std::abs(exact - rich));
    }
    report(9, worst <= 1e-6, "analytic dphi/dK agrees with central differences (h=1e-5) at 100 points",
           fmt("max|analytic - FD|=%.2e relative=%.2e Richardson-corrected=%.2e", worst, worst_rel, worst_rich));
}

void modal_decay(const std::vector<Resonance>& roots)
{
    double worst = 0.0;
    std::vector<double> widths;
    for (int m : {24, 32, 40}) {
        const ModeField f = mode_profile(roots.at(m - 24), slab);
        const FieldGrid g = propagate_mode(f, linspace(-90.0, 90.0, 181), linspace(0.0, 300.0, 61));
        const double gamma = f.resonance.eigenvalue.width();
        widths.push_back(gamma);
        for (std::size_t iz = 0; iz < g.nz(); ++iz)
            for (std::size_t ix = 0; ix < g.nx(); ++ix) {
                const double ref = std::exp(-gamma * g.z_grid[iz]) * std::norm(g.at(0, ix));
                worst = std::max(worst, std::abs(std::norm(g.at(iz, ix)) - ref) / std::max(ref, 1e-300));
            }
    }
    const bool ordered = widths[0] < widths[1] && widths[1] < widths[2];
    report(10, worst <= 1e-12 && ordered, "|E|^2 = exp(-Gamma z)|phi|^2 and Gamma grows with m",
           fmt("max rel error=%.2e Gamma(24,32,40)=%.5f,%.5f", worst, widths[0], widths[1])
               + fmt(",%.5f", widths[2]));
}

void bpm_cross_validation(const std::vector<Resonance>& roots)
{
    const auto t0 = clock_type::now();
    const BpmConfig cfg = BpmConfig::for_slab(slab);
    const ModeField f = mode_profile(roots.at(0), slab);
    const double z_max = std::max(100.0, 5.0 / f.resonance.eigenvalue.width());
    const DecayFit fit = measure_decay(cfg, tapered_mode(f, cfg.x_grid()), z_max);
    const double elapsed = seconds_since(t0);
    const double rate_err = std::abs(fit.rate - 0.0102084) / 0.0102084;

    // Free Gaussian in a uniform medium.
    const double sigma0 = 1.0;
    const Propagator free(BpmConfig::uniform(1.0, 40.0, 4097, 0.05));
    std::vector<cplx> E = gaussian_beam(free.x(), 0.0, sigma0);
    for (int s = 0; s < 100; ++s) free.advance(E);
    double w = 0, m2 = 0;
    for (std::size_t j = 0; j < E.size(); ++j) {
        w += std::norm(E[j]);
        m2 += std::norm(E[j]) * free.x()[j] * free.x()[j];
    }
    const double expected = std::sqrt(sigma0 * sigma0 + std::pow(5.0 / (2.0 * sigma0), 2));
    const double width_err = std::abs(std::sqrt(m2 / w) - expected) / expected;

    // Norm without absorber.
    BpmConfig lossless = cfg;
    lossless.absorber_width = 0.0;
    lossless.absorber_strength = 0.0;
    const Propagator p(lossless);
    std::vector<cplx> F = tapered_mode(f, p.x());
    double norm_err = 0.0, prev = p.weighted_norm(F);
    for (int s = 0; s < 200; ++s) {
        p.advance(F);
        const double now = p.weighted_norm(F);
        norm_err = std::max(norm_err, std::abs(now - prev) / prev);
        prev = now;
    }
    const bool ok = rate_err <= 0.10 && width_err <= 1e-3 && norm_err <= 1e-10 && elapsed < 60.0;
    report(11, ok, "BPM decay rate, Gaussian spreading and norm conservation",
           fmt("rate=%.6f (%.2f%% off) ", fit.rate, 100 * rate_err)
               + fmt("width err=%.2e norm drift=%.2e/step ", width_err, norm_err)
               + fmt("runtime=%.1f s", elapsed));
}

void wavepacket_oracle(const std::vector<Resonance>& roots)
{
    const double eps = roots.at(4).eigenvalue.eps_R;
    const double Kc = std::sqrt(2.0 * (eps + 1.0));
    const double target = longitudinal_shift(eps, slab).k0_delta_z;
    const double wide = wavepacket_shift(eps, Kc / 20.0, slab);
    const double narrow = wavepacket_shift(eps, Kc / 40.0, slab);
    const double err_wide = std::abs(wide - target) / std::abs(target);
    const double err_narrow = std::abs(narrow - target) / std::abs(target);
    report(12, err_wide <= 0.05 && err_narrow < err_wide,
           "wave-packet shift within 5% of stationary phase at m=28, sigma_K=K_c/20, and closer at K_c/40",
           fmt("stationary=%.3f packet(K_c/20)=%.3f (%.1f%% off) ", target, wide, 100 * err_wide)
               + fmt("packet(K_c/40)=%.3f (%.1f%% off)", narrow, 100 * err_narrow));
}

} // namespace

int main()
{
    const std::vector<double> grid = linspace(-0.999, -0.001, 4096);
    table_reproduction();
    mode_range();
    const std::vector<Resonance> roots = exact_roots();
    if (roots.size() != 17) {
        std::printf("refinement failed; criteria 4, 10, 11, 12 cannot run\n");
        return 12;
    }
    outgoing_condition(roots);
    fbw_properties();
    superposition_vs_transmission(grid);
    peak_coincidence(grid);
    negative_shift();
    phase_derivative_oracle();
    modal_decay(roots);
    bpm_cross_validation(roots);
    wavepacket_oracle(roots);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures;
}
