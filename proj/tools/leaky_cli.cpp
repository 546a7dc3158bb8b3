// leaky: command-line front end. Every subcommand writes CSV (default) or JSON
// to --output, or to stdout when no output path is given. Relative output
// paths are resolved against $LEAKY_OUTPUT_DIR when it is set.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leaky/io.hpp"
#include "leaky/leaky.hpp"

namespace {

using namespace leaky;
namespace fs = std::filesystem;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Common {
    double k0a = 30.0;
    double u0 = 1.5;
    std::string format = "csv";
    std::string output;
};

void add_slab_options(CLI::App* app, Common& c, bool required = true)
{
    auto* a = app->add_option("--k0a", c.k0a, "slab half-width k0*a");
    auto* u = app->add_option("--u0", c.u0, "core refractive index U0 (> 1)");
    if (required) {
        a->required();
        u->required();
    }
}

void add_output_options(CLI::App* app, Common& c)
{
    app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("-o,--output", c.output, "output file (stdout when omitted)");
}

// Every option of the subcommand with its parsed (or default) value.
io::Metadata collect_metadata(const CLI::App* app)
{
    io::Metadata meta{{"command", app->get_name()}};
    for (const CLI::Option* opt : app->get_options()) {
        const std::string name = opt->get_name(false, true);
        if (name.empty() || name == "--help") continue;
        std::string value;
        if (opt->count() > 0) {
            for (const std::string& r : opt->results()) value += (value.empty() ? "" : " ") + r;
        } else {
            value = opt->get_default_str();
            if (value.empty()) continue;
        }
        meta.emplace_back(name, value);
    }
    return meta;
}

fs::path resolve_output(const std::string& path)
{
    fs::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("LEAKY_OUTPUT_DIR"); dir && *dir) p = fs::path(dir) / p;
    }
    return p;
}

// Opens --output or falls back to stdout.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (path.empty()) return;
        const fs::path p = resolve_output(path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        file_ = std::make_unique<std::ofstream>(p, std::ios::binary);
        if (!*file_) throw ValidationError("output: cannot open '" + p.string() + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit(const Common& c, const io::Metadata& meta, const Curve& curve)
{
    Sink sink(c.output);
    if (c.format == "json") {
        io::json doc;
        doc["metadata"] = io::metadata_json(meta);
        doc["curve"] = io::to_json(curve);
        sink.stream() << doc.dump(1) << '\n';
    } else {
        io::write_csv(sink.stream(), curve, meta);
    }
}

// ---------------------------------------------------------------- resonances

int run_resonances(const CLI::App* app, const Common& c, bool refine)
{
    const SlabConfig slab(c.k0a, c.u0);
    const std::vector<Resonance> list = refine ? refined_resonances(slab) : approximate_resonances(slab);
    const io::Metadata meta = collect_metadata(app);

    Sink sink(c.output);
    if (c.format == "json") {
        io::json doc;
        doc["metadata"] = io::metadata_json(meta);
        io::json rows = io::json::array();
        for (const Resonance& r : list) {
            rows.push_back({{"m", r.mode_index_m},
                            {"eps_R", r.eigenvalue.eps_R},
                            {"half_Gamma", r.eigenvalue.half_width_Gamma},
                            {"re_K", r.wavenumbers.K.real()},
                            {"im_K", r.wavenumbers.K.imag()},
                            {"residual", r.residual},
                            {"method", to_string(r.method)}});
        }
        doc["resonances"] = std::move(rows);
        sink.stream() << doc.dump(1) << '\n';
    } else {
        std::ostream& os = sink.stream();
        io::write_metadata_csv(os, meta);
        os << "m,eps_R,half_Gamma,re_K,im_K,residual,method\n";
        for (const Resonance& r : list) {
            os << r.mode_index_m << ',' << io::format_number(r.eigenvalue.eps_R) << ','
               << io::format_number(r.eigenvalue.half_width_Gamma) << ','
               << io::format_number(r.wavenumbers.K.real()) << ',' << io::format_number(r.wavenumbers.K.imag())
               << ',' << io::format_number(r.residual) << ',' << to_string(r.method) << '\n';
        }
    }
    if (list.empty()) {
        std::cerr << "warning: no leaky modes: no integer m satisfies sqrt(2U0(U0-1)) < m pi/(2 k0a) < sqrt(2) U0"
                     " for k0a = " << c.k0a << ", u0 = " << c.u0 << '\n';
        return kExitValidation;
    }
    return 0;
}

// -------------------------------------------------------------- transmission

int run_transmission(const CLI::App* app, const Common& c, const std::string& eps_text)
{
    const SlabConfig slab(c.k0a, c.u0);
    const std::vector<double> eps = io::parse_grid(eps_text, "--eps");
    std::vector<double> T(eps.size());
    std::vector<cplx> r(eps.size()), t(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const ScatteringAmplitudes a = transfer_amplitudes(eps[i], slab);
        r[i] = a.r;
        t[i] = a.t;
        T[i] = std::norm(a.t);
    }
    Curve curve("eps_R", eps);
    curve.add("T", T).add("r", std::span<const cplx>(r)).add("t", std::span<const cplx>(t));
    curve.add("phi", phase_sweep(eps, slab));
    emit(c, collect_metadata(app), curve);
    return 0;
}

// --------------------------------------------------------------------- shift

struct ShiftArgs {
    std::string eps;
    std::optional<double> eps_fixed;
    std::string k0a_sweep;
};

int run_shift(const CLI::App* app, const Common& c, const ShiftArgs& s)
{
    if (s.eps_fixed) {
        if (s.k0a_sweep.empty()) throw ValidationError("--eps-fixed requires --k0a-sweep start:stop:count");
        const std::vector<double> widths = io::parse_grid(s.k0a_sweep, "--k0a-sweep");
        std::vector<double> dz, zin, zt, dphi;
        for (double a : widths) {
            const ShiftSample smp = longitudinal_shift(*s.eps_fixed, SlabConfig(a, c.u0));
            dz.push_back(smp.k0_delta_z);
            zin.push_back(smp.z_in);
            zt.push_back(smp.z_t);
            dphi.push_back(smp.dphi_dK);
        }
        Curve curve("k0a", widths);
        curve.add("k0_delta_z", dz).add("z_in", zin).add("z_t", zt).add("dphi_dK", dphi);
        emit(c, collect_metadata(app), curve);
        return 0;
    }
    const SlabConfig slab(c.k0a, c.u0);
    const std::vector<double> eps = io::parse_grid(s.eps, "--eps");
    std::vector<double> dz, zin, zt, dphi, T;
    for (double e : eps) {
        const ShiftSample smp = longitudinal_shift(e, slab);
        dz.push_back(smp.k0_delta_z);
        zin.push_back(smp.z_in);
        zt.push_back(smp.z_t);
        dphi.push_back(smp.dphi_dK);
        T.push_back(transmission_coefficient(e, slab));
    }
    Curve curve("eps_R", eps);
    curve.add("k0_delta_z", dz).add("z_in", zin).add("z_t", zt).add("dphi_dK", dphi).add("T", T);
    emit(c, collect_metadata(app), curve);
    return 0;
}

// ----------------------------------------------------------------------- fbw

struct FbwArgs {
    std::optional<double> e0;
    std::optional<double> gamma;
    std::string grid;
    std::string t_grid;
    bool from_slab = false;
    bool refined = false;
    std::optional<std::size_t> terms;
};

int run_fbw(const CLI::App* app, const Common& c, const FbwArgs& f)
{
    const io::Metadata meta = collect_metadata(app);
    if (f.from_slab) {
        if (f.grid.empty()) throw ValidationError("--grid is required");
        const SlabConfig slab(c.k0a, c.u0);
        const std::vector<Resonance> res = f.refined ? refined_resonances(slab) : approximate_resonances(slab);
        if (res.empty()) throw ValidationError("--k0a/--u0: the slab has no leaky modes to superpose");
        const std::vector<FbwLine> lines = fbw_lines(res);
        const std::size_t N = f.terms.value_or(lines.size());
        const std::vector<double> E = io::parse_grid(f.grid, "--grid");
        std::vector<double> omega(E.size()), T(E.size());
        for (std::size_t i = 0; i < E.size(); ++i) {
            omega[i] = fbw_superposition(E[i], lines, N);
            T[i] = transmission_coefficient(E[i], slab);
        }
        Curve curve("eps_R", E);
        curve.add("omega_N", omega).add("T", T);
        emit(c, meta, curve);
        return 0;
    }

    if (!f.e0 || !f.gamma) throw ValidationError("--e0 and --gamma are required (or use --from-slab)");
    const FbwLine line(*f.e0, *f.gamma);
    if (!f.t_grid.empty()) {
        // Optical reading: hbar -> 1/k0 and t -> z, so the abscissa is k0 z.
        const std::vector<double> t = io::parse_grid(f.t_grid, "--t-grid");
        std::vector<cplx> amp(t.size());
        std::vector<double> ratio(t.size());
        const double t0 = std::norm(survival_amplitude(line, 0.0));
        for (std::size_t i = 0; i < t.size(); ++i) {
            amp[i] = survival_amplitude(line, t[i]);
            ratio[i] = t0 > 0.0 ? std::norm(amp[i]) / t0 : 0.0;
        }
        Curve curve("k0_z", t);
        curve.add("amplitude", std::span<const cplx>(amp)).add("survival_ratio", ratio);
        emit(c, meta, curve);
        return 0;
    }
    if (f.grid.empty()) throw ValidationError("--grid or --t-grid is required");
    const std::vector<double> E = io::parse_grid(f.grid, "--grid");
    std::vector<double> omega(E.size());
    std::vector<cplx> C(E.size());
    for (std::size_t i = 0; i < E.size(); ++i) {
        omega[i] = lineshape(line, E[i]);
        C[i] = fourier_coefficient(line, E[i]);
    }
    Curve curve("eps", E);
    curve.add("omega", omega).add("C", std::span<const cplx>(C));
    emit(c, meta, curve);
    return 0;
}

// ---------------------------------------------------------------- mode-field

struct ModeArgs {
    int m = 0;
    std::string x_grid;
    std::string z_grid = "0:200:401";
    std::string part = "re";
};

Resonance refined_mode(const SlabConfig& slab, int m)
{
    const ModeRange range = mode_index_range(slab);
    if (!range.contains(m))
        throw ValidationError("--m: mode index " + std::to_string(m) + " outside the admissible range ["
                              + std::to_string(range.m_min) + ", " + std::to_string(range.m_max) + "]");
    return refine_resonance(approximate_resonance(m, slab), slab);
}

int run_mode_field(const CLI::App* app, const Common& c, const ModeArgs& a)
{
    const SlabConfig slab(c.k0a, c.u0);
    const io::FieldPart part = io::parse_field_part(a.part);
    const ModeField field = mode_profile(refined_mode(slab, a.m), slab);
    const std::string xg = a.x_grid.empty()
                               ? io::format_number(-2.0 * c.k0a) + ":" + io::format_number(2.0 * c.k0a) + ":801"
                               : a.x_grid;
    const FieldGrid grid = propagate_mode(field, io::parse_grid(xg, "--x"), io::parse_grid(a.z_grid, "--z"));

    io::Metadata meta = collect_metadata(app);
    meta.emplace_back("eps_R", io::format_number(field.resonance.eigenvalue.eps_R));
    meta.emplace_back("half_Gamma", io::format_number(field.resonance.eigenvalue.half_width_Gamma));
    Sink sink(c.output);
    if (c.format == "json") {
        io::json doc;
        doc["metadata"] = io::metadata_json(meta);
        doc["field"] = io::to_json(grid, part);
        sink.stream() << doc.dump(1) << '\n';
    } else {
        io::write_csv(sink.stream(), grid, part, meta);
    }
    return 0;
}

// ----------------------------------------------------------------- propagate

struct PropagateArgs {
    std::optional<int> m;
    std::optional<double> packet_eps;
    double packet_width = 0.0;
    std::optional<double> packet_x0;
    std::string init;
    std::optional<double> domain;
    std::optional<std::size_t> nx;
    std::optional<double> dz;
    std::optional<double> absorber_width;
    std::optional<double> absorber_strength;
    std::optional<double> z_max;
    std::size_t snapshots = 21;
    std::string part = "complex";
    std::string field_output;
};

int run_propagate(const CLI::App* app, const Common& c, const PropagateArgs& p)
{
    const SlabConfig slab(c.k0a, c.u0);
    BpmConfig cfg = BpmConfig::for_slab(slab);
    if (p.domain) {
        cfg.domain_X = *p.domain;
        if (!p.absorber_width) cfg.absorber_width = 0.25 * cfg.domain_X;
    }
    if (p.nx) cfg.nx = *p.nx;
    if (p.dz) cfg.dz = *p.dz;
    if (p.absorber_width) cfg.absorber_width = *p.absorber_width;
    if (p.absorber_strength) cfg.absorber_strength = *p.absorber_strength;
    cfg.validate();

    const int sources = (p.m ? 1 : 0) + (p.packet_eps ? 1 : 0) + (p.init.empty() ? 0 : 1);
    if (sources != 1) throw ValidationError("choose exactly one source: --m, --packet-eps or --init");

    const std::vector<double> x = cfg.x_grid();
    std::vector<cplx> init;
    double z_max = p.z_max.value_or(400.0);
    io::Metadata meta = collect_metadata(app);
    if (p.m) {
        const ModeField field = mode_profile(refined_mode(slab, *p.m), slab);
        init = tapered_mode(field, x);
        if (!p.z_max) z_max = std::max(100.0, 5.0 / field.resonance.eigenvalue.width());
        meta.emplace_back("Gamma", io::format_number(field.resonance.eigenvalue.width()));
    } else if (p.packet_eps) {
        if (!(*p.packet_eps > -1.0 && *p.packet_eps < 0.0))
            throw ValidationError("--packet-eps must lie in (-1, 0)");
        const double width = p.packet_width > 0.0 ? p.packet_width : c.k0a;
        init = gaussian_beam(x, p.packet_x0.value_or(-3.0 * c.k0a), width, std::sqrt(2.0 * (*p.packet_eps + 1.0)));
    } else {
        std::ifstream in(p.init, std::ios::binary);
        if (!in) throw ValidationError("--init: cannot open '" + p.init + "'");
        const io::json doc = io::read_json(in);
        const io::json& fj = doc.contains("field") ? doc.at("field") : doc;
        const FieldGrid grid = io::field_from_json(fj);
        if (grid.nx() != x.size())
            throw ValidationError("--init: field has " + std::to_string(grid.nx())
                                  + " x samples but the BPM grid has " + std::to_string(x.size()));
        for (std::size_t j = 0; j < x.size(); ++j)
            if (std::abs(grid.x_grid[j] - x[j]) > 1e-9 * (1.0 + std::abs(x[j])))
                throw ValidationError("--init: field x grid does not match the BPM grid");
        const auto row = grid.row(0);
        init.assign(row.begin(), row.end());
    }

    const auto steps = static_cast<std::size_t>(std::llround(z_max / cfg.dz));
    const std::size_t shots = std::max<std::size_t>(2, p.snapshots);
    std::vector<std::size_t> snap_steps;
    for (std::size_t i = 0; i < shots; ++i) snap_steps.push_back((i * steps + (shots - 1) / 2) / (shots - 1));
    std::vector<double> snap_z;
    std::vector<std::vector<cplx>> snap_rows;

    DecayOptions opt;
    std::size_t next = 0;
    opt.observer = [&](std::size_t s, double z, std::span<const cplx> field) {
        while (next < snap_steps.size() && snap_steps[next] == s) {
            if (snap_z.empty() || z > snap_z.back()) {
                snap_z.push_back(z);
                snap_rows.emplace_back(field.begin(), field.end());
            }
            ++next;
        }
    };
    const DecayFit fit = measure_decay(cfg, init, z_max, opt);

    FieldGrid grid(x, snap_z);
    for (std::size_t i = 0; i < snap_rows.size(); ++i)
        std::copy(snap_rows[i].begin(), snap_rows[i].end(), grid.row(i).begin());

    Curve curve("z", fit.z);
    curve.add("core_power", fit.core_power);
    meta.emplace_back("decay_rate", io::format_number(fit.rate));
    meta.emplace_back("r_squared", io::format_number(fit.r_squared));
    meta.emplace_back("exponential", fit.exponential ? "true" : "false");

    const io::FieldPart part = io::parse_field_part(p.part);
    if (c.format == "json") {
        Sink sink(c.output);
        io::json doc;
        doc["metadata"] = io::metadata_json(meta);
        doc["fit"] = {{"decay_rate", fit.rate}, {"r_squared", fit.r_squared}, {"exponential", fit.exponential}};
        doc["curve"] = io::to_json(curve);
        doc["field"] = io::to_json(grid, part);
        sink.stream() << doc.dump(1) << '\n';
    } else {
        {
            Sink sink(c.output);
            io::write_csv(sink.stream(), curve, meta);
        }
        if (!p.field_output.empty()) {
            Sink sink(p.field_output);
            io::write_csv(sink.stream(), grid, part, meta);
        }
    }
    if (!fit.exponential)
        std::cerr << "warning: core power is not exponential over the fit window (R^2 = " << fit.r_squared << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Leaky modes of a dielectric slab: resonances, transmission, shifts, FBW lines and fields"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Common common;

    auto* res = app.add_subcommand("resonances", "leaky-mode eigenvalues");
    add_slab_options(res, common);
    add_output_options(res, common);
    bool refine = false;
    res->add_flag("--refine", refine, "Newton-refine on the outgoing-wave condition");

    auto* trans = app.add_subcommand("transmission", "transmission coefficient and amplitudes");
    add_slab_options(trans, common);
    add_output_options(trans, common);
    std::string trans_eps = "-0.999:-0.001:4096";
    trans->add_option("--eps", trans_eps, "eps_R grid start:stop:count");

    auto* shift = app.add_subcommand("shift", "longitudinal shift k0*delta_z");
    add_slab_options(shift, common, false);
    add_output_options(shift, common);
    ShiftArgs shift_args;
    shift_args.eps = "-0.999:-0.001:4096";
    shift->add_option("--eps", shift_args.eps, "eps_R grid start:stop:count");
    shift->add_option("--eps-fixed", shift_args.eps_fixed, "fixed eps_R for a width sweep");
    shift->add_option("--k0a-sweep", shift_args.k0a_sweep, "k0a grid start:stop:count");

    auto* fbw = app.add_subcommand("fbw", "Fock-Breit-Wigner lineshape, survival amplitude or slab superposition");
    add_slab_options(fbw, common, false);
    add_output_options(fbw, common);
    FbwArgs fbw_args;
    fbw->add_option("--e0", fbw_args.e0, "line centre E0");
    fbw->add_option("--gamma", fbw_args.gamma, "line width Gamma");
    fbw->add_option("--grid", fbw_args.grid, "energy grid start:stop:count");
    fbw->add_option("--t-grid", fbw_args.t_grid, "evolution grid (t, or k0 z) start:stop:count");
    fbw->add_flag("--from-slab", fbw_args.from_slab, "superpose the slab's resonances and compare with T");
    fbw->add_flag("--refined", fbw_args.refined, "use refined instead of approximate resonances");
    fbw->add_option("--terms", fbw_args.terms, "number N of lines in the superposition");

    auto* mode = app.add_subcommand("mode-field", "analytic leaky-mode field E(x, z)");
    add_slab_options(mode, common);
    add_output_options(mode, common);
    ModeArgs mode_args;
    mode->add_option("--m", mode_args.m, "mode index")->required();
    mode->add_option("--x", mode_args.x_grid, "x grid start:stop:count (default -2k0a:2k0a:801)");
    mode->add_option("--z", mode_args.z_grid, "z grid start:stop:count");
    mode->add_option("--part", mode_args.part, "re, im, abs2 or complex");

    auto* prop = app.add_subcommand("propagate", "finite-difference paraxial propagation");
    add_slab_options(prop, common);
    add_output_options(prop, common);
    PropagateArgs prop_args;
    prop->add_option("--m", prop_args.m, "launch the tapered refined mode m");
    prop->add_option("--packet-eps", prop_args.packet_eps, "launch a Gaussian beam with this eps_R");
    prop->add_option("--packet-width", prop_args.packet_width, "Gaussian beam width (default k0a)");
    prop->add_option("--packet-x0", prop_args.packet_x0, "Gaussian beam centre (default -3 k0a)");
    prop->add_option("--init", prop_args.init, "initial field: first row of a JSON field grid");
    prop->add_option("--domain", prop_args.domain, "transverse half-window X (default 8 k0a)");
    prop->add_option("--nx", prop_args.nx, "transverse grid points (default 4097)");
    prop->add_option("--dz", prop_args.dz, "axial step (default 0.05)");
    prop->add_option("--absorber-width", prop_args.absorber_width, "absorbing layer width (default X/4)");
    prop->add_option("--absorber-strength", prop_args.absorber_strength, "absorber peak strength (default 0.05)");
    prop->add_option("--z-max", prop_args.z_max, "propagation length (default max(100, 5/Gamma) for modes, else 400)");
    prop->add_option("--snapshots", prop_args.snapshots, "number of stored field rows");
    prop->add_option("--part", prop_args.part, "re, im, abs2 or complex");
    prop->add_option("--field-output", prop_args.field_output, "CSV file for the field snapshots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (res->parsed()) return run_resonances(res, common, refine);
        if (trans->parsed()) return run_transmission(trans, common, trans_eps);
        if (shift->parsed()) return run_shift(shift, common, shift_args);
        if (fbw->parsed()) return run_fbw(fbw, common, fbw_args);
        if (mode->parsed()) return run_mode_field(mode, common, mode_args);
        if (prop->parsed()) return run_propagate(prop, common, prop_args);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitValidation;
}
