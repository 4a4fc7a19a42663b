// Command-line front end: sweeps, run comparison, dressed spectra and cutoff scans.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cavrad/config.hpp"
#include "cavrad/csv_io.hpp"
#include "cavrad/manifold.hpp"
#include "cavrad/steady_state.hpp"
#include "cavrad/sweep.hpp"

namespace {

using namespace cavrad;

constexpr int kExitCompareFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnknownKey:
        case ErrorKind::OutOfRange:
        case ErrorKind::MissingRequired:
        case ErrorKind::ParseError:
        case ErrorKind::InvalidArgument: return kExitConfig;
        case ErrorKind::IoFailure:
        case ErrorKind::GridMismatch: return kExitIo;
        default: return kExitSolver;
    }
}

struct SweepFlags {
    std::string config_path;
    std::optional<std::string> preset;
    std::optional<std::string> axis;
    std::optional<std::string> range;
    std::optional<int> ncut;
    std::optional<std::string> out;
    std::optional<int> threads;
    bool no_r = false;
    bool with_r = false;
    bool auto_ncut = false;
    bool quiet = false;
};

void add_config_flags(CLI::App* cmd, SweepFlags& f) {
    cmd->add_option("-c,--config", f.config_path, "config file");
    cmd->add_option("--preset", f.preset, "named parameter preset (fig2a, fig2c, fig2e, fig3a, fig3c, fig3e)");
    cmd->add_option("--sweep", f.axis, "sweep axis: delta, delta_m, delta_cav, omega_l, phi_z");
    cmd->add_option("--range", f.range, "grid as lo:hi:points");
    cmd->add_option("--ncut", f.ncut, "Fock cutoff");
}

/// Preset, then file keys, then flags. A --preset flag replaces the file's preset key.
SweepConfig build_config(const SweepFlags& f) {
    SweepConfig c;
    const bool have_base = !f.config_path.empty() || f.preset.has_value();
    if (!f.config_path.empty())
        c = load_config(f.config_path, f.preset.value_or(""));
    else if (f.preset)
        c = preset_config(*f.preset);
    if (f.axis) {
        const auto a = parse_sweep_axis(*f.axis);
        if (!a) throw Error(ErrorKind::OutOfRange, "unknown sweep axis '" + *f.axis + "'");
        c.axis = *a;
    }
    if (f.range) c.range = parse_range(*f.range);
    if (!have_base && !(f.axis && f.range))
        throw Error(ErrorKind::MissingRequired, "give --config, --preset, or both --sweep and --range");
    if (f.ncut) c.base.ncut = *f.ncut;
    if (f.out) c.output_path = *f.out;
    if (f.threads) c.threads = *f.threads;
    if (f.no_r) c.compute_r = false;
    if (f.with_r) c.compute_r = true;
    if (f.auto_ncut) c.ncut_policy = NcutPolicy::automatic;
    c.validate();
    return c;
}

int run_sweep_command(const SweepFlags& f) {
    const SweepConfig config = build_config(f);
    auto progress = [&](std::size_t done, std::size_t total) {
        if (!f.quiet && (done % 10 == 0 || done == total)) std::fprintf(stderr, "\r%zu/%zu", done, total);
        if (!f.quiet && done == total) std::fprintf(stderr, "\n");
    };
    try {
        const SweepResult result = run_sweep(config, progress);
        emit_csv(result, config.output_path);
        emit_meta(result, config.output_path);
        if (!f.quiet) {
            std::fprintf(stderr, "wrote %s (%zu points, ncut %d, %.1f s)\n", config.output_path.c_str(),
                         result.records.size(), result.metadata.ncut, result.metadata.wall_seconds);
            for (const auto& w : result.windows)
                std::fprintf(stderr, "  %s window [%.12g, %.12g]\n", std::string(to_string(w.kind)).c_str(), w.delta_lo,
                             w.delta_hi);
        }
        return 0;
    } catch (const SweepFailure& e) {
        emit_csv(e.partial(), config.output_path);
        emit_meta(e.partial(), config.output_path);
        throw;
    }
}

void print_spectrum(const ManifoldSpectrum& s) {
    std::printf("N,index,eigenvalue,components\n");
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        std::string comps;
        for (std::size_t i = 0; i < s.basis_labels.size(); ++i) {
            const auto amp = s.eigenvectors(static_cast<long>(i), static_cast<long>(k));
            if (std::abs(amp) < 1e-8) continue;
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s%+.6f%+.6fi %s", comps.empty() ? "" : "; ", amp.real(), amp.imag(),
                          s.basis_labels[i].str().c_str());
            comps += buf;
        }
        std::printf("%d,%zu,%.12g,\"%s\"\n", s.excitation_number, k, s.eigenvalues[k], comps.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state photon statistics of two driven ladder atoms in a cavity"};
    app.require_subcommand(1);

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV plus .meta");
    add_config_flags(sweep, sweep_flags);
    sweep->add_option("-o,--out", sweep_flags.out, "output CSV path");
    sweep->add_option("--threads", sweep_flags.threads, "worker threads (0 = all cores)");
    sweep->add_flag("--no-r", sweep_flags.no_r, "skip the single-atom reference and R");
    sweep->add_flag("--r", sweep_flags.with_r, "compute R even without a preset");
    sweep->add_flag("--auto-ncut", sweep_flags.auto_ncut, "pick Ncut with the convergence scan over the grid");
    sweep->add_flag("-q,--quiet", sweep_flags.quiet, "no progress output");

    std::string cmp_a, cmp_b;
    double cmp_tol = 1e-6;
    auto* compare = app.add_subcommand("compare", "compare two sweep CSV files");
    compare->add_option("a", cmp_a, "first CSV")->required();
    compare->add_option("b", cmp_b, "second CSV")->required();
    compare->add_option("--tol", cmp_tol, "relative tolerance");

    double sp_g = 20.0;
    std::string sp_phi = "0";
    int sp_n = 1;
    bool sp_dressed = false;
    double sp_omega = 0.0;
    std::optional<double> sp_delta_l;
    auto* spectrum = app.add_subcommand("spectrum", "dressed-state spectrum of one excitation manifold");
    spectrum->add_option("--g", sp_g, "coupling");
    spectrum->add_option("--phi-z", sp_phi, "phase, e.g. 0 or pi");
    spectrum->add_option("-N,--excitations", sp_n, "excitation number");
    spectrum->add_flag("--dressed", sp_dressed, "include |e> and the control field exactly");
    spectrum->add_option("--omega-l", sp_omega, "control Rabi frequency (with --dressed)");
    spectrum->add_option("--delta-l", sp_delta_l, "control detuning (with --dressed; default resonance)");

    SweepFlags conv_flags;
    std::optional<double> conv_tol;
    bool conv_base = false;
    int conv_samples = 41;
    auto* converge = app.add_subcommand("converge", "smallest Fock cutoff converged across the sweep grid");
    add_config_flags(converge, conv_flags);
    converge->add_option("--tol", conv_tol, "relative observable tolerance (default: the config's ncut_tol)");
    converge->add_flag("--base", conv_base, "only the base point, not the sweep grid");
    converge->add_option("--samples", conv_samples, "grid points scanned")->check(CLI::Range(2, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sweep) return run_sweep_command(sweep_flags);
        if (*compare) {
            const auto report = compare_runs(cmp_a, cmp_b, cmp_tol);
            std::fputs(format_report(report).c_str(), stdout);
            return report.pass ? 0 : kExitCompareFailed;
        }
        if (*spectrum) {
            const double phi = parse_angle(sp_phi);
            if (sp_n < 0) throw Error(ErrorKind::OutOfRange, "excitation number must be >= 0");
            if (sp_dressed) {
                SystemParams p;
                p.g = sp_g;
                p.phi_z = phi;
                p.omega_l = sp_omega;
                p.delta_l = sp_delta_l ? *sp_delta_l : control_resonance_detuning(sp_g);
                print_spectrum(dressed_manifold_eigen(p, sp_n));
            } else {
                print_spectrum(manifold_eigen(sp_g, phi, sp_n));
            }
            return 0;
        }
        if (*converge) {
            SweepConfig c = build_config(conv_flags);
            if (conv_tol) c.ncut_tol = *conv_tol;
            c.validate();
            std::printf("%d\n", conv_base ? converge_ncut(resolved_base(c), c.ncut_tol) : sweep_ncut(c, conv_samples));
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    }
    return 0;
}
