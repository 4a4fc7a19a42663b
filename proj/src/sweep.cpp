#include "cavrad/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "cavrad/manifold.hpp"
#include "cavrad/steady_state.hpp"

namespace cavrad {

std::string_view to_string(SweepAxis a) noexcept {
    switch (a) {
        case SweepAxis::delta: return "delta";
        case SweepAxis::delta_m: return "delta_m";
        case SweepAxis::delta_cav: return "delta_cav";
        case SweepAxis::omega_l: return "omega_l";
        case SweepAxis::phi_z: return "phi_z";
    }
    return "delta";
}

std::string_view to_string(NcutPolicy p) noexcept { return p == NcutPolicy::fixed ? "fixed" : "auto"; }

std::optional<SweepAxis> parse_sweep_axis(std::string_view s) noexcept {
    for (SweepAxis a : {SweepAxis::delta, SweepAxis::delta_m, SweepAxis::delta_cav, SweepAxis::omega_l, SweepAxis::phi_z})
        if (s == to_string(a)) return a;
    return std::nullopt;
}

std::optional<NcutPolicy> parse_ncut_policy(std::string_view s) noexcept {
    if (s == "fixed") return NcutPolicy::fixed;
    if (s == "auto") return NcutPolicy::automatic;
    return std::nullopt;
}

double SweepRange::at(int i) const noexcept {
    if (i >= points - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
}

namespace {

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

SweepRange parse_range(std::string_view text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
        throw Error(ErrorKind::ParseError, "range must be lo:hi:points, got '" + std::string(text) + "'");
    const auto lo = parse_double(text.substr(0, c1));
    const auto hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    const auto n = parse_double(text.substr(c2 + 1));
    if (!lo || !hi || !n || *n != std::floor(*n) || std::abs(*n) > 1e9)
        throw Error(ErrorKind::ParseError, "range must be lo:hi:points, got '" + std::string(text) + "'");
    SweepRange r{*lo, *hi, static_cast<int>(*n)};
    if (!(r.lo < r.hi)) throw Error(ErrorKind::OutOfRange, "range requires lo < hi");
    if (r.points < 2) throw Error(ErrorKind::OutOfRange, "range requires at least 2 points");
    return r;
}

void SweepConfig::validate() const {
    base.validate();
    if (!(range.lo < range.hi)) throw Error(ErrorKind::OutOfRange, "range requires lo < hi");
    if (range.points < 2) throw Error(ErrorKind::OutOfRange, "range requires at least 2 points");
    if (axis == SweepAxis::omega_l && range.lo < 0.0)
        throw Error(ErrorKind::OutOfRange, "omega_l sweep must stay nonnegative");
    if (!(ncut_tol > 0.0)) throw Error(ErrorKind::OutOfRange, "ncut_tol must be > 0");
    if (threads < 0) throw Error(ErrorKind::OutOfRange, "threads must be >= 0");
    if (output_path.empty()) throw Error(ErrorKind::OutOfRange, "output path is empty");
}

namespace {

struct PresetSpec {
    const char* name;
    double phi_z;
    double omega_l;
    double eta;
    int ncut;
};

// Figure 2 drives the in-phase pair weakly; figure 3 drives the out-of-phase pair harder,
// which needs a larger photon cutoff.
constexpr PresetSpec kPresets[] = {
    {"fig2a", 0.0, 0.0, 2.0, 8},           {"fig2c", 0.0, 4.8, 2.0, 8},
    {"fig2e", 0.0, 11.0, 2.0, 8},          {"fig3a", std::numbers::pi, 0.0, 6.0, 12},
    {"fig3c", std::numbers::pi, 4.0, 6.0, 12}, {"fig3e", std::numbers::pi, 5.6, 6.0, 12},
};

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& p : kPresets) v.emplace_back(p.name);
        return v;
    }();
    return names;
}

SweepConfig preset_config(std::string_view name) {
    for (const auto& p : kPresets) {
        if (name != p.name) continue;
        SweepConfig c;
        c.preset = p.name;
        c.base = SystemParams{};
        c.base.g = 20.0;
        c.base.kappa = 1.0;
        c.base.gamma_gm = 1.0;
        c.base.gamma_me = 0.01;
        c.base.phi_z = p.phi_z;
        c.base.omega_l = p.omega_l;
        c.base.eta = p.eta;
        c.base.ncut = p.ncut;
        c.delta_l_auto = true;
        c.axis = SweepAxis::delta;
        c.range = SweepRange{};
        c.compute_r = true;
        c.output_path = std::string(p.name) + ".csv";
        return c;
    }
    throw Error(ErrorKind::UnknownKey, "unknown preset '" + std::string(name) + "'");
}

namespace {

void resolve_delta_l(const SweepConfig& config, SystemParams& p) {
    if (config.delta_l_auto) p.delta_l = p.omega_l > 0.0 ? control_resonance_detuning(p.g) : 0.0;
}

}  // namespace

SystemParams resolved_base(const SweepConfig& config) {
    SystemParams p = config.base;
    resolve_delta_l(config, p);
    return p;
}

SystemParams point_params(const SweepConfig& config, double value) {
    SystemParams p = config.base;
    switch (config.axis) {
        case SweepAxis::delta:
            p.delta_m = value;
            p.delta_cav = value;
            break;
        case SweepAxis::delta_m: p.delta_m = value; break;
        case SweepAxis::delta_cav: p.delta_cav = value; break;
        case SweepAxis::omega_l: p.omega_l = value; break;
        case SweepAxis::phi_z: p.phi_z = value; break;
    }
    resolve_delta_l(config, p);
    return p;
}

SweepFailure::SweepFailure(ErrorKind kind, const std::string& message, int point_index, double value,
                           SweepResult partial)
    : Error(kind, message), point_index_(point_index), value_(value), partial_(std::move(partial)) {}

namespace {

struct PointOutcome {
    ObservableRecord record;
    PointDiagnostics diagnostics;
};

PointOutcome solve_point(const SweepConfig& config, int ncut, double value, SteadyStateSolver& two,
                         SteadyStateSolver& one) {
    SystemParams p = point_params(config, value);
    p.ncut = ncut;
    const auto sol = two.solve(liouvillian(p));
    const auto stats = photon_statistics(sol.rho);
    std::optional<double> r;
    if (config.compute_r) {
        const auto ref = one.solve(liouvillian(single_atom_reference(p)));
        const double n1 = mean_photon_number(ref.rho);
        if (n1 >= kMeanPhotonFloor) r = radiance_witness(stats.mean_n, n1);
    }
    const auto check = sol.rho.check();
    return {make_record(value, stats, r),
            {sol.residual, sol.tail_population, check.hermiticity_error, check.trace_error, check.min_eigenvalue}};
}

unsigned worker_count(const SweepConfig& config, std::size_t tasks) {
    const unsigned t = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
    return std::clamp<unsigned>(t, 1u, static_cast<unsigned>(std::max<std::size_t>(tasks, 1)));
}

}  // namespace

int sweep_ncut(const SweepConfig& config, int samples) {
    config.validate();
    if (samples < 2) throw Error(ErrorKind::InvalidArgument, "sweep_ncut needs at least 2 samples");
    const int n = std::min(samples, config.range.points);
    std::vector<int> found(static_cast<std::size_t>(n), 0);
    std::atomic<int> next{0};
    std::mutex failure_mutex;
    std::optional<Error> failure;
    auto worker = [&] {
        for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1)) {
            const long i = std::lround(static_cast<double>(k) * (config.range.points - 1) / (n - 1));
            try {
                found[static_cast<std::size_t>(k)] =
                    converge_ncut(point_params(config, config.range.at(static_cast<int>(i))), config.ncut_tol);
            } catch (const Error& e) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = e;
                next.store(n);
            }
        }
    };
    const unsigned threads = worker_count(config, static_cast<std::size_t>(n));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) throw *failure;
    return *std::max_element(found.begin(), found.end());
}

SweepResult run_sweep(const SweepConfig& config, const SweepProgress& progress) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    SweepResult result;
    result.config = config;
    int ncut = config.base.ncut;
    if (config.ncut_policy == NcutPolicy::automatic) ncut = sweep_ncut(config);
    result.metadata.ncut = ncut;

    const auto total = static_cast<std::size_t>(config.range.points);
    const unsigned threads = worker_count(config, total);
    result.metadata.threads = static_cast<int>(threads);

    std::vector<std::optional<PointOutcome>> slots(total);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::atomic<bool> stop{false};
    std::mutex failure_mutex;
    std::optional<std::size_t> failed_index;
    ErrorKind failed_kind = ErrorKind::SingularSolve;
    std::string failed_message;

    auto worker = [&] {
        SteadyStateSolver two;
        SteadyStateSolver one;
        for (;;) {
            if (stop.load()) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            const double value = config.range.at(static_cast<int>(i));
            try {
                slots[i] = solve_point(config, ncut, value, two, one);
            } catch (const Error& e) {
                std::lock_guard lock(failure_mutex);
                if (!failed_index || i < *failed_index) {
                    failed_index = i;
                    failed_kind = e.kind();
                    failed_message = e.what();
                }
                stop.store(true);
                return;
            }
            const std::size_t finished = done.fetch_add(1) + 1;
            if (progress) progress(finished, total);
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (const auto& slot : slots) {
        if (!slot) break;
        result.records.push_back(slot->record);
        result.diagnostics.push_back(slot->diagnostics);
    }
    double residual_sum = 0.0;
    for (const auto& d : result.diagnostics) {
        result.metadata.max_residual = std::max(result.metadata.max_residual, d.residual);
        result.metadata.max_tail_population = std::max(result.metadata.max_tail_population, d.tail_population);
        residual_sum += d.residual;
    }
    if (!result.diagnostics.empty()) result.metadata.mean_residual = residual_sum / static_cast<double>(result.diagnostics.size());
    if (!result.records.empty()) result.windows = detect_blockade_windows(result.records);
    result.metadata.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (failed_index) {
        const int index = static_cast<int>(*failed_index);
        const double value = config.range.at(index);
        char where[96];
        std::snprintf(where, sizeof where, "grid point %d (%s = %.12g): ", index, std::string(to_string(config.axis)).c_str(), value);
        throw SweepFailure(failed_kind, where + failed_message, index, value, std::move(result));
    }
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::IoFailure, "write to '" + path + "' failed");
}

}  // namespace

std::string format_csv(const std::vector<ObservableRecord>& records) {
    std::string out = "delta,mean_n,g2,g3,r,regime,blockade\n";
    for (const auto& r : records) {
        out += fmt(r.delta) + ',' + fmt(r.mean_n) + ',' + fmt(r.g2) + ',' + fmt(r.g3) + ',' + fmt(r.r_witness) + ',';
        out += to_string(r.regime);
        out += ',';
        out += to_string(r.blockade);
        out += '\n';
    }
    return out;
}

void emit_csv(const SweepResult& result, const std::string& path) { write_file(path, format_csv(result.records)); }

std::string meta_path_for(const std::string& csv_path) {
    const auto slash = csv_path.find_last_of('/');
    const auto dot = csv_path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash) && dot != slash + 1)
        return csv_path.substr(0, dot) + ".meta";
    return csv_path + ".meta";
}

std::string format_meta(const SweepResult& result) {
    const SweepConfig& c = result.config;
    const SystemParams p = resolved_base(c);
    std::ostringstream out;
    auto kv = [&out](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    kv("preset", c.preset.empty() ? "none" : c.preset);
    kv("axis", std::string(to_string(c.axis)));
    kv("range", fmt(c.range.lo) + ":" + fmt(c.range.hi) + ":" + std::to_string(c.range.points));
    kv("compute_r", c.compute_r ? "true" : "false");
    kv("ncut_policy", std::string(to_string(c.ncut_policy)));
    kv("ncut_tol", fmt(c.ncut_tol));
    kv("system.g", fmt(p.g));
    kv("system.phi_z", fmt(p.phi_z));
    kv("system.omega_l", fmt(p.omega_l));
    kv("system.eta", fmt(p.eta));
    kv("system.delta_m", fmt(p.delta_m));
    kv("system.delta_l", fmt(p.delta_l));
    kv("system.delta_l_mode", c.delta_l_auto ? "auto" : "fixed");
    kv("system.delta_cav", fmt(p.delta_cav));
    kv("system.kappa", fmt(p.kappa));
    kv("system.gamma_gm", fmt(p.gamma_gm));
    kv("system.gamma_me", fmt(p.gamma_me));
    kv("system.atom_count", std::to_string(p.atom_count));
    kv("system.ncut", std::to_string(p.ncut));
    kv("ncut", std::to_string(result.metadata.ncut));
    kv("points", std::to_string(result.records.size()));
    kv("residual.max", fmt(result.metadata.max_residual));
    kv("residual.mean", fmt(result.metadata.mean_residual));
    kv("tail_population.max", fmt(result.metadata.max_tail_population));
    kv("threads", std::to_string(result.metadata.threads));
    kv("wall_seconds", fmt(result.metadata.wall_seconds));
    kv("windows", std::to_string(result.windows.size()));
    for (std::size_t i = 0; i < result.windows.size(); ++i) {
        const auto& w = result.windows[i];
        kv("window." + std::to_string(i + 1),
           std::string(to_string(w.kind)) + "," + fmt(w.delta_lo) + "," + fmt(w.delta_hi));
    }
    return out.str();
}

void emit_meta(const SweepResult& result, const std::string& csv_path) {
    write_file(meta_path_for(csv_path), format_meta(result));
}

}  // namespace cavrad
