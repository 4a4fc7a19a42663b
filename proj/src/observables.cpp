#include "cavrad/observables.hpp"

#include <cmath>
#include <string>

#include "cavrad/error.hpp"
#include "cavrad/steady_state.hpp"

namespace cavrad {

std::string_view to_string(Regime r) noexcept {
    switch (r) {
        case Regime::subradiant: return "subradiant";
        case Regime::enhanced: return "enhanced";
        case Regime::superradiant: return "superradiant";
        case Regime::hyperradiant: return "hyperradiant";
        case Regime::undefined: return "undefined";
    }
    return "undefined";
}

std::string_view to_string(Blockade b) noexcept {
    switch (b) {
        case Blockade::two_photon: return "two_photon";
        case Blockade::three_photon: return "three_photon";
        case Blockade::none: return "none";
    }
    return "none";
}

Regime parse_regime(std::string_view s) {
    for (Regime r : {Regime::subradiant, Regime::enhanced, Regime::superradiant, Regime::hyperradiant,
                     Regime::undefined})
        if (to_string(r) == s) return r;
    throw Error(ErrorKind::ParseError, "unknown regime '" + std::string(s) + "'");
}

Blockade parse_blockade(std::string_view s) {
    for (Blockade b : {Blockade::two_photon, Blockade::three_photon, Blockade::none})
        if (to_string(b) == s) return b;
    throw Error(ErrorKind::ParseError, "unknown blockade kind '" + std::string(s) + "'");
}

double normal_ordered_moment(const DensityMatrix& rho, int order) {
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "moment order must be >= 1");
    const auto a = annihilation(rho.space());
    Operator lower = a;
    for (int k = 1; k < order; ++k) lower = lower * a;
    return expectation(dagger(lower) * lower, rho).real();
}

double mean_photon_number(const DensityMatrix& rho) { return normal_ordered_moment(rho, 1); }

namespace {

double normalized_correlation(const DensityMatrix& rho, int order) {
    const double n = mean_photon_number(rho);
    if (n < kMeanPhotonFloor)
        throw Error(ErrorKind::VacuousCorrelation, "mean photon number " + std::to_string(n) + " below floor");
    return normal_ordered_moment(rho, order) / std::pow(n, order);
}

}  // namespace

double g2_zero(const DensityMatrix& rho) { return normalized_correlation(rho, 2); }
double g3_zero(const DensityMatrix& rho) { return normalized_correlation(rho, 3); }

PhotonStatistics photon_statistics(const DensityMatrix& rho) {
    PhotonStatistics s;
    s.mean_n = mean_photon_number(rho);
    if (s.mean_n >= kMeanPhotonFloor) {
        s.g2 = normal_ordered_moment(rho, 2) / (s.mean_n * s.mean_n);
        s.g3 = normal_ordered_moment(rho, 3) / (s.mean_n * s.mean_n * s.mean_n);
    }
    return s;
}

double radiance_witness(double mean_n_two_atoms, double mean_n_single_atom) {
    if (!(mean_n_single_atom >= kMeanPhotonFloor))
        throw Error(ErrorKind::ReferenceVacuous,
                    "single-atom mean photon number " + std::to_string(mean_n_single_atom) + " below floor");
    return (mean_n_two_atoms - 2.0 * mean_n_single_atom) / (2.0 * mean_n_single_atom);
}

double radiance_witness(const SystemParams& params_two_atom) {
    if (params_two_atom.atom_count != 2)
        throw Error(ErrorKind::InvalidArgument, "radiance witness needs the two-atom parameters");
    const auto two = steady_state(liouvillian(params_two_atom));
    const auto one = steady_state(liouvillian(single_atom_reference(params_two_atom)));
    return radiance_witness(mean_photon_number(two.rho), mean_photon_number(one.rho));
}

Regime classify_radiance(double r, double tol) {
    if (!std::isfinite(r)) return Regime::undefined;
    if (std::abs(r - 1.0) <= tol) return Regime::superradiant;
    if (r < -tol) return Regime::subradiant;
    if (r < 1.0 - tol) return Regime::enhanced;
    return Regime::hyperradiant;
}

Regime classify_radiance(std::optional<double> r, double tol) {
    return r ? classify_radiance(*r, tol) : Regime::undefined;
}

Blockade classify_blockade(std::optional<double> g2, std::optional<double> g3) {
    if (!g2) return Blockade::none;
    if (*g2 < 1.0) return Blockade::two_photon;
    if (*g2 > 1.0 && g3 && *g3 < 1.0) return Blockade::three_photon;
    return Blockade::none;
}

ObservableRecord make_record(double delta, const PhotonStatistics& stats, std::optional<double> r) {
    ObservableRecord rec;
    rec.delta = delta;
    rec.mean_n = stats.mean_n;
    rec.g2 = stats.g2;
    rec.g3 = stats.g3;
    rec.r_witness = r;
    rec.regime = classify_radiance(r);
    rec.blockade = classify_blockade(stats.g2, stats.g3);
    return rec;
}

std::vector<BlockadeWindow> detect_blockade_windows(std::span<const ObservableRecord> records) {
    if (records.empty()) throw Error(ErrorKind::EmptySweep, "no records to scan");
    const std::size_t n = records.size();
    auto lower_edge = [&](std::size_t i) {
        return i == 0 ? records[0].delta : 0.5 * (records[i - 1].delta + records[i].delta);
    };
    auto upper_edge = [&](std::size_t i) {
        return i + 1 == n ? records[n - 1].delta : 0.5 * (records[i].delta + records[i + 1].delta);
    };

    std::vector<BlockadeWindow> windows;
    std::size_t i = 0;
    while (i < n) {
        const Blockade kind = classify_blockade(records[i].g2, records[i].g3);
        std::size_t j = i;
        while (j + 1 < n && classify_blockade(records[j + 1].g2, records[j + 1].g3) == kind) ++j;
        if (kind != Blockade::none) windows.push_back({lower_edge(i), upper_edge(j), kind});
        i = j + 1;
    }
    return windows;
}

double window_measure(std::span<const BlockadeWindow> windows, Blockade kind) {
    double total = 0.0;
    for (const auto& w : windows)
        if (w.kind == kind) total += w.delta_hi - w.delta_lo;
    return total;
}

}  // namespace cavrad
