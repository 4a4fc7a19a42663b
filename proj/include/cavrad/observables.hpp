#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cavrad/operators.hpp"
#include "cavrad/system_model.hpp"

namespace cavrad {

/// Below this mean photon number the normalized correlators are not defined.
inline constexpr double kMeanPhotonFloor = 1e-12;

enum class Regime { subradiant, enhanced, superradiant, hyperradiant, undefined };
enum class Blockade { two_photon, three_photon, none };

[[nodiscard]] std::string_view to_string(Regime r) noexcept;
[[nodiscard]] std::string_view to_string(Blockade b) noexcept;
[[nodiscard]] Regime parse_regime(std::string_view s);
[[nodiscard]] Blockade parse_blockade(std::string_view s);

[[nodiscard]] double mean_photon_number(const DensityMatrix& rho);

/// <a^dag^k a^k> evaluated through the operator product.
[[nodiscard]] double normal_ordered_moment(const DensityMatrix& rho, int order);

/// <a^dag a^dag a a> / <a^dag a>^2. Throws VacuousCorrelation below kMeanPhotonFloor.
[[nodiscard]] double g2_zero(const DensityMatrix& rho);
/// <a^dag^3 a^3> / <a^dag a>^3. Throws VacuousCorrelation below kMeanPhotonFloor.
[[nodiscard]] double g3_zero(const DensityMatrix& rho);

struct PhotonStatistics {
    double mean_n = 0.0;
    std::optional<double> g2;
    std::optional<double> g3;
};

/// Non-throwing bundle of the three cavity-field statistics.
[[nodiscard]] PhotonStatistics photon_statistics(const DensityMatrix& rho);

/// (n2 - 2 n1) / (2 n1). Throws ReferenceVacuous when n1 < kMeanPhotonFloor.
[[nodiscard]] double radiance_witness(double mean_n_two_atoms, double mean_n_single_atom);

/// Solves the two-atom system and its single-atom reference, then forms the witness.
[[nodiscard]] double radiance_witness(const SystemParams& params_two_atom);

[[nodiscard]] Regime classify_radiance(double r, double tol = 1e-3);
[[nodiscard]] Regime classify_radiance(std::optional<double> r, double tol = 1e-3);

/// Strict comparisons against 1, no tolerance band.
[[nodiscard]] Blockade classify_blockade(std::optional<double> g2, std::optional<double> g3);

struct ObservableRecord {
    double delta = 0.0;
    double mean_n = 0.0;
    std::optional<double> g2;
    std::optional<double> g3;
    std::optional<double> r_witness;
    Regime regime = Regime::undefined;
    Blockade blockade = Blockade::none;
};

[[nodiscard]] ObservableRecord make_record(double delta, const PhotonStatistics& stats, std::optional<double> r);

struct BlockadeWindow {
    double delta_lo;
    double delta_hi;
    Blockade kind;

    friend bool operator==(const BlockadeWindow&, const BlockadeWindow&) = default;
};

/// Maximal contiguous runs of records sharing a blockade kind other than none.
///
/// Each grid point owns the cell reaching halfway to its neighbours; a window spans the
/// cells of its run, clipped to the first and last sweep points. Records must be sorted
/// by delta. Throws EmptySweep for an empty list.
[[nodiscard]] std::vector<BlockadeWindow> detect_blockade_windows(std::span<const ObservableRecord> records);

/// Sum of window widths of the given kind.
[[nodiscard]] double window_measure(std::span<const BlockadeWindow> windows, Blockade kind);

}  // namespace cavrad
