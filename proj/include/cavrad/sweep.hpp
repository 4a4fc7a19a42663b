#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavrad/error.hpp"
#include "cavrad/observables.hpp"
#include "cavrad/system_model.hpp"

namespace cavrad {

/// `delta` moves delta_m and delta_cav together.
enum class SweepAxis { delta, delta_m, delta_cav, omega_l, phi_z };
enum class NcutPolicy { fixed, automatic };

[[nodiscard]] std::string_view to_string(SweepAxis a) noexcept;
[[nodiscard]] std::string_view to_string(NcutPolicy p) noexcept;
[[nodiscard]] std::optional<SweepAxis> parse_sweep_axis(std::string_view s) noexcept;
[[nodiscard]] std::optional<NcutPolicy> parse_ncut_policy(std::string_view s) noexcept;

struct SweepRange {
    double lo = -40.0;
    double hi = 40.0;
    int points = 401;

    /// Grid value i, with the last point pinned to hi.
    [[nodiscard]] double at(int i) const noexcept;
};

/// Parses "lo:hi:points". Throws ParseError on malformed text, OutOfRange on lo >= hi or points < 2.
[[nodiscard]] SweepRange parse_range(std::string_view text);

struct SweepConfig {
    SystemParams base;
    /// Resolve delta_l to the two-photon control resonance whenever omega_l > 0.
    bool delta_l_auto = true;
    SweepAxis axis = SweepAxis::delta;
    SweepRange range;
    std::string preset;
    std::string output_path = "sweep.csv";
    bool compute_r = false;
    NcutPolicy ncut_policy = NcutPolicy::fixed;
    double ncut_tol = 1e-6;
    int threads = 0;  // 0 selects the hardware concurrency

    /// Throws OutOfRange on invalid fields.
    void validate() const;
};

[[nodiscard]] const std::vector<std::string>& preset_names();
/// Throws UnknownKey for an unknown name.
[[nodiscard]] SweepConfig preset_config(std::string_view name);

/// Parameters used at sweep value `value`, with delta_l resolved.
[[nodiscard]] SystemParams point_params(const SweepConfig& config, double value);
/// Base parameters with delta_l resolved.
[[nodiscard]] SystemParams resolved_base(const SweepConfig& config);

struct PointDiagnostics {
    double residual = 0.0;
    double tail_population = 0.0;
    double hermiticity_error = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;
};

struct SweepMetadata {
    int ncut = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double max_tail_population = 0.0;
    double wall_seconds = 0.0;
    int threads = 1;
};

struct SweepResult {
    SweepConfig config;
    std::vector<ObservableRecord> records;
    std::vector<PointDiagnostics> diagnostics;
    std::vector<BlockadeWindow> windows;
    SweepMetadata metadata;
};

/// A grid point failed. `partial` holds the records completed before it, in grid order.
class SweepFailure : public Error {
public:
    SweepFailure(ErrorKind kind, const std::string& message, int point_index, double value, SweepResult partial);

    [[nodiscard]] int point_index() const noexcept { return point_index_; }
    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] const SweepResult& partial() const noexcept { return partial_; }

private:
    int point_index_;
    double value_;
    SweepResult partial_;
};

/// Largest converge_ncut result over up to `samples` evenly spaced grid points, both ends included.
/// Used by the automatic Ncut policy. Throws CutoffLimitExceeded if any sample fails to converge.
[[nodiscard]] int sweep_ncut(const SweepConfig& config, int samples = 41);

/// Called after each finished point with (completed, total); may run on worker threads.
using SweepProgress = std::function<void(std::size_t, std::size_t)>;

/// Solves every grid point on a bounded worker pool and restores grid order.
[[nodiscard]] SweepResult run_sweep(const SweepConfig& config, const SweepProgress& progress = {});

/// CSV with header delta,mean_n,g2,g3,r,regime,blockade. Throws IoFailure.
void emit_csv(const SweepResult& result, const std::string& path);
[[nodiscard]] std::string format_csv(const std::vector<ObservableRecord>& records);

/// Key-value summary written next to the CSV (same basename, `.meta` suffix).
void emit_meta(const SweepResult& result, const std::string& csv_path);
[[nodiscard]] std::string format_meta(const SweepResult& result);
[[nodiscard]] std::string meta_path_for(const std::string& csv_path);

}  // namespace cavrad
