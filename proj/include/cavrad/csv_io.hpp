#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cavrad/observables.hpp"

namespace cavrad {

/// Parses CSV text written by format_csv. Throws ParseError.
[[nodiscard]] std::vector<ObservableRecord> parse_csv(std::string_view text);
/// Throws IoFailure or ParseError.
[[nodiscard]] std::vector<ObservableRecord> read_csv(const std::string& path);

struct ColumnDiff {
    std::string column;
    double max_abs = 0.0;
    double max_rel = 0.0;
    int undefined_mismatches = 0;  // rows where only one side has a value
};

struct CompareReport {
    std::vector<ColumnDiff> columns;  // mean_n, g2, g3, r
    int regime_mismatches = 0;
    int blockade_mismatches = 0;
    double tol = 0.0;
    bool pass = false;
};

/// Relative difference |a - b| / max(|a|, |b|) per numeric column; labels must agree.
/// Throws GridMismatch when the delta columns differ.
[[nodiscard]] CompareReport compare_records(const std::vector<ObservableRecord>& a,
                                            const std::vector<ObservableRecord>& b, double tol);
[[nodiscard]] CompareReport compare_runs(const std::string& path_a, const std::string& path_b, double tol);

[[nodiscard]] std::string format_report(const CompareReport& report);

}  // namespace cavrad
