#include "cavrad/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "cavrad/error.hpp"

namespace cavrad {

namespace {

constexpr std::string_view kHeader = "delta,mean_n,g2,g3,r,regime,blockade";

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw Error(ErrorKind::ParseError, "csv line " + std::to_string(line) + ": " + what);
}

std::optional<double> field_value(std::string_view s, int line, bool required) {
    if (s.empty()) {
        if (required) parse_fail(line, "missing required value");
        return std::nullopt;
    }
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) parse_fail(line, "bad number '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::vector<ObservableRecord> parse_csv(std::string_view text) {
    std::vector<ObservableRecord> records;
    std::size_t pos = 0;
    int line_no = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!header_seen) {
            if (line != kHeader) parse_fail(line_no, "unexpected header");
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 7) parse_fail(line_no, "expected 7 fields");
        ObservableRecord r;
        r.delta = *field_value(fields[0], line_no, true);
        r.mean_n = *field_value(fields[1], line_no, true);
        r.g2 = field_value(fields[2], line_no, false);
        r.g3 = field_value(fields[3], line_no, false);
        r.r_witness = field_value(fields[4], line_no, false);
        try {
            r.regime = parse_regime(fields[5]);
            r.blockade = parse_blockade(fields[6]);
        } catch (const Error& e) {
            parse_fail(line_no, e.what());
        }
        records.push_back(r);
    }
    if (!header_seen) parse_fail(1, "empty file");
    return records;
}

std::vector<ObservableRecord> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

namespace {

void accumulate(ColumnDiff& d, const std::optional<double>& a, const std::optional<double>& b) {
    if (!a && !b) return;
    if (!a || !b) {
        ++d.undefined_mismatches;
        return;
    }
    const double diff = std::abs(*a - *b);
    const double scale = std::max(std::abs(*a), std::abs(*b));
    d.max_abs = std::max(d.max_abs, diff);
    if (scale > 0.0) d.max_rel = std::max(d.max_rel, diff / scale);
}

}  // namespace

CompareReport compare_records(const std::vector<ObservableRecord>& a, const std::vector<ObservableRecord>& b,
                              double tol) {
    if (a.size() != b.size())
        throw Error(ErrorKind::GridMismatch, "runs have " + std::to_string(a.size()) + " and " +
                                                 std::to_string(b.size()) + " rows");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i].delta - b[i].delta) > 1e-9 * std::max(1.0, std::abs(a[i].delta)))
            throw Error(ErrorKind::GridMismatch, "grids differ at row " + std::to_string(i + 1));

    CompareReport report;
    report.tol = tol;
    report.columns = {{"mean_n"}, {"g2"}, {"g3"}, {"r"}};
    for (std::size_t i = 0; i < a.size(); ++i) {
        accumulate(report.columns[0], a[i].mean_n, b[i].mean_n);
        accumulate(report.columns[1], a[i].g2, b[i].g2);
        accumulate(report.columns[2], a[i].g3, b[i].g3);
        accumulate(report.columns[3], a[i].r_witness, b[i].r_witness);
        if (a[i].regime != b[i].regime) ++report.regime_mismatches;
        if (a[i].blockade != b[i].blockade) ++report.blockade_mismatches;
    }
    report.pass = report.regime_mismatches == 0 && report.blockade_mismatches == 0 &&
                  std::all_of(report.columns.begin(), report.columns.end(), [tol](const ColumnDiff& d) {
                      return d.undefined_mismatches == 0 && d.max_rel <= tol;
                  });
    return report;
}

CompareReport compare_runs(const std::string& path_a, const std::string& path_b, double tol) {
    return compare_records(read_csv(path_a), read_csv(path_b), tol);
}

std::string format_report(const CompareReport& report) {
    std::string out;
    char buf[160];
    for (const auto& c : report.columns) {
        std::snprintf(buf, sizeof buf, "%-7s max_abs=%.3e max_rel=%.3e undefined_mismatches=%d\n", c.column.c_str(),
                      c.max_abs, c.max_rel, c.undefined_mismatches);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "regime_mismatches=%d blockade_mismatches=%d tol=%.3e\n%s\n",
                  report.regime_mismatches, report.blockade_mismatches, report.tol, report.pass ? "PASS" : "FAIL");
    out += buf;
    return out;
}

}  // namespace cavrad
