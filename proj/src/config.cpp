#include "cavrad/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

namespace cavrad {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line;
};

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string qualified(const Entry& e) { return e.section.empty() ? e.key : e.section + "." + e.key; }

double as_double(const Entry& e) {
    std::string_view s = e.value;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range) throw Error(ErrorKind::OutOfRange, qualified(e) + " is out of range");
    if (ec != std::errc() || end != s.data() + s.size() || s.empty())
        parse_fail(e.line, qualified(e) + " expects a number, got '" + e.value + "'");
    if (!std::isfinite(v)) throw Error(ErrorKind::OutOfRange, qualified(e) + " must be finite");
    return v;
}

int as_int(const Entry& e) {
    const double v = as_double(e);
    if (v != std::floor(v)) parse_fail(e.line, qualified(e) + " expects an integer, got '" + e.value + "'");
    if (std::abs(v) > 1e9) throw Error(ErrorKind::OutOfRange, qualified(e) + " is out of range");
    return static_cast<int>(v);
}

bool as_bool(const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    parse_fail(e.line, qualified(e) + " expects true or false, got '" + e.value + "'");
}

using Setter = std::function<void(SweepConfig&, const Entry&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"system.g", [](SweepConfig& c, const Entry& e) { c.base.g = as_double(e); }},
        {"system.phi_z", [](SweepConfig& c, const Entry& e) {
             try {
                 c.base.phi_z = parse_angle(e.value);
             } catch (const Error& err) {
                 parse_fail(e.line, qualified(e) + ": " + err.what());
             }
         }},
        {"system.omega_l", [](SweepConfig& c, const Entry& e) { c.base.omega_l = as_double(e); }},
        {"system.eta", [](SweepConfig& c, const Entry& e) { c.base.eta = as_double(e); }},
        {"system.delta_m", [](SweepConfig& c, const Entry& e) { c.base.delta_m = as_double(e); }},
        {"system.delta_l", [](SweepConfig& c, const Entry& e) {
             if (e.value == "auto") {
                 c.delta_l_auto = true;
             } else {
                 c.base.delta_l = as_double(e);
                 c.delta_l_auto = false;
             }
         }},
        {"system.delta_cav", [](SweepConfig& c, const Entry& e) { c.base.delta_cav = as_double(e); }},
        {"system.kappa", [](SweepConfig& c, const Entry& e) { c.base.kappa = as_double(e); }},
        {"system.gamma_gm", [](SweepConfig& c, const Entry& e) { c.base.gamma_gm = as_double(e); }},
        {"system.gamma_me", [](SweepConfig& c, const Entry& e) { c.base.gamma_me = as_double(e); }},
        {"system.atom_count", [](SweepConfig& c, const Entry& e) { c.base.atom_count = as_int(e); }},
        {"system.ncut", [](SweepConfig& c, const Entry& e) { c.base.ncut = as_int(e); }},
        {"sweep.axis", [](SweepConfig& c, const Entry& e) {
             const auto a = parse_sweep_axis(e.value);
             if (!a) throw Error(ErrorKind::OutOfRange, "sweep.axis: unknown axis '" + e.value + "'");
             c.axis = *a;
         }},
        {"sweep.range", [](SweepConfig& c, const Entry& e) { c.range = parse_range(e.value); }},
        {"sweep.output", [](SweepConfig& c, const Entry& e) { c.output_path = e.value; }},
        {"sweep.compute_r", [](SweepConfig& c, const Entry& e) { c.compute_r = as_bool(e); }},
        {"sweep.ncut_policy", [](SweepConfig& c, const Entry& e) {
             const auto p = parse_ncut_policy(e.value);
             if (!p) throw Error(ErrorKind::OutOfRange, "sweep.ncut_policy must be fixed or auto");
             c.ncut_policy = *p;
         }},
        {"sweep.ncut_tol", [](SweepConfig& c, const Entry& e) { c.ncut_tol = as_double(e); }},
        {"sweep.threads", [](SweepConfig& c, const Entry& e) { c.threads = as_int(e); }},
    };
    return table;
}

}  // namespace

double parse_angle(std::string_view text) {
    std::string_view s = trim(text);
    double sign = 1.0;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        if (s.front() == '-') sign = -1.0;
        s.remove_prefix(1);
    }
    double factor = 1.0;
    bool has_pi = false;
    if (s == "pi") {
        has_pi = true;
    } else if (s.size() > 3 && s.substr(s.size() - 3) == "*pi") {
        has_pi = true;
        s.remove_suffix(3);
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), factor);
        if (ec != std::errc() || end != s.data() + s.size()) throw Error(ErrorKind::ParseError, "bad angle '" + std::string(text) + "'");
    } else {
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), factor);
        if (ec != std::errc() || end != s.data() + s.size() || s.empty())
            throw Error(ErrorKind::ParseError, "bad angle '" + std::string(text) + "'");
    }
    const double v = sign * factor * (has_pi ? std::numbers::pi : 1.0);
    if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, "bad angle '" + std::string(text) + "'");
    return v;
}

SweepConfig parse_config(std::string_view text, const std::string& preset_override) {
    std::vector<Entry> entries;
    std::string section;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "system" && section != "sweep")
                throw Error(ErrorKind::UnknownKey, "line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parse_fail(line_no, "expected key = value");
        Entry e{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
        if (e.key.empty()) parse_fail(line_no, "missing key");
        if (e.value.empty()) parse_fail(line_no, "missing value for " + qualified(e));
        if (!seen.insert(qualified(e)).second) parse_fail(line_no, "duplicate key " + qualified(e));
        entries.push_back(std::move(e));
    }

    SweepConfig config;
    bool has_preset = false;
    for (const auto& e : entries) {
        if (e.key != "preset" || (!e.section.empty() && e.section != "sweep")) continue;
        if (has_preset) parse_fail(e.line, "preset given twice");
        if (preset_override.empty()) config = preset_config(e.value);
        has_preset = true;
    }
    if (!preset_override.empty()) {
        config = preset_config(preset_override);
        has_preset = true;
    }

    bool has_axis = false;
    bool has_range = false;
    for (const auto& e : entries) {
        if (e.key == "preset" && (e.section.empty() || e.section == "sweep")) continue;
        const std::string key = qualified(e);
        const auto it = setters().find(key);
        if (it == setters().end())
            throw Error(ErrorKind::UnknownKey, "line " + std::to_string(e.line) + ": unknown key '" + key + "'");
        it->second(config, e);
        has_axis = has_axis || key == "sweep.axis";
        has_range = has_range || key == "sweep.range";
    }
    if (!has_preset && !has_axis) throw Error(ErrorKind::MissingRequired, "config needs a preset or sweep.axis");
    if (!has_preset && !has_range) throw Error(ErrorKind::MissingRequired, "config needs a preset or sweep.range");
    config.validate();
    return config;
}

SweepConfig load_config(const std::string& path, const std::string& preset_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot read config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), preset_override);
}

}  // namespace cavrad
