#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "cavrad/config.hpp"
#include "cavrad/csv_io.hpp"
#include "cavrad/steady_state.hpp"
#include "cavrad/sweep.hpp"

using namespace cavrad;

namespace {

ErrorKind kind_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::ParseError;
}

std::map<std::string, std::string> parse_meta(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        REQUIRE(eq != std::string::npos);
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

SweepConfig small_sweep() {
    SweepConfig c = preset_config("fig2a");
    c.base.ncut = 4;
    c.range = SweepRange{-30.0, 30.0, 9};
    c.threads = 1;
    return c;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / ("cavrad_test_sweep_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("presets") {
    CHECK(preset_names().size() == 6);
    const auto a = preset_config("fig2a");
    CHECK(a.base.g == 20.0);
    CHECK(a.base.phi_z == 0.0);
    CHECK(a.base.eta == 2.0);
    CHECK(a.base.omega_l == 0.0);
    CHECK(a.base.gamma_gm == 1.0);
    CHECK(a.base.gamma_me == 0.01);
    CHECK(a.range.lo == -40.0);
    CHECK(a.range.hi == 40.0);
    CHECK(a.compute_r);
    const auto e = preset_config("fig3e");
    CHECK(e.base.phi_z == doctest::Approx(std::numbers::pi));
    CHECK(e.base.eta == 6.0);
    CHECK(e.base.omega_l == 5.6);
    CHECK(resolved_base(e).delta_l == doctest::Approx(std::sqrt(6.0) * 10.0));
    CHECK(resolved_base(a).delta_l == 0.0);
    CHECK(preset_config("fig2c").base.omega_l == 4.8);
    CHECK(preset_config("fig2e").base.omega_l == 11.0);
    CHECK(preset_config("fig3c").base.omega_l == 4.0);
    CHECK(kind_of([] { (void)preset_config("fig9"); }) == ErrorKind::UnknownKey);
}

TEST_CASE("sweep grid and locked detunings") {
    const SweepRange r{-40.0, 40.0, 401};
    CHECK(r.at(0) == -40.0);
    CHECK(r.at(400) == 40.0);
    CHECK(r.at(200) == doctest::Approx(0.0));
    CHECK(r.at(1) == doctest::Approx(-39.8));

    const auto c = preset_config("fig3c");
    const auto p = point_params(c, -12.5);
    CHECK(p.delta_m == -12.5);
    CHECK(p.delta_cav == -12.5);
    CHECK(p.delta_l == doctest::Approx(std::sqrt(6.0) * 10.0));

    SweepConfig m = c;
    m.axis = SweepAxis::omega_l;
    CHECK(point_params(m, 0.0).delta_l == 0.0);
    m.delta_l_auto = false;
    m.base.delta_l = 3.0;
    CHECK(point_params(m, 2.0).delta_l == 3.0);
    CHECK(point_params(m, 2.0).omega_l == 2.0);
}

TEST_CASE("range parsing") {
    const auto r = parse_range("-10:10:21");
    CHECK(r.lo == -10.0);
    CHECK(r.hi == 10.0);
    CHECK(r.points == 21);
    CHECK(kind_of([] { (void)parse_range("-10:10"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { (void)parse_range("a:10:5"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { (void)parse_range("0:1:2.5"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { (void)parse_range("5:1:5"); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([] { (void)parse_range("0:1:1"); }) == ErrorKind::OutOfRange);
}

TEST_CASE("angles") {
    CHECK(parse_angle("pi") == std::numbers::pi);
    CHECK(parse_angle("-pi") == -std::numbers::pi);
    CHECK(parse_angle("0.5*pi") == doctest::Approx(std::numbers::pi / 2));
    CHECK(parse_angle("1.25") == 1.25);
    CHECK(kind_of([] { (void)parse_angle("tau"); }) == ErrorKind::ParseError);
}

TEST_CASE("config files") {
    SUBCASE("empty file needs an axis") {
        CHECK(kind_of([] { (void)parse_config(""); }) == ErrorKind::MissingRequired);
        CHECK(kind_of([] { (void)parse_config("[sweep]\naxis = delta\n"); }) == ErrorKind::MissingRequired);
    }
    SUBCASE("explicit file") {
        const auto c = parse_config(
            "# comment\n[system]\ng = 10\nphi_z = pi   ; inline\neta = 1.5\nomega_l = 2\ndelta_l = auto\nncut = 6\n"
            "[sweep]\naxis = delta\nrange = -5:5:11\noutput = out.csv\ncompute_r = true\nncut_policy = auto\n"
            "ncut_tol = 1e-5\nthreads = 2\n");
        CHECK(c.base.g == 10.0);
        CHECK(c.base.phi_z == std::numbers::pi);
        CHECK(c.base.eta == 1.5);
        CHECK(c.delta_l_auto);
        CHECK(resolved_base(c).delta_l == doctest::Approx(std::sqrt(6.0) * 5.0));
        CHECK(c.base.ncut == 6);
        CHECK(c.range.points == 11);
        CHECK(c.output_path == "out.csv");
        CHECK(c.compute_r);
        CHECK(c.ncut_policy == NcutPolicy::automatic);
        CHECK(c.ncut_tol == 1e-5);
        CHECK(c.threads == 2);
        CHECK(c.preset.empty());
    }
    SUBCASE("preset then overrides") {
        const auto c = parse_config("preset = fig3e\n[system]\neta = 3\ndelta_l = 1.5\n");
        CHECK(c.preset == "fig3e");
        CHECK(c.base.eta == 3.0);
        CHECK(c.base.omega_l == 5.6);
        CHECK_FALSE(c.delta_l_auto);
        CHECK(resolved_base(c).delta_l == 1.5);
        const auto o = parse_config("preset = fig3e\n[system]\neta = 3\n", "fig2a");
        CHECK(o.preset == "fig2a");
        CHECK(o.base.eta == 3.0);
        CHECK(o.base.phi_z == 0.0);
        CHECK(parse_config("[sweep]\npreset = fig2c\n").base.omega_l == 4.8);
    }
    SUBCASE("errors") {
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\n[system]\nbogus = 1\n"); }) == ErrorKind::UnknownKey);
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\n[other]\n"); }) == ErrorKind::UnknownKey);
        CHECK(kind_of([] { (void)parse_config("preset = fig7\n"); }) == ErrorKind::UnknownKey);
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\n[system]\nkappa = -1\n"); }) == ErrorKind::OutOfRange);
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\n[system]\nncut = 0\n"); }) == ErrorKind::OutOfRange);
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\n[system]\ng = abc\n"); }) == ErrorKind::ParseError);
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\n[system]\ng = 1\ng = 2\n"); }) == ErrorKind::ParseError);
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\n[sweep]\naxis = sideways\n"); }) ==
              ErrorKind::OutOfRange);
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\n[sweep]\nrange = 3:1:4\n"); }) ==
              ErrorKind::OutOfRange);
        CHECK(kind_of([] { (void)parse_config("preset = fig2a\nnot a pair\n"); }) == ErrorKind::ParseError);
        CHECK(kind_of([] { (void)load_config("/nonexistent/cavrad.ini"); }) == ErrorKind::IoFailure);
    }
}

TEST_CASE("csv formatting and parsing") {
    CHECK(format_csv({}) == "delta,mean_n,g2,g3,r,regime,blockade\n");
    CHECK(parse_csv(format_csv({})).empty());

    ObservableRecord a;
    a.delta = -1.5;
    a.mean_n = 0.0;
    a.regime = Regime::undefined;
    a.blockade = Blockade::none;
    ObservableRecord b;
    b.delta = 2.0;
    b.mean_n = 1.0 / 3.0;
    b.g2 = 0.25;
    b.g3 = 1.5;
    b.r_witness = 1.75;
    b.regime = Regime::superradiant;
    b.blockade = Blockade::two_photon;
    const std::string text = format_csv({a, b});
    CHECK(text.find("\n-1.5,0,,,,undefined,none\n") != std::string::npos);
    const auto back = parse_csv(text);
    REQUIRE(back.size() == 2);
    CHECK_FALSE(back[0].g2.has_value());
    CHECK_FALSE(back[0].r_witness.has_value());
    CHECK(back[1].mean_n == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(*back[1].g3 == 1.5);
    CHECK(back[1].regime == Regime::superradiant);
    CHECK(back[1].blockade == Blockade::two_photon);

    CHECK(kind_of([] { (void)parse_csv("delta,g2\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { (void)parse_csv("delta,mean_n,g2,g3,r,regime,blockade\n1,2,3\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { (void)parse_csv("delta,mean_n,g2,g3,r,regime,blockade\n1,x,,,,undefined,none\n"); }) ==
          ErrorKind::ParseError);
    CHECK(kind_of([] { (void)parse_csv("delta,mean_n,g2,g3,r,regime,blockade\n1,1,,,,weird,none\n"); }) ==
          ErrorKind::ParseError);
    CHECK(meta_path_for("out/fig2a.csv") == "out/fig2a.meta");
    CHECK(meta_path_for("run.d/data") == "run.d/data.meta");
}

TEST_CASE("run comparison") {
    std::vector<ObservableRecord> base(3);
    for (int i = 0; i < 3; ++i) {
        base[i].delta = i;
        base[i].mean_n = 0.1 * (i + 1);
        base[i].g2 = 0.5 + i;
        base[i].g3 = 0.2 + i;
        base[i].r_witness = 1.2;
        base[i].regime = Regime::superradiant;
        base[i].blockade = Blockade::none;
    }
    const auto self = compare_records(base, base, 1e-12);
    CHECK(self.pass);
    for (const auto& c : self.columns) CHECK(c.max_abs == 0.0);

    auto bumped = base;
    *bumped[1].g2 *= 1.01;
    const auto rep = compare_records(base, bumped, 1e-3);
    CHECK_FALSE(rep.pass);
    CHECK(rep.columns[1].max_rel == doctest::Approx(0.01 / 1.01));
    CHECK(compare_records(base, bumped, 0.05).pass);
    CHECK(format_report(rep).find("FAIL") != std::string::npos);

    auto undefined = base;
    undefined[2].r_witness.reset();
    CHECK(compare_records(base, undefined, 1.0).columns[3].undefined_mismatches == 1);
    CHECK_FALSE(compare_records(base, undefined, 1.0).pass);

    auto relabeled = base;
    relabeled[0].regime = Regime::enhanced;
    CHECK(compare_records(base, relabeled, 1.0).regime_mismatches == 1);

    auto shifted = base;
    shifted[2].delta += 0.01;
    CHECK(kind_of([&] { (void)compare_records(base, shifted, 1.0); }) == ErrorKind::GridMismatch);
    CHECK(kind_of([&] { (void)compare_records(base, {base[0]}, 1.0); }) == ErrorKind::GridMismatch);
}

TEST_CASE("sweep runs are ordered and thread-count independent") {
    SweepConfig serial = small_sweep();
    std::size_t calls = 0;
    const auto a = run_sweep(serial, [&](std::size_t done, std::size_t total) {
        ++calls;
        CHECK(total == 9);
        CHECK(done <= total);
    });
    CHECK(calls == 9);
    SweepConfig parallel = serial;
    parallel.threads = 3;
    const auto b = run_sweep(parallel);
    REQUIRE(a.records.size() == 9);
    CHECK(format_csv(a.records) == format_csv(b.records));
    CHECK(b.metadata.threads == 3);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].delta == serial.range.at(static_cast<int>(i)));
        CHECK(a.records[i].r_witness.has_value());
        CHECK(a.diagnostics[i].residual < 1e-9);
        CHECK(a.diagnostics[i].trace_error < 1e-12);
        CHECK(a.diagnostics[i].min_eigenvalue > -1e-9);
    }
    CHECK(a.windows == b.windows);
    CHECK(a.metadata.max_residual >= a.metadata.mean_residual);

    SweepConfig no_r = serial;
    no_r.compute_r = false;
    for (const auto& r : run_sweep(no_r).records) {
        CHECK_FALSE(r.r_witness.has_value());
        CHECK(r.regime == Regime::undefined);
    }
}

TEST_CASE("sweep output files") {
    const auto dir = scratch_dir();
    SweepConfig c = small_sweep();
    c.ncut_policy = NcutPolicy::automatic;
    c.ncut_tol = 1e-4;
    c.output_path = (dir / "small.csv").string();
    const auto result = run_sweep(c);
    emit_csv(result, c.output_path);
    emit_meta(result, c.output_path);

    const auto back = read_csv(c.output_path);
    CHECK(compare_records(result.records, back, 1e-10).pass);

    std::ifstream in(dir / "small.meta");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto meta = parse_meta(buf.str());
    for (const char* key : {"preset", "axis", "range", "compute_r", "ncut_policy", "ncut_tol", "system.g",
                            "system.phi_z", "system.omega_l", "system.eta", "system.delta_m", "system.delta_l",
                            "system.delta_l_mode", "system.delta_cav", "system.kappa", "system.gamma_gm",
                            "system.gamma_me", "system.atom_count", "system.ncut", "ncut", "points", "residual.max",
                            "residual.mean", "tail_population.max", "threads", "wall_seconds", "windows"}) {
        CAPTURE(key);
        CHECK(meta.count(key) == 1);
    }
    CHECK(meta.at("preset") == "fig2a");
    CHECK(meta.at("ncut_policy") == "auto");
    CHECK(meta.at("points") == "9");
    CHECK(meta.at("range") == "-30:30:9");
    CHECK(std::stoi(meta.at("ncut")) == result.metadata.ncut);
    CHECK(std::stoul(meta.at("windows")) == result.windows.size());
    for (std::size_t i = 0; i < result.windows.size(); ++i) CHECK(meta.count("window." + std::to_string(i + 1)) == 1);

    CHECK(kind_of([&] { emit_csv(result, (dir / "missing" / "x.csv").string()); }) == ErrorKind::IoFailure);
    std::filesystem::remove_all(dir);
}

TEST_CASE("a failing grid point keeps the completed prefix") {
    // Without atomic decay, the second atom decouples from the cavity at phi_z = -pi/2 and its
    // driven dynamics has no unique steady state.
    SweepConfig c = small_sweep();
    c.axis = SweepAxis::phi_z;
    c.range = SweepRange{-std::numbers::pi, 0.0, 5};
    c.base.gamma_gm = 0.0;
    c.compute_r = false;
    for (int threads : {1, 2}) {
        c.threads = threads;
        try {
            (void)run_sweep(c);
            FAIL("expected a failure");
        } catch (const SweepFailure& e) {
            CHECK((e.kind() == ErrorKind::NullSpaceDegenerate || e.kind() == ErrorKind::SingularSolve));
            CHECK(e.point_index() == 2);
            CHECK(e.value() == doctest::Approx(-std::numbers::pi / 2));
            REQUIRE(e.partial().records.size() == 2);
            CHECK(e.partial().records[1].delta == doctest::Approx(-0.75 * std::numbers::pi));
        }
    }
}

#ifdef CAVRAD_CLI_PATH
TEST_CASE("command-line exit codes") {
    const auto dir = scratch_dir();
    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(CAVRAD_CLI_PATH) + " " + args + " > " + (dir / "log").string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        REQUIRE(WIFEXITED(status));
        return WEXITSTATUS(status);
    };
    const std::string out = (dir / "cli.csv").string();
    CHECK(run("sweep --preset fig2a --ncut 3 --range -30:30:3 -q -o " + out) == 0);
    CHECK(std::filesystem::exists(dir / "cli.meta"));
    CHECK(run("compare " + out + " " + out) == 0);
    CHECK(run("sweep --preset nope -q") == 2);
    CHECK(run("sweep -q") == 2);
    CHECK(run("sweep --bogus-flag") == 2);
    CHECK(run("compare " + out + " " + (dir / "absent.csv").string()) == 4);
    CHECK(run("sweep --preset fig2a --ncut 3 --range -30:30:3 -q -o " + (dir / "no" / "x.csv").string()) == 4);

    const std::string shifted = (dir / "shifted.csv").string();
    CHECK(run("sweep --preset fig2a --ncut 3 --range -29:30:3 -q -o " + shifted) == 0);
    CHECK(run("compare " + out + " " + shifted) == 4);
    const std::string coarse = (dir / "coarse.csv").string();
    CHECK(run("sweep --preset fig2a --ncut 2 --range -30:30:3 -q -o " + coarse) == 0);
    CHECK(run("compare --tol 1e-12 " + out + " " + coarse) == 1);
    CHECK(run("spectrum -N 2 --phi-z pi") == 0);
    std::filesystem::remove_all(dir);
}
#endif

TEST_CASE("refining the grid keeps window kinds") {
    SweepConfig coarse = preset_config("fig2a");
    coarse.base.ncut = 5;
    coarse.compute_r = false;
    coarse.threads = 1;
    coarse.range = SweepRange{-27.0, -21.0, 13};
    SweepConfig fine = coarse;
    fine.range.points = 25;
    const auto a = run_sweep(coarse);
    const auto b = run_sweep(fine);
    REQUIRE_FALSE(a.windows.empty());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& r = a.records[i];
        const auto& s = b.records[2 * i];
        CHECK(r.delta == s.delta);
        CHECK(r.blockade == s.blockade);
    }
    const double h = (coarse.range.hi - coarse.range.lo) / (coarse.range.points - 1);
    for (const auto& w : a.windows) {
        CAPTURE(w.delta_lo);
        const auto match = std::find_if(b.windows.begin(), b.windows.end(), [&](const BlockadeWindow& v) {
            return v.kind == w.kind && v.delta_lo < w.delta_hi && v.delta_hi > w.delta_lo;
        });
        REQUIRE(match != b.windows.end());
        CHECK(std::abs(match->delta_lo - w.delta_lo) <= h);
        CHECK(std::abs(match->delta_hi - w.delta_hi) <= h);
    }
}

TEST_CASE("automatic cutoff covers the whole grid") {
    SweepConfig c = preset_config("fig2a");
    c.range = SweepRange{-30.0, 30.0, 9};
    c.ncut_tol = 1e-4;
    int expect = 0;
    for (int i = 0; i < c.range.points; i += 2)
        expect = std::max(expect, converge_ncut(point_params(c, c.range.at(i)), c.ncut_tol));
    CHECK(sweep_ncut(c, 5) == expect);
    CHECK(sweep_ncut(c, 5) >= converge_ncut(resolved_base(c), c.ncut_tol));
    CHECK_THROWS_AS((void)sweep_ncut(c, 1), Error);
}
