#include "rabi/cli/config.hpp"
#include "rabi/cli/csv.hpp"
#include "rabi/cli/experiments.hpp"
#include "rabi/error.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace rabi;
using namespace rabi::cli;

namespace {

Config parse(const std::string& text) {
    std::istringstream in(text);
    return Config::parse(in, "test.cfg");
}

ErrorKind kind_of(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::unknown_kind;
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(f, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("config parses dotted keys, comments and lists") {
    const Config c = parse(
        "# header comment\n"
        "experiment = noisy_run\n"
        "noise.rate_a = 3.5e-5   # trailing comment\n"
        "sweep.energies = 0.25, 0.5, 1\n"
        "cat.n = 2,3\n"
        "convergence = off\n");
    CHECK(c.require_string("experiment") == "noisy_run");
    CHECK(c.get_double("noise.rate_a", 0.0) == 3.5e-5);
    CHECK(c.get_doubles("sweep.energies", {}) == std::vector<double>{0.25, 0.5, 1.0});
    CHECK(c.get_ints("cat.n", {}) == std::vector<int>{2, 3});
    CHECK_FALSE(c.get_bool("convergence", true));
    CHECK(c.get_int("dim", 40) == 40);
    CHECK(c.resolved().at("dim") == "40");
    CHECK_NOTHROW(c.reject_unused());
}

TEST_CASE("config rejects malformed input") {
    CHECK(kind_of("a = 1\na = 2\n") == ErrorKind::validation);
    CHECK(kind_of("no equals sign\n") == ErrorKind::validation);
    CHECK(kind_of(".bad = 1\n") == ErrorKind::validation);
    CHECK(kind_of("a..b = 1\n") == ErrorKind::validation);
    CHECK(kind_of("a b = 1\n") == ErrorKind::validation);
    CHECK(kind_of("a =\n") == ErrorKind::validation);

    const Config c = parse("x = abc\nk = 1.5\nflag = maybe\n");
    CHECK_THROWS_AS(c.get_double("x", 0.0), Error);
    CHECK_THROWS_AS(c.get_int("k", 0), Error);
    CHECK_THROWS_AS(c.get_bool("flag", false), Error);
    CHECK_THROWS_AS(c.require_string("missing"), Error);
    CHECK_THROWS_AS(c.get_choice("x", "a", {"a", "b"}), Error);
}

TEST_CASE("duplicate key error names the line") {
    try {
        parse("a = 1\n\na = 2\n");
        FAIL("expected a duplicate-key error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("test.cfg:3") != std::string::npos);
    }
}

TEST_CASE("unused keys are reported") {
    const Config c = parse("dim = 40\ntypo.key = 1\n");
    c.get_int("dim", 10);
    try {
        c.reject_unused();
        FAIL("expected an unknown-key error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
        CHECK(std::string(e.what()).find("typo.key") != std::string::npos);
    }
}

TEST_CASE("reals are written with 17 significant digits") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
    CHECK(std::stod(format_real(2.0 / 3.0)) == 2.0 / 3.0);
    CHECK(format_real(std::nan("")) == "nan");
}

TEST_CASE("CSV metadata precedes the header") {
    const auto path = std::filesystem::temp_directory_path() / "rabi_csv_test.csv";
    {
        CsvWriter w(path);
        w.meta("code_version", "0.1.0");
        w.meta("note", "two\nlines");
        w.header({"gamma", "label", "count"});
        w.row({0.5, std::string("a,b"), 3L});
        CHECK_THROWS_AS(w.meta("late", "x"), Error);
        CHECK_THROWS_AS(w.row({1.0}), Error);
    }
    const auto lines = lines_of(path);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# code_version = 0.1.0");
    CHECK(lines[1] == "# note = two lines");
    CHECK(lines[2] == "gamma,label,count");
    CHECK(lines[3] == "0.5,\"a,b\",3");
    std::filesystem::remove(path);
}

TEST_CASE("error kinds map to exit codes") {
    CHECK(exit_code_for(ErrorKind::validation) == kExitValidation);
    CHECK(exit_code_for(ErrorKind::usage) == kExitValidation);
    CHECK(exit_code_for(ErrorKind::trotter_regime) == kExitValidation);
    CHECK(exit_code_for(ErrorKind::lamb_dicke) == kExitValidation);
    CHECK(exit_code_for(ErrorKind::numeric) == kExitNumeric);
    CHECK(exit_code_for(ErrorKind::leakage_guard) == kExitNumeric);
    CHECK(exit_code_for(ErrorKind::norm_drift) == kExitNumeric);
    CHECK(exit_code_for(ErrorKind::grid) == kExitNumeric);
    CHECK(exit_code_for(ErrorKind::step_underflow) == kExitNumeric);
}

TEST_CASE("experiment runner validates before running") {
    RunOptions opt;
    opt.out_dir = std::filesystem::temp_directory_path();
    CHECK_THROWS_AS(run_experiment(parse("experiment = nonsense\n"), opt), Error);
    CHECK_THROWS_AS(run_experiment(parse("experiment = wigner_map\nbogus.key = 1\n"), opt), Error);
}

TEST_CASE("a small Wigner map run writes a CSV with metadata") {
    const auto dir = std::filesystem::temp_directory_path() / "rabi_cli_wigner";
    std::filesystem::create_directories(dir);
    RunOptions opt;
    opt.out_dir = dir;
    const RunSummary s = run_experiment(parse("experiment = wigner_map\ndim = 30\nconvergence = false\nmap.state = target\nstate.energy = 0.5\n"), opt);
    REQUIRE_FALSE(s.files.empty());
    const auto lines = lines_of(s.files.front());
    REQUIRE(lines.size() > 2);
    CHECK(lines.front().rfind("# ", 0) == 0);
    bool saw_version = false;
    for (const auto& l : lines)
        if (l.rfind("# code_version", 0) == 0) saw_version = true;
    CHECK(saw_version);
    std::filesystem::remove_all(dir);
}
