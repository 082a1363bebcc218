#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "sta/config.hpp"
#include "sta/csv.hpp"

using namespace sta;
using Catch::Approx;

namespace {

std::string error_of(RunConfig cfg) {
    try {
        validate_config(cfg);
        return "";
    } catch (const ConfigError& e) {
        return e.what();
    }
}

std::string parse_error_of(const std::string& text) {
    try {
        parse_config(text);
        return "";
    } catch (const ConfigError& e) {
        return e.what();
    }
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("an empty config parses but cannot run") {
    RunConfig cfg = parse_config("");
    CHECK_FALSE(cfg.command.has_value());
    CHECK(cfg.schedule == SchedId::ising1);
    CHECK(cfg.params.N == 4000);
    CHECK(cfg.steps == 20000);
    CHECK(contains(error_of(cfg), "command is required"));
}

TEST_CASE("the documented stability example validates and names its output") {
    RunConfig cfg =
        parse_config("command=stability\nh0=4.0\nhp=0.0\nomega=31.41592653589793\n");
    CHECK(cfg.pert.h0_amp == 4.0);
    CHECK(cfg.pert.hp_amp == 0.0);
    CHECK(cfg.pert.omega == Approx(10.0 * kPi).epsilon(1e-15));
    validate_config(cfg);
    CHECK(cfg.out == "stability.csv");
    CHECK(cfg.params.T == 10.0);
}

TEST_CASE("comments, blank lines, and spacing are tolerated") {
    RunConfig cfg = parse_config(
        "# a run\n"
        "\n"
        "command = evolve-quantum   # trailing comment\n"
        "  T = 5 , 10 , 20  \n"
        "N=64\n");
    REQUIRE(cfg.T_list.size() == 3);
    CHECK(cfg.T_list[0] == 5.0);
    CHECK(cfg.T_list[1] == 10.0);
    CHECK(cfg.T_list[2] == 20.0);
    CHECK(cfg.params.N == 64);
    CHECK(*cfg.command == Command::evolve_quantum);
}

TEST_CASE("serialize and reparse is a fixed point") {
    RunConfig a;
    a.command = Command::evolve_quantum;
    a.schedule = SchedId::ising2;
    a.params.J = 2.0;
    a.params.h = 0.3;
    a.h_set = true;
    a.params.Gamma0 = 1.5;
    a.T_list = {7.5};
    a.params.N = 128;
    a.steps = 4000;
    a.samples = 100;
    a.out = "a.csv";

    RunConfig b;
    b.command = Command::sweep_T;
    b.T_list = {5.0, 10.0, 20.0};
    b.params.N = 64;

    RunConfig c;
    c.command = Command::mattis;
    c.params.N = 4;
    c.xi = {1, -1, 1, -1};

    RunConfig d;
    d.command = Command::mattis;
    d.params.N = 6;
    d.seed = 42;

    for (const RunConfig* cfg : {&a, &b, &c, &d}) {
        std::string text = serialize_config(*cfg);
        RunConfig back = parse_config(text);
        CHECK(serialize_config(back) == text);
    }

    RunConfig r = parse_config("command=evolve-quantum\nschedule=rotating\nN=64\n");
    validate_config(r);
    CHECK(r.params.h == 0.0);
    CHECK(r.h_set);
    RunConfig r2 = parse_config(serialize_config(r));
    CHECK_NOTHROW(validate_config(r2));
    CHECK(serialize_config(r2) == serialize_config(r));
}

TEST_CASE("parse diagnostics carry the line number") {
    CHECK(contains(parse_error_of("J=1\nwat=2\n"), "line 2"));
    CHECK(contains(parse_error_of("J=1\nwat=2\n"), "unknown key 'wat'"));
    CHECK(contains(parse_error_of("T=abc\n"), "invalid number 'abc'"));
    CHECK(contains(parse_error_of("# c\n\nJ one\n"), "line 3"));
    CHECK(contains(parse_error_of("J one\n"), "expected key=value"));
    CHECK(contains(parse_error_of("=5\n"), "empty key"));
    CHECK(contains(parse_error_of("command=fly\n"), "unknown command 'fly'"));
    CHECK(contains(parse_error_of("schedule=cubic\n"), "unknown schedule 'cubic'"));
    CHECK(contains(parse_error_of("seed=-1\n"), "seed must be >= 0"));
    CHECK(contains(parse_error_of("xi=1,2\n"), "xi entries must be +1 or -1"));
    CHECK(contains(parse_error_of("steps=1.5\n"), "expected an integer"));
    CHECK(contains(parse_error_of("out=\n"), "out needs a file name"));
}

TEST_CASE("integer fields accept exponent notation") {
    RunConfig cfg = parse_config("command=design\nsteps=2e4\nN=1e2\n");
    CHECK(cfg.steps == 20000);
    CHECK(cfg.params.N == 100);
}

TEST_CASE("validation rejects out-of-domain physics") {
    CHECK(contains(error_of(parse_config("command=design\nT=-1\n")), "T must be > 0"));
    CHECK(contains(error_of(parse_config("command=design\nJ=-1\n")), "J must be >= 0"));
    CHECK(contains(error_of(parse_config("command=design\nh=-1\n")), "h must be >= 0"));
    CHECK(contains(error_of(parse_config("command=design\nGamma0=0\n")), "Gamma0 must be > 0"));
    CHECK(contains(error_of(parse_config("command=design\nN=0\n")), "N must be >= 1"));
    CHECK(contains(error_of(parse_config("command=design\nsteps=999\n")),
                   "steps must be >= 1000"));
    CHECK(contains(error_of(parse_config("command=design\nsamples=0\n")),
                   "samples must be >= 1"));
    CHECK(contains(error_of(parse_config("command=stability\nh0=-2\n")), "h0 must be >= 0"));
    CHECK(contains(error_of(parse_config("command=design\nomega=inf\n")),
                   "omega must be finite"));
}

TEST_CASE("rotating schedules pin the longitudinal field to zero") {
    CHECK(contains(
        error_of(parse_config("command=evolve-quantum\nschedule=rotating\nh=0.2\nN=64\n")),
        "rotating forbids h != 0"));
    RunConfig ok = parse_config("command=evolve-quantum\nschedule=rotating\nh=0\nN=64\n");
    CHECK_NOTHROW(validate_config(ok));
    RunConfig nofield = parse_config("command=evolve-quantum\nschedule=rotating\nN=64\n");
    validate_config(nofield);
    CHECK(nofield.params.h == 0.0);
}

TEST_CASE("command-specific coupling rules") {
    CHECK(contains(error_of(parse_config("command=design\nT=5,10\n")),
                   "multiple T values are only valid with command=sweep-T"));
    CHECK_NOTHROW([] {
        RunConfig cfg = parse_config("command=sweep-T\nT=5,10\nN=64\n");
        validate_config(cfg);
        return cfg;
    }());
    CHECK(contains(error_of(parse_config("command=evolve-quantum\nschedule=single1\n")),
                   "single-spin schedules evolve with N=1"));
    RunConfig s1 = parse_config("command=evolve-quantum\nschedule=single1\nN=1\n");
    validate_config(s1);
    CHECK(s1.out == "evolve-quantum.csv");
    CHECK(contains(error_of(parse_config("command=evolve-quantum\nN=10001\n")),
                   "N exceeds the sector solver cap 10000"));
    CHECK(contains(error_of(parse_config("command=sweep-T\nschedule=single2\nN=1\n")),
                   "sweep-T needs a collective schedule"));
    CHECK(contains(error_of(parse_config("command=stability\nschedule=linear\nN=64\n")),
                   "stability needs a designed collective schedule"));
}

TEST_CASE("mattis configuration rules") {
    CHECK(contains(error_of(parse_config("command=mattis\nN=8\n")),
                   "mattis requires xi or seed"));
    CHECK(contains(error_of(parse_config("command=mattis\nN=2\nxi=1,-1\nseed=3\n")),
                   "give either xi or seed, not both"));
    CHECK(contains(error_of(parse_config("command=mattis\nN=4\nxi=1,-1,1\n")),
                   "xi must have exactly N entries"));
    CHECK(contains(error_of(parse_config("command=mattis\nN=13\nseed=1\n")),
                   "mattis caps N at 12"));
    CHECK(contains(error_of(parse_config("command=mattis\nschedule=rotating\nN=4\nseed=1\n")),
                   "mattis needs schedule ising1 or ising2"));
    RunConfig ok = parse_config("command=mattis\nN=4\nseed=7\nT=5\n");
    validate_config(ok);
    CHECK(ok.out == "mattis.csv");
}

TEST_CASE("floats render at full precision in the shortest faithful form") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1e300) == "1.0000000000000001e+300");
}

TEST_CASE("file output lands atomically") {
    const std::string path = "test_config_atomic_out.csv";
    const std::string tmp = path + ".tmp";
    std::remove(path.c_str());
    std::remove(tmp.c_str());

    write_file_atomic(path, "t,m\n0,1\n");

    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "t,m\n0,1\n");
    std::ifstream leftover(tmp);
    CHECK_FALSE(leftover.good());
    std::remove(path.c_str());
}
