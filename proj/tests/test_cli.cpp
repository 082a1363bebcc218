#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using Catch::Approx;

namespace {

std::filesystem::path work_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("sta_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args, const std::string& tag,
                  const std::string& env_prefix = "") {
    const auto out_path = work_dir() / (tag + ".stdout");
    const auto err_path = work_dir() / (tag + ".stderr");
    const std::string cmd = env_prefix + STA_BIN + " " + args + " > " + out_path.string() +
                            " 2> " + err_path.string();
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), slurp(out_path), slurp(err_path)};
}

std::string csv_path(const std::string& tag) {
    return (work_dir() / (tag + ".csv")).string();
}

std::filesystem::path write_config(const std::string& tag, const std::string& text) {
    const auto p = work_dir() / (tag + ".cfg");
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> vals;
    for (const auto& f : fields_of(line)) vals.push_back(std::stod(f));
    return vals;
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("design writes the drive table with documented columns") {
    const std::string out = csv_path("design_ising1");
    CliResult r = run_cli("design ising1 --T 10 --out " + out, "design_ising1");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.empty());

    const std::string csv = slurp(out);
    REQUIRE(!csv.empty());
    CHECK(csv.back() == '\n');
    CHECK(!contains(csv, "\r"));

    auto lines = lines_of(csv);
    REQUIRE(lines.size() == 202);
    CHECK(lines[0] == "t,gamma_x,gamma_y,f,h_z");
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto fields = fields_of(lines[k]);
        REQUIRE(fields.size() == 5);
        CHECK(fields[2] == "0");
        CHECK(fields[4] == "0");
    }

    auto first = parse_row(lines[1]);
    CHECK(first[0] == 0.0);
    CHECK(first[1] == Approx(1.0).margin(1e-9));
    CHECK(first[3] == Approx(0.0).margin(1e-9));

    auto last = parse_row(lines.back());
    CHECK(fields_of(lines.back())[0] == "10");
    CHECK(last[1] == Approx(0.0).margin(1e-9));
    CHECK(last[3] == Approx(1.0).margin(1e-9));
}

TEST_CASE("design exits 3 when the schedule diverges") {
    const std::string out = csv_path("design_diverge");
    CliResult r = run_cli("design ising2 --T 10 --out " + out, "design_diverge");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.err, "error: divergent schedule"));
    CHECK(contains(r.err, "6.2526"));
    CHECK(!std::filesystem::exists(out));
}

TEST_CASE("config errors exit 2 with a one-line diagnostic") {
    CliResult forbidden = run_cli(
        "evolve-quantum rotating --h 0.2 --N 64 --T 5 --out " + csv_path("rot_h"), "rot_h");
    CHECK(forbidden.exit_code == 2);
    CHECK(forbidden.err == "error: rotating forbids h != 0\n");

    CliResult no_pattern =
        run_cli("mattis ising1 --N 4 --T 5 --out " + csv_path("mattis_none"), "mattis_none");
    CHECK(no_pattern.exit_code == 2);
    CHECK(no_pattern.err == "error: mattis requires xi or seed\n");

    CliResult bad_key = run_cli("design foo=3 --out " + csv_path("bad_key"), "bad_key");
    CHECK(bad_key.exit_code == 2);
    CHECK(contains(bad_key.err, "argument 'foo=3'"));
    CHECK(contains(bad_key.err, "unknown key 'foo'"));

    CliResult no_command = run_cli("", "no_command");
    CHECK(no_command.exit_code == 2);
    CHECK(contains(no_command.err, "error:"));
}

TEST_CASE("evolve-quantum reruns are byte-identical") {
    const std::string out1 = csv_path("rot_run1");
    const std::string out2 = csv_path("rot_run2");
    CliResult r1 = run_cli("evolve-quantum rotating --N 64 --T 5 --out " + out1, "rot_run1");
    CliResult r2 = run_cli("evolve-quantum rotating --N 64 --T 5 --out " + out2, "rot_run2");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);

    const std::string csv1 = slurp(out1);
    REQUIRE(!csv1.empty());
    CHECK(csv1 == slurp(out2));

    auto lines = lines_of(csv1);
    REQUIRE(lines.size() == 202);
    CHECK(lines[0] == "t,m,dm2_literal,dm2_fluct,n_x,n_y,n_z");

    auto first = parse_row(lines[1]);
    CHECK(first[0] == 0.0);
    CHECK(first[4] == Approx(1.0).epsilon(1e-12));
    auto last = parse_row(lines.back());
    CHECK(last[0] == 5.0);
    CHECK(last[1] > 0.8);
    CHECK(last[1] == Approx(last[6]).margin(1e-12));
}

TEST_CASE("config files merge with flags and positionals") {
    const auto cfg = write_config("merge", "command=design\nschedule=ising1\nT=5\n");
    const std::string out = csv_path("merge");
    CliResult r =
        run_cli("design --config " + cfg.string() + " --T 8 --out " + out, "merge");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 202);
    CHECK(fields_of(lines.back())[0] == "8");

    const std::string flag_out = csv_path("merge_flags");
    CliResult rf = run_cli("design ising1 --T 8 --out " + flag_out, "merge_flags");
    REQUIRE(rf.exit_code == 0);
    CHECK(slurp(out) == slurp(flag_out));

    const std::string pos_out = csv_path("merge_pos");
    CliResult rp = run_cli("design schedule=ising1 T=8 --out " + pos_out, "merge_pos");
    REQUIRE(rp.exit_code == 0);
    CHECK(slurp(out) == slurp(pos_out));
}

TEST_CASE("a config file command must match the subcommand") {
    const auto cfg = write_config(
        "stab", "command=stability\nh0=4.0\nhp=0.0\nomega=31.41592653589793\n");
    CliResult conflict =
        run_cli("design --config " + cfg.string() + " --out " + csv_path("conflict"),
                "conflict");
    CHECK(conflict.exit_code == 2);
    CHECK(contains(conflict.err, "conflicts with subcommand 'design'"));

    const std::string out = csv_path("stab");
    CliResult r = run_cli("stability --config " + cfg.string() +
                              " --N 32 --T 5 --steps 4000 --samples 50 --out " + out,
                          "stab");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 52);
    CHECK(lines[0] == "t,m,dm2_literal,dm2_fluct,n_x,n_y,n_z");
    CHECK(parse_row(lines.back())[0] == 5.0);
}

TEST_CASE("sweep-T emits two metric rows per horizon") {
    const std::string out = csv_path("sweep");
    CliResult r = run_cli("sweep-T ising1 --T 2,3 --N 16 --steps 1000 --samples 50 --out " +
                              out,
                          "sweep", "STA_THREADS=1 ");
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.err, "sweep-T T=2"));
    CHECK(contains(r.err, "sweep-T T=3"));

    auto lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "T,metric,value");
    const std::vector<std::string> want_T = {"2", "2", "3", "3"};
    const std::vector<std::string> want_metric = {"final_m", "max_dev_mf", "final_m",
                                                  "max_dev_mf"};
    const std::vector<double> want_value = {0.171857589301, 0.828142410699, 0.340848288748,
                                            0.659151711252};
    for (int k = 0; k < 4; ++k) {
        auto fields = fields_of(lines[static_cast<std::size_t>(k) + 1]);
        REQUIRE(fields.size() == 3);
        CHECK(fields[0] == want_T[static_cast<std::size_t>(k)]);
        CHECK(fields[1] == want_metric[static_cast<std::size_t>(k)]);
        CHECK(std::stod(fields[2]) ==
              Approx(want_value[static_cast<std::size_t>(k)]).margin(1e-6));
    }
}

TEST_CASE("mattis reports the drawn pattern on stderr") {
    const std::string out = csv_path("mattis");
    CliResult r = run_cli(
        "mattis ising1 --seed 7 --N 4 --T 5 --steps 1000 --samples 50 --out " + out,
        "mattis");
    REQUIRE(r.exit_code == 0);

    auto err_lines = lines_of(r.err);
    REQUIRE(!err_lines.empty());
    CHECK(err_lines[0] == "xi = +1 -1 -1 -1");

    auto lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 52);
    CHECK(lines[0] == "t,m,dm2_literal,dm2_fluct,n_x,n_y,n_z");
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto row = parse_row(lines[k]);
        REQUIRE(row.size() == 7);
        CHECK(std::abs(row[1]) <= 1.0 + 1e-9);
    }
    CHECK(parse_row(lines.back())[1] == Approx(0.660300296367).margin(1e-9));
}

TEST_CASE("an unwritable output path exits 1") {
    CliResult r = run_cli("design ising1 --T 5 --out /nonexistent_sta_dir/x.csv",
                          "unwritable");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.err, "error: cannot open"));
}

TEST_CASE("evolve-bloch writes the classical trajectory") {
    const std::string out = csv_path("bloch");
    CliResult r =
        run_cli("evolve-bloch single1 --N 1 --h 1 --T 10 --out " + out, "bloch");
    REQUIRE(r.exit_code == 0);

    auto lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 202);
    CHECK(lines[0] == "t,m,dm2_literal,dm2_fluct,n_x,n_y,n_z");
    for (std::size_t k = 1; k < lines.size(); ++k) {
        auto fields = fields_of(lines[k]);
        REQUIRE(fields.size() == 7);
        CHECK(fields[3] == "0");
        CHECK(fields[1] == fields[6]);
        auto row = parse_row(lines[k]);
        CHECK(row[2] == Approx(row[1] * row[1]).margin(1e-15));
    }

    auto last = parse_row(lines.back());
    CHECK(fields_of(lines.back())[0] == "10");
    CHECK(last[6] == Approx(1.0).margin(1e-6));
    CHECK(std::abs(last[4]) < 1e-6);
    CHECK(std::abs(last[5]) < 1e-6);
}

TEST_CASE("help requests exit cleanly") {
    CliResult r = run_cli("--help", "help");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "design"));
    CHECK(contains(r.out, "sweep-T"));
}
