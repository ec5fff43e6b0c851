#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef QDCOR_CLI_PATH
#error "QDCOR_CLI_PATH must be defined"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

std::string temp_path(const std::string& stem) {
    return std::string("cli_test_") + stem + ".tmp";
}

RunResult run_cli(const std::string& args, const std::string& stem) {
    const std::string out = temp_path(stem);
    const std::string cmd = std::string(QDCOR_CLI_PATH) + " " + args + " > " +
                            out + " 2> " + out + ".err";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream in(csv);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            seen_header = true;  // column header row
            continue;
        }
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

bool numeric_or_na(const std::string& cell) {
    if (cell == "NA") return true;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    (void)v;
    return end != cell.c_str() && *end == '\0';
}

std::string manifest_command(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        const std::string prefix = "# command: ";
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    }
    return {};
}

}  // namespace

TEST_CASE("theory: gaussian variance cell") {
    const auto r = run_cli(
        "theory --dist gaussian --p 0.95 --dispersion variance --quantile sample",
        "theory_gauss");
    CHECK(r.exit_code == 0);
    const auto rows = data_lines(r.output);
    REQUIRE(rows.size() == 1);
    const auto cells = split_csv(rows[0]);
    REQUIRE(cells.size() == 11);
    CHECK(cells[0] == "gaussian");
    const double corr = std::stod(cells[7]);
    CHECK(std::round(corr * 100.0) == 55.0);
    CHECK(cells[8] == "55");  // corr_pct
    CHECK(cells[10].find("MD1=ok") != std::string::npos);
}

TEST_CASE("theory: Student(3) variance is NA with exit 3") {
    const auto r = run_cli(
        "theory --dist student --nu 3 --dispersion variance --quantile sample "
        "--p 0.95",
        "theory_t3");
    CHECK(r.exit_code == 3);
    const auto rows = data_lines(r.output);
    REQUIRE(rows.size() == 1);
    const auto cells = split_csv(rows[0]);
    CHECK(cells[7] == "NA");
    CHECK(cells[10].find("MD1=violated") != std::string::npos);
    for (const auto& c : cells) CHECK(!c.empty());
}

TEST_CASE("theory: symmetry zero at p = 1/2") {
    const auto r = run_cli(
        "theory --dist gaussian --p 0.5 --dispersion mad --quantile sample",
        "theory_mid");
    CHECK(r.exit_code == 0);
    const auto cells = split_csv(data_lines(r.output)[0]);
    CHECK(std::fabs(std::stod(cells[7])) < 1e-12);
}

TEST_CASE("every cell is finite or NA") {
    const auto r = run_cli(
        "theory --dist student --nu 4 --p 0.3 0.95 "
        "--quantile sample locscale locscale-known "
        "--dispersion variance mad medianad",
        "theory_matrix");
    CHECK(r.exit_code == 3);  // loc-scale cells need E[Y^4]
    for (const auto& row : data_lines(r.output))
        for (const auto& cell : split_csv(row))
            if (!cell.empty() && (std::isdigit(cell[0]) || cell[0] == '-' ||
                                  cell[0] == 'N'))
                CHECK(numeric_or_na(cell));
}

TEST_CASE("curve: passes through zero at p = 1/2 and flat known-mean rows") {
    const auto r = run_cli(
        "curve --dist gaussian --pmin 0.25 --pmax 0.75 --pstep 0.125",
        "curve_small");
    CHECK(r.exit_code == 0);
    double known_abs = -1.0;
    for (const auto& row : data_lines(r.output)) {
        const auto cells = split_csv(row);
        REQUIRE(cells.size() == 5);
        const double p = std::stod(cells[3]);
        const double corr = std::stod(cells[4]);
        if (p == 0.5) CHECK(std::fabs(corr) < 1e-12);
        if (cells[1] == "locscale-known" && cells[2] == "variance" && p != 0.5) {
            if (known_abs < 0.0)
                known_abs = std::fabs(corr);
            else
                CHECK(std::fabs(corr) == doctest::Approx(known_abs).epsilon(1e-10));
        }
    }
}

TEST_CASE("curve: NA rows keep the run alive and flag exit 3") {
    const auto r = run_cli(
        "curve --dist \"student(3)\" --pmin 0.25 --pmax 0.75 --pstep 0.25",
        "curve_na");
    CHECK(r.exit_code == 3);
    const auto rows = data_lines(r.output);
    bool saw_na = false, saw_value = false;
    for (const auto& row : rows) {
        const auto cells = split_csv(row);
        if (cells[4] == "NA")
            saw_na = true;
        else
            saw_value = true;
    }
    CHECK(saw_na);     // variance / loc-scale cells need missing moments
    CHECK(saw_value);  // mad and medianad rows still fill in
}

TEST_CASE("simulate: byte determinism and seed sensitivity") {
    const std::string flags =
        "simulate --dist gaussian --p 0.9 --n 40 --l 10 --reps 6 --seed 7 "
        "--dispersion variance";
    const auto a = run_cli(flags, "sim_a");
    const auto b = run_cli(flags, "sim_b");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    const auto c = run_cli(
        "simulate --dist gaussian --p 0.9 --n 40 --l 10 --reps 6 --seed 8 "
        "--dispersion variance",
        "sim_c");
    CHECK(a.output != c.output);
    for (const auto& row : data_lines(a.output))
        for (const auto& cell : split_csv(row)) CHECK(!cell.empty());
}

TEST_CASE("manifest round trip reproduces the file") {
    const auto first = run_cli(
        "theory --dist student --nu 6 --p 0.9 --dispersion mad --quantile sample",
        "manifest_a");
    const std::string cmd = manifest_command(first.output);
    REQUIRE(!cmd.empty());
    const auto again = run_cli(cmd, "manifest_b");
    CHECK(first.output == again.output);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("theory --no-such-flag", "err_flag").exit_code == 2);
    CHECK(run_cli("theory --dist klingon", "err_dist").exit_code == 2);
    CHECK(run_cli("frobnicate", "err_cmd").exit_code == 2);
}

TEST_CASE("degenerate simulation exits 4") {
    CHECK(run_cli("simulate --dist gaussian --n 1 --l 10 --reps 2", "err_n")
              .exit_code == 4);
    CHECK(run_cli("simulate --dist gaussian --n 40 --l 2 --reps 2", "err_l")
              .exit_code == 4);
}

TEST_CASE("scaling table") {
    const auto r = run_cli(
        "scaling --dist gaussian --p 0.95 --dispersion variance --v 1 2 --w 1 4",
        "scaling");
    CHECK(r.exit_code == 0);
    const auto rows = data_lines(r.output);
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        const auto cells = split_csv(row);
        REQUIRE(cells.size() == 6);
        const int v = std::stoi(cells[0]);
        const int w = std::stoi(cells[1]);
        const double base = std::stod(cells[2]);
        const double scaled = std::stod(cells[3]);
        const double ratio = std::stod(cells[4]);
        const double factor = std::stod(cells[5]);
        CHECK(ratio == doctest::Approx(std::sqrt(
                           static_cast<double>(std::min(v, w)) / std::max(v, w))));
        CHECK(scaled == doctest::Approx(base * ratio).epsilon(1e-12));
        CHECK(factor == doctest::Approx(1.0 / std::max(v, w)));
    }
}

TEST_CASE("json config supplies defaults, flags override") {
    {
        std::ofstream cfg("cli_test_config.json");
        cfg << R"({"dist": "student", "nu": 5})";
    }
    const auto r = run_cli(
        "theory --config cli_test_config.json --p 0.9 --dispersion mad "
        "--quantile sample",
        "config_a");
    CHECK(r.exit_code == 0);
    CHECK(split_csv(data_lines(r.output)[0])[0] == "student(5)");

    const auto over = run_cli(
        "theory --config cli_test_config.json --dist gaussian --p 0.9 "
        "--dispersion mad --quantile sample",
        "config_b");
    CHECK(split_csv(data_lines(over.output)[0])[0] == "gaussian");
}

TEST_CASE("custom tabulated distribution approximates the gaussian") {
    {
        std::ofstream f("cli_test_custom.json");
        f << "{\"name\":\"tabulated-normal\",\"x\":[";
        const int n = 3201;
        std::ostringstream xs, cs, ps;
        for (int i = 0; i < n; ++i) {
            const double x = -8.0 + 16.0 * i / (n - 1);
            if (i) {
                xs << ",";
                cs << ",";
                ps << ",";
            }
            xs.precision(17);
            cs.precision(17);
            ps.precision(17);
            xs << x;
            cs << 0.5 * std::erfc(-x / std::sqrt(2.0));
            ps << std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        }
        f << xs.str() << "],\"cdf\":[" << cs.str() << "],\"pdf\":[" << ps.str()
          << "]}";
    }
    const auto r = run_cli(
        "theory --dist custom --custom-file cli_test_custom.json --p 0.95 "
        "--dispersion variance --quantile sample",
        "custom");
    CHECK(r.exit_code == 0);
    const auto cells = split_csv(data_lines(r.output)[0]);
    CHECK(cells[0] == "tabulated-normal");
    CHECK(std::stod(cells[7]) == doctest::Approx(0.5504).epsilon(0.02));
}
