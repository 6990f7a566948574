#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "sjq/matrix_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int exit_code;
    std::string out_dir;
};

std::string work_dir() {
    auto dir = fs::temp_directory_path() / "sjq_cli_tests";
    fs::create_directories(dir);
    return dir.string();
}

CliRun run_cli(const std::string& args, const std::string& tag) {
    const std::string out = work_dir() + "/" + tag;
    fs::remove_all(out);
    fs::create_directories(out);
    const std::string quiet = " > " + out + "/stdout.txt 2> " + out + "/stderr.txt";
    const std::string cmd =
        std::string(SJQ_CLI_PATH) + " " + args + " --out " + out + quiet;
    const int status = std::system(cmd.c_str());
    return {WEXITSTATUS(status), out};
}

std::string fixture_rotation() {
    const std::string path = work_dir() + "/rotation.json";
    std::ofstream f(path);
    f << R"({"dim": 2, "matrix": [[0.0, 1.0], [-1.0, 0.0]]})";
    return path;
}

std::string fixture_chain(int n) {
    const std::string path = work_dir() + "/chain.txt";
    std::ofstream f(path);
    for (int i = 0; i + 1 < n; ++i) f << i << "<" << (i + 1) << "\n";
    return path;
}

std::string fixture_phis() {
    const std::string path = work_dir() + "/phis.csv";
    std::ofstream f(path);
    f << "0.0,0.0\n";
    f << "1.0,0.0\n";
    f << "0.3,-0.7\n";
    return path;
}

json load_json(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    return json::parse(f);
}

}  // namespace

TEST_CASE("decompose on the rotation fixture") {
    auto run = run_cli("decompose --input " + fixture_rotation(), "decompose_rot");
    CHECK(run.exit_code == 0);
    json report = load_json(run.out_dir + "/decomposition.json");
    REQUIRE(report["thetas"].size() == 1);
    CHECK(report["thetas"][0].get<double>() == 1.0);
    CHECK(report["pass"].get<bool>());
    CHECK(report["schema_version"].get<int>() == 1);
}

TEST_CASE("decompose on a ten-element chain") {
    auto run = run_cli("decompose --input " + fixture_chain(10), "decompose_chain");
    // contract: either an even-rank restriction succeeds or the odd rank is
    // reported as an error
    if (run.exit_code == 0) {
        json report = load_json(run.out_dir + "/decomposition.json");
        CHECK(report["dim"].get<int>() % 2 == 0);
        CHECK(report["pass"].get<bool>());
    } else {
        CHECK(run.exit_code == 2);
    }
}

TEST_CASE("missing input file exits with code 2") {
    auto run = run_cli("decompose --input /nonexistent/file.json", "decompose_missing");
    CHECK(run.exit_code == 2);
    std::ifstream err(run.out_dir + "/stderr.txt");
    std::string text((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
    CHECK(text.find("error") != std::string::npos);
}

TEST_CASE("sj-check passes on the rotation fixture") {
    auto run = run_cli("sj-check --input " + fixture_rotation(), "sj_rot");
    CHECK(run.exit_code == 0);
    json report = load_json(run.out_dir + "/sj_report.json");
    CHECK(report["is_pure"].get<bool>());
    CHECK(report["axiom_residuals"]["purity"].get<double>() < 1e-10);
    CHECK(report["axiom_residuals"]["positivity"].get<double>() >= -1e-10);
    CHECK(report["gram_min_eigenvalue"].get<double>() >= -1e-10);
}

TEST_CASE("perturbed operator keeps positivity but loses purity") {
    auto clean = run_cli("sj-check --input " + fixture_rotation(), "sj_clean");
    auto faulty =
        run_cli("sj-check --input " + fixture_rotation() + " --perturb-eps 1e-3", "sj_fault");
    CHECK(clean.exit_code == 0);
    CHECK(faulty.exit_code == 1);
    json report = load_json(faulty.out_dir + "/sj_report.json");
    CHECK(report["axiom_residuals"]["positivity"].get<double>() >= -1e-10);
    CHECK(report["axiom_residuals"]["purity"].get<double>() > 1e-6);

    auto zero =
        run_cli("sj-check --input " + fixture_rotation() + " --perturb-eps 0", "sj_zero");
    json a = load_json(zero.out_dir + "/sj_report.json");
    json b = load_json(clean.out_dir + "/sj_report.json");
    a.erase("perturb_eps");
    b.erase("perturb_eps");
    CHECK(a == b);
}

TEST_CASE("state evaluation crosses the closed form against the truncation") {
    auto run = run_cli("state-eval --input " + fixture_rotation() + " --phi-file " +
                           fixture_phis() + " --cutoff 40 --hbar-grid 1:2^-4",
                       "state_eval");
    CHECK(run.exit_code == 0);
    std::ifstream csv(run.out_dir + "/state_eval.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "phi_index,hbar,closed_form,fock_value,abs_diff,ok");
    std::string line;
    bool saw_zero_row = false;
    while (std::getline(csv, line)) {
        std::istringstream cells(line);
        std::string idx, hbar, closed, fock, diff, ok;
        std::getline(cells, idx, ',');
        std::getline(cells, hbar, ',');
        std::getline(cells, closed, ',');
        std::getline(cells, fock, ',');
        std::getline(cells, diff, ',');
        std::getline(cells, ok, ',');
        CHECK(ok == "1");
        CHECK(std::stod(diff) <= 1e-8);
        if (idx == "0") {
            saw_zero_row = true;
            CHECK(std::stod(closed) == 1.0);
        }
    }
    CHECK(saw_zero_row);
}

TEST_CASE("decompose emits the csv flavor on request") {
    auto run = run_cli("decompose --input " + fixture_rotation() + " --format csv",
                       "decompose_csv");
    CHECK(run.exit_code == 0);
    std::ifstream csv(run.out_dir + "/decomposition.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "record,key,value");
    std::string line;
    bool saw_theta = false;
    while (std::getline(csv, line)) {
        if (line.rfind("theta,0,", 0) == 0) {
            saw_theta = true;
            CHECK(std::stod(line.substr(8)) == 1.0);
        }
    }
    CHECK(saw_theta);
}

TEST_CASE("suite observable diagnostics emit plotting tables") {
    auto run = run_cli("suite --input " + fixture_rotation() +
                           " --observable \"1.0*z1*zb1\" --hbar-grid 1:2^-6",
                       "suite_obs");
    CHECK(run.exit_code == 0);
    CHECK(fs::exists(run.out_dir + "/suite_norm_function.csv"));
    CHECK(fs::exists(run.out_dir + "/suite_expansion_residuals.csv"));
    CHECK(fs::exists(run.out_dir + "/suite_classical_limit.csv"));
    json report = load_json(run.out_dir + "/suite.json");
    bool found = false;
    for (const auto& c : report["checks"]) {
        if (c["name"] == "cfield.expansion_residual") found = c["pass"].get<bool>();
    }
    CHECK(found);
}

TEST_CASE("suite passes on the rotation fixture and fails on absurd tolerances") {
    auto good = run_cli("suite --input " + fixture_rotation(), "suite_rot");
    CHECK(good.exit_code == 0);
    json report = load_json(good.out_dir + "/suite.json");
    CHECK(report["pass"].get<bool>());

    auto strict = run_cli("suite --input " + fixture_rotation() + " --tol 1e-16",
                          "suite_strict");
    CHECK(strict.exit_code == 1);
    json failed = load_json(strict.out_dir + "/suite.json");
    CHECK_FALSE(failed["pass"].get<bool>());
}

TEST_CASE("sprinkled suite reports are byte-identical across reruns") {
    auto a = run_cli("suite --sprinkle 20 --seed 7", "suite_seed_a");
    auto b = run_cli("suite --sprinkle 20 --seed 7", "suite_seed_b");
    CHECK(a.exit_code == b.exit_code);
    const std::string text_a = sjq::read_text_file(a.out_dir + "/suite.json");
    const std::string text_b = sjq::read_text_file(b.out_dir + "/suite.json");
    CHECK(text_a == text_b);
    CHECK(text_a.find("mt19937_64") != std::string::npos);
}
