#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string g_cli;

fs::path scratch() {
    static const fs::path p = [] {
        const fs::path d = fs::temp_directory_path() / "graspsim_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return p;
}

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > " + (scratch() / "stdout.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

const std::string kFast =
    " --set learner.train_steps=300 --set learner.eps_anneal_steps=300 --set sweep.actions_per_group=20"
    " --set learner.hidden=16 --resolution 32";

}  // namespace

TEST_CASE("theory table") {
    const fs::path out = scratch() / "t";
    REQUIRE(run("theory --out " + out.string()) == 0);
    const auto rows = csv(out / "theory" / "seed1" / "theory.csv");
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"pe", "eta_theory"});
    CHECK(rows[6] == std::vector<std::string>{"0.50", "2.000000"});
    CHECK(rows[4] == std::vector<std::string>{"0.30", "1.428571"});
    CHECK(fs::exists(out / "theory" / "seed1" / "config.cfg"));
    CHECK(slurp(out / "theory" / "seed1" / "expectations.csv").find("1.386294361120") != std::string::npos);
}

TEST_CASE("plan on a one-object scene") {
    const fs::path scene = scratch() / "one.scene";
    {
        std::ofstream s(scene);
        s << "workspace 0.25 0\nobj 0 0.12 0.12 0.02 0.015 30 0.05 envelope_only 0\n";
    }
    const fs::path out = scratch() / "p";
    REQUIRE(run("plan " + scene.string() + " --out " + out.string()) == 0);
    const auto rows = csv(out / "plan" / "seed1" / "plan.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "0");
    CHECK(rows[1][1] == "envelope");
    CHECK(rows[1][2] == "30.000000");
    CHECK(rows[1].back().empty());
}

TEST_CASE("reactive single-mode sweep has eta equal to zeta, reruns are byte identical") {
    const std::string args = "sweep --policy es_reactive --pe 0.3,0.5 --episodes 2" + kFast;
    const fs::path a = scratch() / "a", b = scratch() / "b";
    REQUIRE(run(args + " --out " + a.string()) == 0);
    REQUIRE(run(args + " --out " + b.string()) == 0);
    const fs::path ra = a / "sweep" / "seed1", rb = b / "sweep" / "seed1";
    const auto rows = csv(ra / "sweep.csv");
    REQUIRE(rows.size() == 5);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        CHECK(rows[k][2] == rows[k][3]);
        CHECK(rows[k][8] == "0");
    }
    for (const char* f : {"sweep.csv", "theory.csv", "train_log.csv", "config.cfg", "checkpoint.bin"})
        CHECK(slurp(ra / f) == slurp(rb / f));
}

TEST_CASE("flags override the config file and land in the copied config") {
    const fs::path cfg = scratch() / "x.cfg";
    {
        std::ofstream c(cfg);
        c << "[env]\np_fail = 0.3\n[run]\nseed = 9\n";
    }
    const fs::path out = scratch() / "o";
    REQUIRE(run("theory --config " + cfg.string() + " --p-fail 0.1 --out " + out.string()) == 0);
    const std::string copied = slurp(out / "theory" / "seed9" / "config.cfg");
    CHECK(copied.find("p_fail = 0.10000000000000001") != std::string::npos);
    CHECK(copied.find("seed = 9") != std::string::npos);
}

TEST_CASE("train writes a checkpoint the sweep can load") {
    const fs::path out = scratch() / "tr";
    REQUIRE(run("train --seed 4" + kFast + " --out " + out.string()) == 0);
    const fs::path ck = out / "train" / "seed4" / "checkpoint.bin";
    REQUIRE(fs::exists(ck));
    CHECK(csv(out / "train" / "seed4" / "train_log.csv").size() == 301);
    REQUIRE(run("sweep --seed 4 --pe 0.5 --episodes 1 --checkpoint " + ck.string() + kFast + " --out " +
                out.string()) == 0);
    CHECK_FALSE(fs::exists(out / "sweep" / "seed4" / "train_log.csv"));
    CHECK(csv(out / "sweep" / "seed4" / "sweep.csv").size() == 2);
}

TEST_CASE("errors exit nonzero") {
    CHECK(run("theory --config /nonexistent.cfg") != 0);
    CHECK(slurp(scratch() / "stdout.txt").find("config file not found") != std::string::npos);
    CHECK(run("theory --set learner.gamma=1.5 --out " + (scratch() / "e").string()) != 0);
    CHECK(run("sweep --policy nobody --out " + (scratch() / "e").string()) != 0);
    CHECK(run("plan /nonexistent.scene --out " + (scratch() / "e").string()) != 0);
    CHECK(run("frobnicate") != 0);
    CHECK(run("") != 0);
}

TEST_CASE("selftest passes") {
    CHECK(run("selftest --out " + (scratch() / "s").string()) == 0);
    CHECK(slurp(scratch() / "stdout.txt").find("FAIL") == std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-graspsim> [doctest options]\n");
        return 2;
    }
    g_cli = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
