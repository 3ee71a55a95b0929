// Copyright 2026 The ErasureLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "catch_amalgamated.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / "erasurelab_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string &args) {
    static int counter = 0;
    const fs::path out = scratch("stdout_" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string(ERASURELAB_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    return r;
}

} // namespace

TEST_CASE("simulate is byte-identical for a fixed seed", "[cli]") {
    for (const std::string format : {"json", "csv"}) {
        const std::string args = "simulate --p 0.5 --messages 200 --strategy auto --seed 7 --format " + format;
        const RunResult a = run(args), b = run(args);
        REQUIRE(a.code == 0);
        CHECK(b.code == 0);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
    const RunResult json = run("simulate --p 0 --messages 10 --strategy sub2 --seed 1");
    REQUIRE(json.code == 0);
    const auto j = nlohmann::json::parse(json.out);
    CHECK(j["channel_uses"] == 10);
    CHECK(j["empirical_rate"] == 1.0);
    CHECK(j["strategy"] == "sub2");
}

TEST_CASE("file outputs are deterministic", "[cli]") {
    const std::vector<std::string> commands{
        "bounds --grid-points 101",
        "martingale --p 0.5 --n 50 --k 0.3 --trials 1000 --seed 3",
        "verify --suite fannes --samples 50 --seed 2",
    };
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const fs::path f1 = scratch("a" + std::to_string(i)), f2 = scratch("b" + std::to_string(i));
        CHECK(run(commands[i] + " --out " + f1.string()).code == 0);
        CHECK(run(commands[i] + " --out " + f2.string()).code == 0);
        CHECK(slurp(f1) == slurp(f2));
        CHECK(!slurp(f1).empty());
    }
}

TEST_CASE("rates reports closed forms", "[cli]") {
    const RunResult r = run("rates --p 0.25");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("0.5625") != std::string::npos);
    CHECK(run("rates --grid-points 11").code == 0);
}

TEST_CASE("usage errors exit with code 2", "[cli]") {
    CHECK(run("simulate --p 0.5 --messages 10").code == 2);
    CHECK(run("simulate --p 1.5 --messages 10 --seed 1").code == 2);
    CHECK(run("martingale --seed 1 --trials 10").code == 2);
    CHECK(run("martingale --seed 1 --info 3").code == 2);
    CHECK(run("verify --suite nope --seed 1").code == 2);
    CHECK(run("simulate --config /nonexistent/erasurelab.cfg --messages 5").code != 0);
    CHECK(run("").code == 2);
}

TEST_CASE("simulate reads a config file", "[cli]") {
    const fs::path cfg = scratch("channel.cfg");
    std::ofstream(cfg) << "# test channel\np = 0.25\nseed = 9\nmax_retransmits = 64\n";
    const RunResult r = run("simulate --config " + cfg.string() + " --messages 20 --strategy sub2");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["p"] == 0.25);
    CHECK(j["seed"] == 9);
    CHECK(j["min_fidelity"].get<double>() > 1.0 - 1e-9);
}
