#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Result {
    int status = -1;
    std::string out;
};

// Runs the CLI with stderr folded away unless asked for.
Result cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd = std::string(MAJDYN_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("majdyn_cli_" + name);
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, NoArgumentsPrintsUsage) {
    auto r = cli("", true);
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("Usage"), std::string::npos);
}

TEST(Cli, UnknownSubcommandOrFlag) {
    EXPECT_EQ(cli("frobnicate").status, 1);
    auto r = cli("run --bogus", true);
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("Usage"), std::string::npos);
}

TEST(Cli, HelpListsFlags) {
    auto r = cli("run --help");
    EXPECT_EQ(r.status, 0);
    for (const char* flag : {"--config", "--set", "--n", "--p", "--trials", "--seed", "--model", "--d", "--c",
                             "--gamma", "--day-cap", "--threads", "--quenched", "--output", "--format", "--verbose"}) {
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
    }
}

TEST(Cli, ValidationErrorIsOneLine) {
    auto r = cli("run --n 5 --d 2", true);
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(count_lines(r.out), 1);
    EXPECT_EQ(cli("run --n 10 --set n=20").status, 1);
    EXPECT_EQ(cli("run --d 2 --c 1").status, 1);
    EXPECT_EQ(cli("run --config /nonexistent.json").status, 1);
}

TEST(Cli, RuntimeFailureExitsTwo) {
    EXPECT_EQ(cli("run --n 10 --p 0.5 --trials 1 -o /nonexistent-dir/out.csv").status, 2);
}

TEST(Cli, GoldenRun) {
    auto path = temp_file("golden.json");
    auto r = cli("run --n 100 --p 0.1 --trials 3 --seed 42 --format json -o " + path.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(path), slurp(std::filesystem::path(MAJDYN_GOLDEN_DIR) / "run_n100_p0.1_seed42.json"));
    std::filesystem::remove(path);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    auto conf = temp_file("conf.json");
    std::ofstream(conf) << R"({"n": 100, "p": 0.5, "trials": 3, "seed": 42})";
    auto a = cli("run --config " + conf.string() + " --p 0.1");
    auto b = cli("run --n 100 --p 0.1 --trials 3 --seed 42");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, slurp(std::filesystem::path(MAJDYN_GOLDEN_DIR) / "run_n100_p0.1_seed42.csv"));
    std::filesystem::remove(conf);
}

TEST(Cli, VerifyLemmas) {
    auto r = cli("verify-lemmas --max-trials 200");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    EXPECT_EQ(count_lines(r.out), 13);
    EXPECT_NE(r.out.find("binom_shift"), std::string::npos);
    EXPECT_NE(r.out.find("coupling_sandwich"), std::string::npos);
    EXPECT_NE(r.out.find("four_rv"), std::string::npos);
}

TEST(Cli, OtherSubcommands) {
    auto sweep = cli("sweep --n 100 --p 0.1 --trials 5 --d-values 0,10,100");
    EXPECT_EQ(sweep.status, 0);
    EXPECT_EQ(count_lines(sweep.out), 4);
    auto psweep = cli("sweep --n 100 --trials 5 --p-values 0.05,0.1 --format json");
    EXPECT_EQ(psweep.status, 0);
    EXPECT_EQ(psweep.out.front(), '[');
    EXPECT_EQ(cli("sweep --n 100").status, 1);

    EXPECT_EQ(cli("census --n 400 --p 0.05 --c 1 --gamma 0.1 --trials 4").status, 0);
    EXPECT_EQ(cli("census --n 400 --p 0.05 --trials 4").status, 1);
    auto growth = cli("growth --n 400 --p 0.05 --trials 4 --days 2");
    EXPECT_EQ(growth.status, 0);
    EXPECT_EQ(count_lines(growth.out), 3);
    EXPECT_EQ(cli("contraction --n 400 --p 0.05 --trials 4").status, 0);
    EXPECT_EQ(cli("contraction --n 400 --p 0.05 --trials 4 --floor 10").status, 0);

    auto graph = temp_file("g.bin");
    auto gen = cli("gen-graph --n 500 --p 0.02 --seed 3 -o " + graph.string());
    EXPECT_EQ(gen.status, 0);
    EXPECT_EQ(count_lines(gen.out), 2);
    EXPECT_TRUE(std::filesystem::exists(graph));
    std::filesystem::remove(graph);
}

TEST(Cli, LogsStayOffStdout) {
    auto quiet = cli("run --n 100 --p 0.1 --trials 3 --seed 42");
    auto loud = cli("run --n 100 --p 0.1 --trials 3 --seed 42 -v");
    EXPECT_EQ(quiet.out, loud.out);
}
