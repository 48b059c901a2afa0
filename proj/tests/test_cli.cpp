#include <gtest/gtest.h>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli_cases.hpp"

namespace {

using pqspecial::testing::golden_cases;
using pqspecial::testing::run_cli;

std::string golden_path(const std::string& name) { return std::string(PQSPECIAL_GOLDEN_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool updating() {
    const char* env = std::getenv("PQSPECIAL_UPDATE_GOLDEN");
    return env != nullptr && std::string(env) == "1";
}

class GoldenOutput : public ::testing::TestWithParam<pqspecial::testing::GoldenCase> {};

TEST_P(GoldenOutput, MatchesCheckedInBytes) {
    const auto& c = GetParam();
    const auto r = run_cli(c.args);
    ASSERT_EQ(r.code, c.expected_code) << r.err;
    if (updating()) {
        std::ofstream(golden_path(c.name), std::ios::binary) << r.out;
        GTEST_SKIP() << "golden file rewritten";
    }
    EXPECT_EQ(r.out, read_file(golden_path(c.name)));
}

INSTANTIATE_TEST_SUITE_P(Cli, GoldenOutput, ::testing::ValuesIn(golden_cases()),
                         [](const auto& info) {
                             std::string name = info.param.name;
                             for (char& ch : name) {
                                 if (ch == '.') {
                                     ch = '_';
                                 }
                             }
                             return name;
                         });

class ExitContract : public ::testing::TestWithParam<pqspecial::testing::ContractCase> {};

TEST_P(ExitContract, CodeAndDiagnostic) {
    const auto& c = GetParam();
    const auto r = run_cli(c.args);
    EXPECT_EQ(r.code, c.expected_code) << r.err;
    EXPECT_NE(r.err.find(c.err_contains), std::string::npos) << r.err;
}

INSTANTIATE_TEST_SUITE_P(Cli, ExitContract, ::testing::ValuesIn(pqspecial::testing::contract_cases()),
                         [](const auto& info) {
                             const auto& args = info.param.args;
                             std::string name = args.empty() ? "none" : args.front();
                             for (char& ch : name) {
                                 if (std::isalnum(static_cast<unsigned char>(ch)) == 0) {
                                     ch = '_';
                                 }
                             }
                             return name + "_" + std::to_string(info.index);
                         });

TEST(CliEval, PrintedSeriesReproducesLogTwo) {
    const auto r = run_cli({"eval", "--func", "psi_pq", "--t", "1", "--p", "1", "--q", "0.5", "--series", "truncated"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("value=-0.6931471806"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("terms_used="), std::string::npos);
    EXPECT_NE(r.out.find("est_round_err="), std::string::npos);
}

TEST(CliEval, DefaultIsExactLogDerivative) {
    const auto r = run_cli({"eval", "--func", "psi_pq", "--t", "1", "--p", "1", "--q", "0.5"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("value=-0.9241962407"), std::string::npos) << r.out;
}

TEST(CliEval, DiagnosticIsOneLine) {
    const auto r = run_cli({"eval", "--func", "psi_pq", "--t", "-1", "--p", "1", "--q", "0.5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
    EXPECT_TRUE(r.out.empty());
}

TEST(CliEval, JsonErrorIsStructured) {
    const auto r = run_cli({"eval", "--func", "psi_pq", "--t", "0", "--p", "1", "--q", "0.5", "--format", "json"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("\"kind\": \"domain_error\""), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\"command\": \"eval\""), std::string::npos);
}

TEST(CliEval, EveryListedFunctionEvaluates) {
    const std::vector<std::vector<std::string>> calls{
        {"--func", "gamma_pq", "--t", "2", "--p", "3", "--q", "0.5"},
        {"--func", "log_gamma_pq", "--t", "2", "--p", "3", "--q", "0.5"},
        {"--func", "psi_pq_m", "--t", "2", "--p", "3", "--q", "0.5", "--m", "2"},
        {"--func", "psi_p", "--t", "2", "--p", "3"},
        {"--func", "psi_q", "--t", "2", "--q", "0.5"},
        {"--func", "psi", "--t", "2"},
        {"--func", "psi_m", "--t", "2", "--m", "1"},
        {"--func", "gamma_p", "--t", "2", "--p", "3"},
        {"--func", "gamma_q", "--t", "2", "--q", "0.5"},
        {"--func", "gamma_q", "--t", "2", "--q", "0.5", "--gamma-q-convention", "shifted"},
        {"--func", "log_gamma", "--t", "2"},
        {"--func", "q_number", "--x", "2", "--q", "0.5"},
    };
    for (auto args : calls) {
        args.insert(args.begin(), "eval");
        const auto r = run_cli(args);
        EXPECT_EQ(r.code, 0) << args[2] << ": " << r.err;
    }
}

TEST(CliEval, GammaPAtTwo) {
    // Gamma_p(2) = p! p^2 / (2 * 3 * ... * (p + 2)) = p^2 / ((p + 1)(p + 2)); p = 3 gives 0.45.
    const auto r = run_cli({"eval", "--func", "gamma_p", "--t", "2", "--p", "3", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("gamma_p,0.45000000000000"), std::string::npos) << r.out;
}

TEST(CliVerify, SummaryLineShape) {
    const auto r = run_cli({"verify", "--theorem", "T1", "--samples", "100", "--seed", "42"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("theorem=T1 samples=100 violations=0 min_margin=", 0), 0u) << r.out;
    EXPECT_NE(r.out.find(" argmin=s="), std::string::npos);
}

TEST(CliVerify, DeterministicUnderSeed) {
    const std::vector<std::string> args{"verify", "--theorem", "T3", "--samples", "500", "--seed", "99"};
    EXPECT_EQ(run_cli(args).out, run_cli(args).out);
    const auto other = run_cli({"verify", "--theorem", "T3", "--samples", "500", "--seed", "100"});
    EXPECT_NE(run_cli(args).out, other.out);
}

TEST(CliVerify, ReportFileHoldsEverySample) {
    const auto path = std::filesystem::temp_directory_path() / "pqspecial_report_test.csv";
    const auto r = run_cli({"verify", "--theorem", "T2", "--samples", "25", "--report", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    std::getline(in, line);
    EXPECT_EQ(line, "index,theorem,s,t,p,q,m,lhs,rhs,margin,tol,holds,chain_s,chain_t");
    while (std::getline(in, line)) {
        ++lines;
    }
    EXPECT_EQ(lines, 25);
    std::filesystem::remove(path);
}

TEST(CliVerify, SpecFileAndFlagOverride) {
    const auto path = std::filesystem::temp_directory_path() / "pqspecial_spec_test.json";
    std::ofstream(path) << R"({"sample_count": 40, "seed": 5, "p_values": [3], "q_values": [0.25], "m_values": [3]})";
    const auto from_spec = run_cli({"verify", "--theorem", "T4", "--spec", path.string()});
    ASSERT_EQ(from_spec.code, 0) << from_spec.err;
    EXPECT_NE(from_spec.out.find("samples=40"), std::string::npos);
    EXPECT_NE(from_spec.out.find("p=3,q=0.25,m=3"), std::string::npos) << from_spec.out;
    const auto overridden = run_cli({"verify", "--theorem", "T4", "--spec", path.string(), "--samples", "7"});
    EXPECT_NE(overridden.out.find("samples=7"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(CliVerify, SpecFileRejectsUnknownKeys) {
    const auto path = std::filesystem::temp_directory_path() / "pqspecial_bad_spec.json";
    std::ofstream(path) << R"({"sample_count": 4, "samples": 9})";
    const auto r = run_cli({"verify", "--theorem", "T1", "--spec", path.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("unknown key 'samples'"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(CliVerify, WitnessesPass) {
    const auto r = run_cli({"verify", "--witnesses", "--samples", "500", "--format", "csv"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.rfind("witness,checked,violations,worst\n", 0), 0u);
}

TEST(CliVerify, ClassicalTheorem) {
    const auto r = run_cli({"verify", "--theorem", "c2", "--samples", "300"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("theorem=C2"), std::string::npos);
}

TEST(CliSweep, CsvHasOneRowPerSample) {
    const auto r = run_cli({"sweep", "--theorem", "T1", "--samples", "12"});
    ASSERT_EQ(r.code, 0);
    int newlines = 0;
    for (const char ch : r.out) {
        newlines += ch == '\n';
    }
    EXPECT_EQ(newlines, 13);
}

TEST(CliSweep, OutFileReceivesPayload) {
    const auto path = std::filesystem::temp_directory_path() / "pqspecial_out_test.json";
    const auto r = run_cli({"sweep", "--theorem", "T2", "--samples", "3", "--format", "json", "--out", path.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    const std::string body = read_file(path.string());
    EXPECT_EQ(body.rfind("{\n  \"command\": \"sweep\"", 0), 0u) << body;
    std::filesystem::remove(path);
}

TEST(CliLimits, DefaultScheduleHasSixRows) {
    const auto r = run_cli({"limits", "--func", "psi_pq", "--t", "2", "--schedule", "default"});
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "k,p,q,value,target,abs_err");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 6);
}

TEST(CliLimits, MarginRequiresItsPoint) {
    EXPECT_EQ(run_cli({"limits", "--func", "t2", "--t", "1"}).code, 2);
    EXPECT_EQ(run_cli({"limits", "--func", "t2", "--t", "1", "--s", "0.5", "--m", "1"}).code, 0);
}

}  // namespace
