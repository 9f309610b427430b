// Copyright 2026 The jmetric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "jmetric/cli.hpp"
#include "oracle.hpp"

using namespace jmetric;
using namespace jmetric::cli;

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("jmetric_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write_text(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }
    std::string write(const std::string& name, const Json& doc) { return write_text(name, write_report(doc)); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

Json diag_doc(std::initializer_list<Complex> d) { return matrix_document(oracle::diag(d)); }

}  // namespace

TEST(FormatNumber, SeventeenDigits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(-0.25), "-0.25");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.33333333333333331");
    EXPECT_EQ(format_number(1e-300), "1e-300");
    EXPECT_EQ(format_number(NAN), "null");
    EXPECT_EQ(format_number(INFINITY), "null");
}

TEST(FormatNumber, RoundTripsExactly) {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.normal() * std::pow(10.0, rng.integer(-30, 30));
        ASSERT_EQ(std::stod(format_number(x)), x);
    }
}

TEST(WriteReport, Layout) {
    const Json doc{{"b", Json::array({1.5, 2})}, {"a", Json{{"z", true}, {"y", "s"}}}, {"c", Json::array()},
                   {"d", Json::array({Json::array({0.5, -0.5})})}};
    EXPECT_EQ(write_report(doc),
              "{\n"
              "  \"a\": {\n"
              "    \"y\": \"s\",\n"
              "    \"z\": true\n"
              "  },\n"
              "  \"b\": [1.5, 2],\n"
              "  \"c\": [],\n"
              "  \"d\": [\n"
              "    [0.5, -0.5]\n"
              "  ]\n"
              "}\n");
}

TEST(Documents, MatrixRoundTripIsBitExact) {
    Rng rng(2);
    const Matrix a = random_gaussian(rng, 4);
    const Matrix back = parse_matrix(Json::parse(write_report(matrix_document(a))));
    EXPECT_EQ(back, a);
}

TEST(Documents, MatrixErrors) {
    EXPECT_THROW(parse_matrix(Json::parse(R"({"n": 2})")), InputError);
    EXPECT_THROW(parse_matrix(Json::parse(R"({"n": 0, "entries": []})")), InputError);
    EXPECT_THROW(parse_matrix(Json::parse(R"({"n": 1, "entries": [[[1, 0]], [[1, 0]]]})")), InputError);
    EXPECT_THROW(parse_matrix(Json::parse(R"({"n": 1, "entries": [[[1]]]})")), InputError);
    EXPECT_THROW(parse_matrix(Json::parse(R"({"n": 1, "entries": [[["1", 0]]]})")), InputError);
    EXPECT_EQ(parse_matrix(Json::parse(R"({"n": 1, "entries": [[[2, -3]]]})"))(0, 0), Complex(2.0, -3.0));
}

TEST(Documents, Symmetries) {
    const FundamentalSymmetry sig = parse_symmetry(Json::parse(R"({"signature": [2, 1]})"));
    EXPECT_EQ(sig.matrix(), oracle::diag({1.0, 1.0, -1.0}));
    EXPECT_EQ(symmetry_document(sig), Json::parse(R"({"signature": [2, 1]})"));
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const FundamentalSymmetry swap = parse_symmetry(Json{{"matrix", matrix_document(x)}});
    EXPECT_EQ(swap.matrix(), x);
    EXPECT_TRUE(parse_symmetry(symmetry_document(swap)).same_as(swap));
    EXPECT_THROW(parse_symmetry(Json{{"matrix", matrix_document(oracle::diag({2.0, 1.0}))}}), InputError);
    EXPECT_THROW(parse_symmetry(Json::parse(R"({"signature": [1]})")), InputError);
    EXPECT_THROW(parse_symmetry(Json::parse(R"({"signature": [-1, 2]})")), InputError);
    EXPECT_EQ(resolve_symmetry("1,1").matrix(), oracle::diag({1.0, -1.0}));
}

TEST(Documents, ChannelDefaultsSecondSymmetry) {
    const Json doc{{"kraus", Json::array({matrix_document(identity(2))})}, {"j1", Json::parse(R"({"signature": [1, 1]})")}};
    const ChannelInput ch = parse_channel(doc);
    ASSERT_TRUE(ch.kraus.has_value());
    EXPECT_TRUE(ch.j2.same_as(ch.j1));
    EXPECT_EQ(channel_document(*ch.kraus), doc);
    const Json bad{{"kraus", Json::array({matrix_document(identity(3))})}, {"j1", Json::parse(R"({"signature": [1, 1]})")}};
    EXPECT_THROW(parse_channel(bad), InputError);
}

TEST_F(Cli, CheckJState) {
    const CliRun r = run({"--symmetry", "1,1", "check", write("s.json", diag_doc({0.75, -0.25})), "--what", "j-state"});
    EXPECT_EQ(r.code, 0);
    const Json j = r.json();
    EXPECT_EQ(j["command"], "check");
    EXPECT_TRUE(j["verdicts"]["j-positive"]["pass"].get<bool>());
    EXPECT_TRUE(j["verdicts"]["trace"]["pass"].get<bool>());
}

TEST_F(Cli, CheckJStateOfJUnitaryOrigin) {
    const std::string s = write("s.json", diag_doc({1.0, 0.0}));
    EXPECT_EQ(run({"--symmetry", "1,1", "check", s, "--origin", "j-unitary"}).code, 0);
    const std::string t = write("t.json", diag_doc({0.75, -0.25}));
    EXPECT_EQ(run({"--symmetry", "1,1", "check", t, "--origin", "j-unitary"}).code, 1);
}

TEST_F(Cli, CheckIdentityIsNotJPositive) {
    const CliRun r = run({"--symmetry", "1,1", "check", write("i.json", diag_doc({1.0, 1.0})), "--what", "j-positive"});
    EXPECT_EQ(r.code, 1);
    EXPECT_DOUBLE_EQ(r.json()["outputs"]["min_eig"].get<double>(), -1.0);
    EXPECT_FALSE(r.json()["verdicts"]["j-positive"]["pass"].get<bool>());
}

TEST_F(Cli, CheckEffectAndSelfadjoint) {
    const std::string e = write("e.json", diag_doc({0.5, -0.25}));
    EXPECT_EQ(run({"--symmetry", "1,1", "check", e, "--what", "j-effect"}).code, 0);
    const std::string big = write("big.json", diag_doc({2.0, 0.0}));
    EXPECT_EQ(run({"--symmetry", "1,1", "check", big, "--what", "j-effect"}).code, 1);
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const std::string sx = write("x.json", matrix_document(x));
    EXPECT_EQ(run({"--symmetry", "1,1", "check", sx, "--what", "j-selfadjoint"}).code, 1);
    EXPECT_EQ(run({"--symmetry", "2,0", "check", sx, "--what", "j-selfadjoint"}).code, 0);
}

TEST_F(Cli, CheckSymmetryFromFile) {
    const std::string sym = write("sym.json", Json::parse(R"({"signature": [1, 1]})"));
    EXPECT_EQ(run({"--symmetry", sym, "check", write("s.json", diag_doc({0.75, -0.25}))}).code, 0);
}

TEST_F(Cli, InputErrorsExitTwo) {
    const std::string truncated = write_text("t.json", "{\"n\": 2, \"entries\": [[[1, 0], [0,");
    const CliRun r = run({"--symmetry", "1,1", "check", truncated});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.json()["error"]["code"], "parse");
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run({"--symmetry", "1,1", "check", path("missing.json")}).code, 2);
    EXPECT_EQ(run({"check", write("s.json", diag_doc({0.75, -0.25}))}).code, 2);
    EXPECT_EQ(run({"--symmetry", "2,1", "check", path("s.json")}).code, 2);
    EXPECT_EQ(run({"--symmetry", "1,1", "check", path("s.json"), "--what", "bogus"}).code, 2);
    EXPECT_EQ(run({"nonsense"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    const std::string nan = write_text("nan.json", "{\"n\": 1, \"entries\": [[[1e999, 0]]]}");
    EXPECT_EQ(run({"--symmetry", "1,0", "check", nan}).code, 2);
}

TEST_F(Cli, HelpExitsZero) {
    const CliRun r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("evolve"), std::string::npos);
}

TEST_F(Cli, ChannelIdentityIsCompletelyJPositive) {
    const Json doc{{"kraus", Json::array({matrix_document(identity(2))})}, {"j1", Json::parse(R"({"signature": [1, 1]})")}};
    const CliRun r = run({"channel", write("c.json", doc), "completely-jpositive"});
    EXPECT_EQ(r.code, 0);
    EXPECT_GE(r.json()["outputs"]["min_choi_eig"].get<double>(), -1e-10);
}

TEST_F(Cli, ChannelRandomLiftedIsAdmissible) {
    const CliRun gen = run({"--seed", "7", "random", "channel", "--n", "3", "--count", "2"});
    ASSERT_EQ(gen.code, 0);
    const std::string c = write("c.json", gen.json()["outputs"]["channel"]);
    EXPECT_EQ(run({"channel", c, "admissible"}).code, 0);
    EXPECT_EQ(run({"channel", c, "completely-jpositive"}).code, 0);
    const CliRun ex = run({"channel", c, "extract-kraus"});
    EXPECT_EQ(ex.code, 0);
    EXPECT_EQ(ex.json()["outputs"]["kraus_rank"], 2);
}

TEST_F(Cli, ChannelTwistedTransposeExtraction) {
    const Json doc{{"superoperator", matrix_document(twisted_transpose(resolve_symmetry("1,1"), resolve_symmetry("1,1")).matrix())},
                   {"j1", Json::parse(R"({"signature": [1, 1]})")}};
    const std::string c = write("t.json", doc);
    const CliRun r = run({"channel", c, "extract-kraus"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.json()["error"]["code"], "not-completely-jpositive");
    EXPECT_EQ(run({"channel", c, "completely-jpositive"}).code, 1);
}

TEST_F(Cli, ChannelApplyAndChoi) {
    const Json doc{{"kraus", Json::array({matrix_document(identity(2))})}, {"j1", Json::parse(R"({"signature": [1, 1]})")}};
    const std::string c = write("c.json", doc);
    const std::string a = write("a.json", diag_doc({0.75, -0.25}));
    const CliRun r = run({"channel", c, "apply", a});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(parse_matrix(r.json()["outputs"]["image"]), oracle::diag({0.75, -0.25}));
    const CliRun choi = run({"channel", c, "choi"});
    EXPECT_EQ(choi.code, 0);
    EXPECT_EQ(choi.json()["outputs"]["choi_rank"], 1);
    EXPECT_NEAR(parse_matrix(choi.json()["outputs"]["choi"]).trace().real(), 2.0, 1e-15);
    EXPECT_EQ(run({"channel", c, "apply"}).code, 2);
    EXPECT_EQ(run({"channel", c, "apply", write("b.json", diag_doc({1.0, 0.0, 0.0}))}).code, 2);
}

TEST_F(Cli, ChannelTracePreserving) {
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const Json doc{{"kraus", Json::array({matrix_document(x)})}, {"j1", Json::parse(R"({"signature": [1, 1]})")}};
    const std::string c = write("c.json", doc);
    EXPECT_EQ(run({"channel", c, "admissible"}).code, 0);
    const CliRun r = run({"channel", c, "trace-preserving"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.json()["verdicts"]["direct"]["pass"].get<bool>());
}

TEST_F(Cli, Bloch) {
    const CliRun r = run({"bloch", "--x0", "0.5"});
    EXPECT_EQ(r.code, 0);
    const Json p = r.json()["outputs"]["probabilities"];
    EXPECT_DOUBLE_EQ(p[0].get<double>(), 0.75);
    EXPECT_DOUBLE_EQ(p[1].get<double>(), -0.25);
    const CliRun out = run({"bloch", "--x0", "2"});
    EXPECT_EQ(out.code, 1);
    EXPECT_EQ(out.json()["error"]["code"], "outside-ball");
    EXPECT_EQ(run({"bloch", "--x0", "abc"}).code, 2);
}

TEST_F(Cli, Measure) {
    const CliRun r = run({"measure", "--y3", "2", "--x0", "0.5"});
    EXPECT_EQ(r.code, 0);
    const Json o = r.json()["outputs"];
    EXPECT_DOUBLE_EQ(o["outcomes"][0].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(o["outcomes"][1].get<double>(), -1.0);
    EXPECT_DOUBLE_EQ(o["probabilities"][0].get<double>(), 0.75);
    EXPECT_DOUBLE_EQ(o["probabilities"][1].get<double>(), -0.25);
    EXPECT_DOUBLE_EQ(o["expectation"].get<double>(), 1.0);
    const CliRun d = run({"measure", "--y1", "1", "--y3", "1"});
    EXPECT_EQ(d.code, 1);
    EXPECT_EQ(d.json()["error"]["code"], "degenerate-spectrum");
}

TEST_F(Cli, EvolveWithZeroGenerator) {
    const std::string s = write("s.json", matrix_document(bloch_matrix({0.3, 0.2, 0.1})));
    const std::string m = write("m.json", diag_doc({0.0, 0.0}));
    const CliRun r = run({"evolve", s, m, "--t", "0.5", "--dt", "0.01", "--every", "10", "--plot-data", path("plot.tsv")});
    EXPECT_EQ(r.code, 0);
    const Json rows = r.json()["outputs"]["rows"];
    ASSERT_EQ(rows.size(), 6u);
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (std::size_t k = 1; k < rows[i].size(); ++k) EXPECT_EQ(rows[i][k], rows[0][k]);
    std::ifstream plot(path("plot.tsv"));
    std::string line;
    int lines = 0;
    while (std::getline(plot, line)) ++lines;
    EXPECT_EQ(lines, 7);
}

TEST_F(Cli, EvolveErrors) {
    const std::string s = write("s.json", diag_doc({0.5, -0.5}));
    Matrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const std::string bad = write("x.json", matrix_document(x));
    EXPECT_EQ(run({"evolve", s, bad}).code, 2);
    EXPECT_EQ(run({"evolve", s, write("j.json", diag_doc({1.0, -1.0})), "--dt", "0"}).code, 2);
    EXPECT_EQ(run({"evolve", s, write("k.json", diag_doc({1.0, -1.0, 0.0}))}).code, 2);
}

TEST_F(Cli, RandomIsDeterministic) {
    const CliRun a = run({"--seed", "42", "random", "state", "--n", "3"});
    const CliRun b = run({"--seed", "42", "random", "state", "--n", "3"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.json()["seed"], 42);
    EXPECT_NE(a.out, run({"--seed", "43", "random", "state", "--n", "3"}).out);
    EXPECT_EQ(run({"random", "unitary", "--n", "3"}).code, 0);
    EXPECT_EQ(run({"random", "state", "--n", "0"}).code, 2);
}

TEST_F(Cli, RandomStatePassesCheck) {
    const Json gen = run({"--seed", "42", "random", "state", "--n", "3"}).json();
    const std::string s = write("s.json", gen["outputs"]["state"]);
    const std::string sym = write("sym.json", gen["outputs"]["symmetry"]);
    EXPECT_EQ(run({"--symmetry", sym, "check", s}).code, 0);
}
