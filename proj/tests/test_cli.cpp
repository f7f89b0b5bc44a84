#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "helpers.hpp"
#include "pisim/io.hpp"

namespace {

using namespace pisim;
using namespace testing_support;
namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "pisim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("pisim_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write(const std::string& name, const Json& j) { return write(name, dump_json(j)); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

Json spec_json(std::vector<JordanEigenBlocks> blocks) {
  return spec_to_json(JordanSpec::canonical(std::move(blocks)));
}

TEST_F(Cli, AnalyzeIdentityAndNilpotent) {
  const Result id = run({"analyze", write("i.json", matrix_to_json(ComplexMat::Identity(3, 3)))});
  ASSERT_EQ(id.code, cli::kTrue) << id.err;
  EXPECT_TRUE(spec_from_json(parse_json(id.out)).equivalent(JordanSpec::canonical({{1.0, {1, 1, 1}}}), 0.0));

  const Result j2 = run({"analyze", write("j.json", matrix_to_json(jordan_block(2, 0.0)))});
  ASSERT_EQ(j2.code, cli::kTrue);
  EXPECT_TRUE(spec_from_json(parse_json(j2.out)).equivalent(JordanSpec::canonical({{0.0, {2}}}), 0.0));
  EXPECT_EQ(j2.out.back(), '\n');
}

TEST_F(Cli, DecideExitCodes) {
  const Result yes = run({"decide", write("i2.json", matrix_to_json(ComplexMat::Identity(2, 2)))});
  EXPECT_EQ(yes.code, cli::kTrue);
  EXPECT_EQ(parse_json(yes.out).at("verdict"), true);

  const Result no = run({"decide", write("j21.json", spec_json({{1.0, {2}}}))});
  EXPECT_EQ(no.code, cli::kFalse);
  const Decision d = decision_from_json(parse_json(no.out));
  bool saw = false;
  for (const auto& c : d.conditions) {
    if (c.id == ConditionId::UnimodularDiagonalizable) {
      EXPECT_FALSE(c.passed);
      saw = true;
    }
  }
  EXPECT_TRUE(saw);
}

TEST_F(Cli, DecideProjectionProduct) {
  const std::string f = write("s.json", spec_json({{1.0, {1}}, {0.5, {1}}, {0.0, {1}}}));
  EXPECT_EQ(run({"decide", "--pp", f}).code, cli::kTrue);
  EXPECT_EQ(run({"decide", "--pp", write("t.json", spec_json({{0.5, {1}}, {0.25, {1}}}))}).code,
            cli::kFalse);
}

TEST_F(Cli, ConstructUnimodularScalar) {
  const Result r = run({"construct", write("z.json", spec_json({{Complex(0.0, 1.0), {1}}}))});
  ASSERT_EQ(r.code, cli::kTrue) << r.err;
  const Certificate c = certificate_from_json(parse_json(r.out));
  EXPECT_EQ(c.target, mat({{Complex(0.0, 1.0)}}));
}

TEST_F(Cli, ConstructInadmissiblePrintsDecision) {
  const Result r = run({"construct", write("h.json", spec_json({{0.5, {1}}}))});
  EXPECT_EQ(r.code, cli::kFalse);
  EXPECT_EQ(parse_json(r.out).at("verdict"), false);
}

TEST_F(Cli, ConstructThenVerify) {
  const std::string a = write("a.json", matrix_to_json(diag_example()));
  const Result c = run({"--out", path("cert.json"), "construct", a});
  ASSERT_EQ(c.code, cli::kTrue) << c.err;
  EXPECT_TRUE(c.out.empty());
  const Result v = run({"verify", path("cert.json"), a});
  EXPECT_EQ(v.code, cli::kTrue) << v.err;
  EXPECT_EQ(parse_json(v.out).at("passed"), true);
}

TEST_F(Cli, VerifyDetectsTamperedTargetAndSimilarity) {
  const std::string a = write("a.json", matrix_to_json(diag_example()));
  const Result c = run({"construct", a});
  ASSERT_EQ(c.code, cli::kTrue);
  Json cert = parse_json(c.out);

  Json bad_v = cert;
  bad_v["V"]["data"][1][0] = bad_v["V"]["data"][1][0].get<double>() + 1e-3;
  const Result rv = run({"verify", write("bad_v.json", bad_v), a});
  EXPECT_EQ(rv.code, cli::kFalse);
  EXPECT_NE(rv.err.find("verification failed"), std::string::npos);

  Json bad_s = cert;
  bad_s["S"]["data"][2][0] = bad_s["S"]["data"][2][0].get<double>() + 0.1;
  EXPECT_EQ(run({"verify", write("bad_s.json", bad_s), a}).code, cli::kFalse);
}

TEST_F(Cli, ProjectionCertificateVerifies) {
  const std::string s = write("s.json", spec_json({{0.5, {1}}, {0.0, {1}}}));
  ASSERT_EQ(run({"--out", path("pp.json"), "construct", "--pp", s}).code, cli::kTrue);
  EXPECT_TRUE(parse_json(slurp(path("pp.json"))).contains("P"));
  EXPECT_EQ(run({"verify", path("pp.json"), s}).code, cli::kTrue);
}

TEST_F(Cli, ParseErrors) {
  EXPECT_EQ(run({"analyze", write("junk.json", std::string("{oops"))}).code, cli::kParse);
  EXPECT_EQ(run({"analyze", path("missing.json")}).code, cli::kParse);
  EXPECT_EQ(run({"decide", write("neither.json", std::string("{\"x\": 1}"))}).code, cli::kParse);
  EXPECT_EQ(run({"analyze", write("rect.json", matrix_to_json(ComplexMat::Zero(2, 3)))}).code,
            cli::kParse);
  EXPECT_EQ(run({"bogus"}).code, cli::kParse);
  EXPECT_EQ(run({}).code, cli::kParse);
  EXPECT_EQ(run({"--tol-rank", "2", "analyze", write("i.json", matrix_to_json(ComplexMat::Identity(1, 1)))}).code,
            cli::kParse);
}

TEST_F(Cli, UnwritableOutputIsAnError) {
  const std::string a = write("a.json", matrix_to_json(ComplexMat::Identity(1, 1)));
  EXPECT_EQ(run({"--out", (dir_ / "no_such_dir" / "x.json").string(), "analyze", a}).code, cli::kParse);
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, cli::kTrue);
}

TEST_F(Cli, ClusterAmbiguityIsNumerical) {
  // Two simple eigenvalues 1.5e-7 apart: farther than the clustering radius,
  // closer than twice it.
  ComplexMat a = ComplexMat::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = 0.5 + 1.5e-7;
  const Result r = run({"analyze", write("amb.json", matrix_to_json(a))});
  EXPECT_EQ(r.code, cli::kNumerical);
  EXPECT_NE(r.err.find("cluster ambiguity"), std::string::npos);
}

TEST_F(Cli, ToleranceFlagsChangeTheOutcome) {
  ComplexMat a = ComplexMat::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = 0.5 + 1.5e-7;
  const std::string f = write("amb.json", matrix_to_json(a));
  const Result r = run({"--tol-cluster", "1e-9", "analyze", f});
  ASSERT_EQ(r.code, cli::kTrue) << r.err;
  EXPECT_EQ(spec_from_json(parse_json(r.out), Tolerances{1e-9, 1e-9, 1e-8}).blocks().size(), 2u);
}

TEST_F(Cli, SuiteIsDeterministicAndPasses) {
  const Result a = run({"--seed", "42", "suite", "--size-max", "8", "--cases", "5"});
  ASSERT_EQ(a.code, cli::kTrue) << a.err;
  const Result b = run({"--seed", "42", "suite", "--size-max", "8", "--cases", "5"});
  EXPECT_EQ(a.out, b.out);
  const Json report = parse_json(a.out);
  EXPECT_EQ(report.at("passed"), true);
  EXPECT_TRUE(report.at("first_failure").is_null());
  EXPECT_FALSE(report.at("properties").empty());
}

TEST_F(Cli, SuiteDegenerateSize) {
  EXPECT_EQ(run({"suite", "--size-max", "1", "--cases", "5"}).code, cli::kTrue);
}

TEST_F(Cli, ReplayReproducesFailure) {
  // The identity has rank 2, so a stored expectation of rank 1 fails.
  Json failure{{"property", "linalg.rank_nullity"},
               {"case_seed", 1},
               {"size_max", 4},
               {"input", Json{{"A", matrix_to_json(ComplexMat::Identity(2, 2))}, {"rank", 1}}},
               {"message", "rank 2"}};
  const std::string f = write("fail.json", failure);
  const Result r1 = run({"suite", "--replay", f});
  EXPECT_EQ(r1.code, cli::kFalse);
  const Json report = parse_json(r1.out);
  ASSERT_FALSE(report.at("first_failure").is_null());
  EXPECT_EQ(report.at("first_failure").at("property"), "linalg.rank_nullity");
  EXPECT_EQ(report.at("first_failure").at("input"), failure.at("input"));
  EXPECT_EQ(report.at("first_failure").at("message"), "rank 2");

  // Replaying the reported failure gives the same report again.
  const Result r2 = run({"suite", "--replay", write("again.json", report.at("first_failure"))});
  EXPECT_EQ(r2.code, cli::kFalse);
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(r1.err, r2.err);

  failure["input"]["rank"] = 2;
  EXPECT_EQ(run({"suite", "--replay", write("ok.json", failure)}).code, cli::kTrue);
  failure["property"] = "no.such.property";
  EXPECT_EQ(run({"suite", "--replay", write("bad.json", failure)}).code, cli::kParse);
}

TEST_F(Cli, StdinDash) {
  // "-" is accepted as a path; with an empty stdin it is a parse error.
  std::istringstream empty;
  auto* old = std::cin.rdbuf(empty.rdbuf());
  const Result r = run({"analyze", "-"});
  std::cin.rdbuf(old);
  EXPECT_EQ(r.code, cli::kParse);
}

}  // namespace
