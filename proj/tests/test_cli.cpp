#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <oscillate/cli.hpp>

#include "support.hpp"

using namespace oscillate;
using fx::gq;

namespace {

const std::string kSamples = OSCILLATE_SAMPLES;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "oscillate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return testing::TempDir() + "oscillate_" + name; }

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string diag5 = kSamples + "/euler_diag_5.json";
const std::string rotation = kSamples + "/euler_rotation.json";

}  // namespace

TEST(Cli, GaussianTokens) {
  EXPECT_EQ(cli::parse_gaussian_token("1+2i"), gq(1, 2));
  EXPECT_EQ(cli::parse_gaussian_token("2i"), gq(0, 2));
  EXPECT_EQ(cli::parse_gaussian_token("-i"), gq(0, -1));
  EXPECT_EQ(cli::parse_gaussian_token("1/2-3/4i"), fx::gs("1/2", "-3/4"));
  EXPECT_THROW(cli::parse_gaussian_token("x"), Error);
}

TEST(Cli, Combination) {
  EXPECT_EQ(cli::parse_combination("1,-1", 2), (std::vector<GaussianRational>{gq(1), gq(-1)}));
  EXPECT_EQ(cli::parse_combination("", 3), (std::vector<GaussianRational>{gq(1), gq(0), gq(0)}));
  EXPECT_THROW(cli::parse_combination("1,2,3", 2), Error);
}

TEST(Cli, ValidateSample) {
  auto r = run({"validate", "-i", diag5});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("schema"), "oscillate/1");
}

TEST(Cli, BoundAndVerify) {
  auto cert = tmp("diag5_cert.json");
  auto b = run({"bound", "-i", diag5, "-c", "1,-1", "-o", cert});
  ASSERT_EQ(b.code, 0) << b.err;
  auto cj = Json::parse(slurp(cert));
  EXPECT_GE(parse_rational(cj.at("total").get<std::string>()), 5);
  // the combination flag lands in the certificate
  EXPECT_EQ(io::parse_combination(cj.at("combination"), "combination"),
            (std::vector<GaussianRational>{gq(1), gq(-1)}));
  auto v = run({"verify", "--certificate", cert, "-i", diag5});
  EXPECT_EQ(v.code, 0) << v.err;
  auto rj = Json::parse(v.out);
  EXPECT_TRUE(rj.at("all_dominated").get<bool>());
  auto rep = run({"report", "--certificate", cert});
  EXPECT_EQ(rep.code, 0) << rep.err;
  EXPECT_FALSE(rep.out.empty());
}

TEST(Cli, RotationExitsTwo) {
  auto r = run({"bound", "-i", rotation});
  EXPECT_EQ(r.code, 2);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("error"), "SpectralClassViolation");
  EXPECT_EQ(j.at("residue"), 0);
  ASSERT_EQ(j.at("eigenvalues").size(), 2u);
  for (const auto& e : j.at("eigenvalues")) {
    EXPECT_EQ(e.at("center").at("re"), "0");
    std::string im = e.at("center").at("im");
    EXPECT_TRUE(im == "1" || im == "-1") << im;
  }
}

TEST(Cli, MalformedInput) {
  auto bad = tmp("bad.json");
  write(bad, "{\"schema\": \"oscillate/1\", \"rank\": ");
  auto r = run({"bound", "-i", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;
  EXPECT_EQ(run({"verify", "--certificate", tmp("missing.json")}).code, 1);
  EXPECT_EQ(run({"bound"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"bound", "-i", diag5, "--tol", "0"}).code, 1);
}

TEST(Cli, CrippledConstantExitsThree) {
  auto cert = tmp("diag5_weak.json");
  auto b = run({"bound", "-i", diag5, "-c", "1,-1", "--constants", "{\"c_vp\": \"1/1000000\"}", "-o", cert});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(run({"verify", "--certificate", cert}).code, 3);
}

TEST(Cli, CountAnnulus) {
  auto r = run({"count", "-i", diag5, "-c", "1,-1", "--inner", "1/2", "--outer", "2", "--seeds", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("max_count"), 5);
}

TEST(Cli, Deterministic) {
  auto a = run({"bound", "-i", diag5, "-c", "1,-1"});
  auto b = run({"bound", "-i", diag5, "-c", "1,-1"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto ra = run({"reduce", "-i", diag5, "-c", "1,-1"}), rb = run({"reduce", "-i", diag5, "-c", "1,-1"});
  EXPECT_EQ(ra.out, rb.out);
}

TEST(Cli, BinaryExitCodes) {
  auto status = [](const std::string& args) {
    int s = std::system((std::string(OSCILLATE_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("validate -i " + diag5), 0);
  EXPECT_EQ(status("bound -i " + rotation), 2);
  EXPECT_EQ(status("bound -i " + tmp("missing.json")), 1);
}
