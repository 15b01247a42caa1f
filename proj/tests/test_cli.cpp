#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bhc_cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "bhc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bhc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

fs::path temp_file(const std::string& name, const std::string& content = {}) {
  const auto dir = fs::temp_directory_path() / "bhc_cli_test";
  fs::create_directories(dir);
  const auto path = dir / name;
  if (!content.empty()) std::ofstream(path) << content;
  return path;
}

const char* kWitness =
    R"({"m":2,"n":2,"terms":[{"alpha":[2,0],"re":1,"im":0},{"alpha":[0,2],"re":-1,"im":0},)"
    R"({"alpha":[1,1],"re":2.8284271247461903,"im":0}]})";

}  // namespace

TEST(CliBounds, Csv) {
  const auto r = run({"bounds", "--from", "2", "--to", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  EXPECT_EQ(l[0], "m,lower,upper,multilinear_lower,optimal_x");
  EXPECT_EQ(l[1].substr(0, 13), "2,1.10668192,");
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(CliBounds, Json) {
  const auto r = run({"bounds", "--from", "2", "--to", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_NEAR(j[0]["lower"].get<double>(), 1.1066819, 1e-7);
  EXPECT_EQ(j[0]["upper"].get<double>(), 3.0);
}

TEST(CliBounds, BadRange) {
  EXPECT_EQ(run({"bounds", "--from", "5", "--to", "2"}).code, 2);
  EXPECT_EQ(run({"bounds", "--from", "1", "--to", "2"}).code, 2);
  EXPECT_EQ(run({"bounds", "--format", "xml"}).code, 2);
}

TEST(CliRatio, WitnessFile) {
  const auto path = temp_file("witness.json", kWitness);
  const auto r = run({"ratio", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["estimate"].get<double>(), 1.1066819, 1e-7);
  EXPECT_LE(j["certified"].get<double>(), j["estimate"].get<double>());
  EXPECT_EQ(j["grid"].get<int>(), 64);
}

TEST(CliRatio, CertifiedRatioTightensWithGrid) {
  const auto path = temp_file("witness.json", kWitness);
  const auto coarse = nlohmann::json::parse(run({"ratio", path.string(), "--grid", "8"}).out);
  const auto fine = nlohmann::json::parse(run({"ratio", path.string(), "--grid", "128"}).out);
  EXPECT_LE(coarse["certified"].get<double>(), fine["certified"].get<double>());
}

TEST(CliRatio, InputErrors) {
  const auto bad = temp_file("bad.json", R"({"m":2,"n":2,"terms":[{"alpha":[2,1],"re":1,"im":0}]})");
  const auto r = run({"ratio", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("[2,1]"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());

  const auto zero = temp_file("zero.json", R"({"m":2,"n":2,"terms":[{"alpha":[2,0],"re":0,"im":0}]})");
  EXPECT_EQ(run({"ratio", zero.string()}).code, 2);
  EXPECT_EQ(run({"ratio", (fs::temp_directory_path() / "does-not-exist.json").string()}).code, 2);
  const auto garbage = temp_file("garbage.json", "{not json");
  EXPECT_EQ(run({"ratio", garbage.string()}).code, 2);
  EXPECT_EQ(run({"ratio"}).code, 2);
}

TEST(CliVerifyFamily, PassesToFive) {
  const auto r = run({"verify-family", "--to", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 5u);
  for (std::size_t i = 1; i < l.size(); ++i) EXPECT_NE(l[i].find(",PASS,"), std::string::npos) << l[i];
}

TEST(CliVerifyFamily, RangeBelowDomain) { EXPECT_EQ(run({"verify-family", "--to", "1"}).code, 2); }

TEST(CliVerifyFamily, CoarseGridReportsStatus) {
  const auto r = run({"verify-family", "--to", "4", "--grid", "4"});
  EXPECT_TRUE(r.code == 0 || r.code == 1);
  if (r.code == 1) {
    EXPECT_NE(r.err.find("grid"), std::string::npos);
  }
}

TEST(CliFmCurve, MaxRowAtOptimum) {
  const auto r = run({"fm-curve", "--m", "2", "--points", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  EXPECT_EQ(l[0], "x,f,is_optimum");
  double best_f = -1, best_x = 0;
  int flagged = 0;
  for (std::size_t i = 1; i < l.size(); ++i) {
    double x, f;
    int flag;
    char c1, c2;
    std::istringstream(l[i]) >> x >> c1 >> f >> c2 >> flag;
    if (f > best_f) best_f = f, best_x = x;
    flagged += flag;
  }
  EXPECT_EQ(l.size(), 102u);
  EXPECT_EQ(flagged, 1);
  EXPECT_NEAR(best_x, 2.8284, 1e-4);

  const auto m3 = run({"fm-curve", "--m", "3"});
  double best3 = 0;
  for (const auto& line : lines(m3.out))
    if (line.size() > 2 && line.substr(line.size() - 2) == ",1") best3 = std::stod(line.substr(line.find(',') + 1));
  EXPECT_NEAR(best3, 1.0378908, 1e-7);
}

TEST(CliFmCurve, SinglePointAndBadRanges) {
  const auto r = run({"fm-curve", "--m", "2", "--xmin", "5", "--xmax", "5", "--points", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 2u);
  EXPECT_EQ(run({"fm-curve", "--m", "2", "--xmin", "5", "--xmax", "1"}).code, 2);
  EXPECT_EQ(run({"fm-curve", "--m", "2", "--xmin", "0"}).code, 2);
  EXPECT_EQ(run({"fm-curve", "--m", "1"}).code, 2);
  EXPECT_EQ(run({"fm-curve", "--m", "2", "--points", "0"}).code, 2);
}

TEST(CliSearch, WritesDeterministicCertificate) {
  const auto a = temp_file("cert_a.json"), b = temp_file("cert_b.json");
  const auto ra = run({"search", "--m", "2", "--n", "2", "--seed", "1", "--out", a.string()});
  ASSERT_EQ(ra.code, 0) << ra.err;
  const auto summary = nlohmann::json::parse(ra.out);
  EXPECT_GE(summary["estimate"].get<double>(), 1.1066);
  const auto rb = run({"search", "--m", "2", "--n", "2", "--seed", "1", "--threads", "3", "--out", b.string()});
  ASSERT_EQ(rb.code, 0) << rb.err;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(a), slurp(b));
  const auto cert = nlohmann::json::parse(slurp(a));
  EXPECT_EQ(cert["schema"], "bh-cert-1");
  EXPECT_EQ(cert["seed"].get<int>(), 1);
}

TEST(CliSearch, InvalidConfig) {
  EXPECT_EQ(run({"search", "--m", "2", "--n", "2", "--restarts", "0"}).code, 2);
  EXPECT_EQ(run({"search", "--m", "2"}).code, 2);
  EXPECT_EQ(run({"search", "--m", "2", "--n", "2", "--budget", "0"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"bounds", "--bogus"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}
