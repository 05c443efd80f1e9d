#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "colline/cli.hpp"

using namespace colline;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(COLLINE_SAMPLES) + "/" + name; }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "colline_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

Json run_json(std::vector<std::string> args) {
  Result r = run(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, ClassifyIdentity) {
  Json r = run_json({"classify", sample("identity.map"), "--probes", "500", "--seed", "7"});
  EXPECT_EQ(r["classification"]["verdict"], "ExactLinear");
  EXPECT_EQ(r["config"]["seed"], 7);
  EXPECT_EQ(r["config"]["probes"], 500);
  EXPECT_TRUE(r.contains("wall_time_ms"));
}

TEST(Cli, ClassifyLemma23Builtin) {
  Json r = run_json({"classify", "--builtin", "lemma23:m=2,n=2,e0=0,d0=(0,1)"});
  EXPECT_EQ(r["classification"]["verdict"], "NonLinear");
  std::size_t i = r["classification"]["failing"].get<std::size_t>();
  EXPECT_EQ(r["outcomes"][i]["check"], "additivity");
  EXPECT_FALSE(r["outcomes"][i]["witness"].is_null());
}

TEST(Cli, CheckRatioOnTranslation) {
  Json r = run_json({"check", "ratio", sample("translate.map")});
  ASSERT_EQ(r["outcomes"].size(), 1u);
  EXPECT_EQ(r["outcomes"][0]["check"], "ratio");
  EXPECT_EQ(r["outcomes"][0]["verdict"], "pass");
  EXPECT_TRUE(r["outcomes"][0]["witness"].is_null());
}

TEST(Cli, OutcomeJsonShape) {
  Json r = run_json({"check", "additivity", sample("cube.map"), "--probes", "50"});
  const Json& o = r["outcomes"][0];
  std::vector<std::string> keys;
  for (const auto& [k, v] : o.items()) keys.push_back(k);
  ASSERT_GE(keys.size(), 4u);
  EXPECT_EQ((std::vector<std::string>(keys.begin(), keys.begin() + 4)),
            (std::vector<std::string>{"check", "verdict", "probes", "witness"}));
  EXPECT_EQ(o["verdict"], "fail");
}

TEST(Cli, MultiMapFileGivesArray) {
  Json r = run_json({"classify", sample("several.map"), "--probes", "60"});
  ASSERT_TRUE(r.is_array());
  EXPECT_EQ(r.size(), 3u);
  EXPECT_EQ(r[1]["map"]["name"], "square");
  EXPECT_EQ(r[1]["classification"]["verdict"], "NonLinear");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"classify", sample("missing.map")}).code, 1);
  fs::path bad = scratch("bad.map");
  write(bad, "map bad : 2 -> 1 { y0 = x0 + }\n");
  Result r = run({"classify", bad.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":1:30:"), std::string::npos) << r.err;
  EXPECT_EQ(run({"check", "nosuch", sample("identity.map")}).code, 1);
  EXPECT_EQ(run({"classify", "--builtin", "lemma23:m=2,n=2,e0=0,d0=(0,0)"}).code, 1);
  EXPECT_EQ(run({"classify", "--builtin", "nosuch:n=2"}).code, 1);
  EXPECT_EQ(run({"classify", sample("identity.map"), "--probes", "0"}).code, 1);
  EXPECT_EQ(run({"classify"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  // Precondition of the certificate, not a verdict.
  EXPECT_EQ(run({"certify", "lemma32", sample("identity.map"), "--a", "(1,0)", "--b", "(0,1)"}).code, 1);
}

TEST(Cli, SeedEnvironmentOverridesDefaultOnly) {
  ::setenv("COLLINE_SEED", "5", 1);
  Json a = run_json({"check", "additivity", sample("cube.map"), "--probes", "20"});
  Json b = run_json({"check", "additivity", sample("cube.map"), "--probes", "20", "--seed", "3"});
  ::setenv("COLLINE_SEED", "x", 1);
  EXPECT_EQ(run({"check", "additivity", sample("cube.map")}).code, 1);
  ::unsetenv("COLLINE_SEED");
  Json c = run_json({"check", "additivity", sample("cube.map"), "--probes", "20"});
  EXPECT_EQ(a["config"]["seed"], 5);
  EXPECT_EQ(b["config"]["seed"], 3);
  EXPECT_EQ(c["config"]["seed"], 0);
}

TEST(Cli, Certify) {
  Json r = run_json({"certify", "additivity", sample("identity.map"), "--a", "(1,0)", "--b", "(2,0)"});
  ASSERT_EQ(r["certificates"].size(), 1u);
  EXPECT_EQ(r["certificates"][0]["kind"], "additivity-case2");
  EXPECT_EQ(r["certificates"][0]["lines"].size(), 7u);
  EXPECT_EQ(r["certificates"][0]["holds"], true);
  const Json& l0 = r["certificates"][0]["lines"][0];
  for (const char* key : {"name", "origin", "direction", "image_origin", "image_direction"}) EXPECT_TRUE(l0.contains(key));

  Json h = run_json({"certify", "homogeneity", sample("cube.map")});
  EXPECT_TRUE(h["certificates"].empty());
  EXPECT_NE(h["error"].get<std::string>().find("homogeneity certificate"), std::string::npos);
}

TEST(Cli, RevalidateAndRerun) {
  fs::path report = scratch("several.json");
  ASSERT_EQ(run({"classify", sample("several.map"), "--no-symbolic", "--probes", "80", "--out", report.string()}).code, 0);
  Result ok = run({"--revalidate", report.string()});
  EXPECT_EQ(ok.code, 0) << ok.err;
  Result same = run({"rerun", report.string()});
  EXPECT_EQ(same.code, 0) << same.out;

  Json doc = Json::parse(cli::read_file(report.string()));
  ASSERT_FALSE(doc[0]["certificates"].empty());
  Json tampered = doc;
  tampered[0]["certificates"][0]["points"][1]["fx"] = "(5, 5)";
  fs::path bad = scratch("tampered.json");
  write(bad, tampered.dump());
  EXPECT_EQ(run({"--revalidate", bad.string()}).code, 2);

  tampered = doc;
  std::size_t i = tampered[1]["classification"]["failing"].get<std::size_t>();
  tampered[1]["outcomes"][i]["witness"]["relation"] = "something else";
  write(bad, tampered.dump());
  EXPECT_EQ(run({"--revalidate", bad.string()}).code, 2);

  tampered = doc;
  tampered[1]["config"]["seed"] = 99;
  write(bad, tampered.dump());
  EXPECT_EQ(run({"rerun", bad.string()}).code, 2);

  tampered = doc;
  tampered[0]["wall_time_ms"] = 123456;
  write(bad, tampered.dump());
  EXPECT_EQ(run({"rerun", bad.string()}).code, 0);
}

TEST(Cli, RevalidateExactForm) {
  fs::path report = scratch("translate.json");
  ASSERT_EQ(run({"classify", sample("translate.map"), "--out", report.string()}).code, 0);
  EXPECT_EQ(run({"--revalidate", report.string()}).code, 0);
  Json doc = Json::parse(cli::read_file(report.string()));
  EXPECT_EQ(doc["classification"]["verdict"], "ExactAffine");
  doc["classification"]["verdict"] = "ExactLinear";
  fs::path bad = scratch("translate_bad.json");
  write(bad, doc.dump());
  EXPECT_EQ(run({"--revalidate", bad.string()}).code, 2);
}

TEST(Cli, TextFormat) {
  Result r = run({"classify", "--builtin", "lemma23:m=2,n=2,e0=0,d0=(0,1)", "--format", "text", "--probes", "50"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict: NonLinear"), std::string::npos);
  EXPECT_NE(r.out.find("additivity: fail"), std::string::npos);
}

TEST(Cli, Builtins) {
  fs::path m = scratch("a.matrix");
  write(m, "1 2\n3 4\n");
  Json r = run_json({"classify", "--builtin", "linear:" + m.string(), "--no-symbolic", "--probes", "60"});
  EXPECT_EQ(r["classification"]["verdict"], "EmpiricallyLinear");
  Json z = run_json({"zoo", "lemma23:m=2,n=2,e0=0,d0=(0,1),psi=x0*x0*x0"});
  EXPECT_EQ(z["basis_images"][0], "(0, 1)");
  Json id = run_json({"classify", "--builtin", "identity:n=3"});
  EXPECT_EQ(id["classification"]["verdict"], "ExactLinear");
  Json zero = run_json({"classify", "--builtin", "zero:m=2,n=3", "--no-symbolic", "--probes", "40"});
  EXPECT_EQ(zero["classification"]["verdict"], "EmpiricallyLinear");
}

TEST(Report, CertificatesRoundTripThroughJson) {
  MapHandle id = make_identity(2);
  std::pair<Vector, Vector> ind{Vector({1, 0}), Vector({0, 1})};
  MapHandle p = make_linear(Matrix{{1, 0, 0}, {0, 1, 0}});
  std::pair<Vector, Vector> ind3{Vector({1, 0, 0}), Vector({0, 1, 0})};
  std::vector<std::pair<Certificate, MapHandle>> certs = {
      {homogeneity_certificate(id, Vector({1, 0}), Vector({0, 1}), Scalar(3, 2)), id},
      {additivity_certificate(id, Vector({1, 0}), Vector({0, 1}), ind), id},
      {additivity_certificate(id, Vector({1, 0}), Vector({2, 0}), ind), id},
      {additivity_certificate(p, Vector({1, 0, 0}), Vector({1, 0, 1}), ind3), p},
      {lemma32_certificate(make_linear(Matrix{{0, 1}}), Vector({1, 0}), Vector({0, 1})), make_linear(Matrix{{0, 1}})},
  };
  for (const auto& [c, f] : certs) {
    Json j = to_json(c);
    Certificate back = certificate_from_json(Json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
    EXPECT_NO_THROW(validate_certificate(back, &f));
  }
}

TEST(Report, OutcomesRoundTripThroughJson) {
  MapHandle f = make_lemma23(2, 2, default_psi(), 0, Vector({0, 1}));
  ProbeConfig cfg;
  cfg.count = 50;
  for (const CheckOutcome& o : {check_additivity(f, cfg), check_line_image(f, cfg), check_ratio_preservation(f, cfg)}) {
    Json j = to_json(o);
    CheckOutcome back = outcome_from_json(Json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(back.witness, o.witness);
  }
  EXPECT_THROW(value_from_text("(1, x)"), Error);
}
