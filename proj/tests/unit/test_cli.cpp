#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

using stacktor::Json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  const std::string cmd = std::string(STACKTOR_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string corpus(const std::string& f) { return fixtures::corpus_path(f); }

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(::testing::TempDir()) + name;
  FILE* f = fopen(path.c_str(), "w");
  fputs(text.c_str(), f);
  fclose(f);
  return path;
}

}  // namespace

TEST(Cli, ValidateCorpus) {
  for (const char* f : {"p1.json", "p2.json", "p12.json", "p13.json", "p112.json", "gerbe_z2z4.json",
                        "p1_over_p1.json"}) {
    const auto r = run("validate " + corpus(f));
    EXPECT_EQ(r.code, 0) << f;
    EXPECT_TRUE(Json::parse(r.out)["valid"].get<bool>()) << f;
  }
}

TEST(Cli, MalformedInputExitsWithTwo) {
  const auto path = write_temp("broken.json", "{\"N\": ");
  const auto r = run("validate " + path);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Json::parse(r.out)["error"]["code"], "Schema");
  EXPECT_EQ(run("kring " + corpus("p1.json") + " --format yaml").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, RayMismatchExitsWithOne) {
  auto doc = Json::parse(fixtures::read_file(corpus("p1.json")));
  doc["rays_b"][1] = Json::array({2});
  const auto path = write_temp("mismatch.json", doc.dump());
  const auto r = run("validate " + path);
  EXPECT_EQ(r.code, 1);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["issues"][0]["code"], "RayMismatch");
  EXPECT_EQ(j["issues"][0]["index"], 2);
  EXPECT_EQ(run("kring " + path).code, 1);
}

TEST(Cli, ResourceLimitExitsWithThree) {
  EXPECT_EQ(run("kring " + corpus("p2.json") + " --max-pairs 1").code, 3);
}

TEST(Cli, OutputIsDeterministic) {
  for (const char* cmd : {"crring", "chern", "kring --strict-paper"}) {
    const std::string args = std::string(cmd) + " " + corpus("p13.json");
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << cmd;
    EXPECT_EQ(a.out, b.out) << cmd;
  }
}

TEST(Cli, GerbeOverProjectiveLine) {
  const auto r = run("kring " + corpus("gerbe_z2z4.json") + " --base Pn:1 --strict-paper");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["presentation"]["dimension"], 16);
  EXPECT_EQ(j["rank_over_base"], 8);
  EXPECT_TRUE(j["with_extra_data"]["map_to_minimal_bijective"].get<bool>());
  EXPECT_EQ(j["literal_ideal"]["dimension"], 16);
}

TEST(Cli, CrRingGerbeForm) {
  const auto r = run("crring " + corpus("gerbe_z2z4.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["total_dimension"], 8);
  EXPECT_TRUE(j["gerbe_form"]["map_from_global_bijective"].get<bool>());
  EXPECT_TRUE(j["product_check"]["ok"].get<bool>());
}

TEST(Cli, FieldOption) {
  EXPECT_EQ(run("spectrum " + corpus("p13.json") + " --field Q").code, 1);
  const auto r = run("spectrum " + corpus("p13.json") + " --field cyclotomic:6");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["field"], "Q(zeta6)");
  EXPECT_EQ(run("spectrum " + corpus("p13.json") + " --field cyclotomic:x").code, 2);
}

TEST(Cli, StdinAndTextFormat) {
  const auto r = run("box --format text < " + corpus("p12.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("count: 2"), std::string::npos);
}

TEST(Cli, BundleChern) {
  const auto r = run("chern " + corpus("p1_over_p1.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_TRUE(j["chern_character"]["bijective"].get<bool>());
  EXPECT_TRUE(j["ring_check"]["ok"].get<bool>());
}
