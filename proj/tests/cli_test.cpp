// Copyright 2026 The finegraph Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(FINEGRAPH_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string spec(const std::string& name) { return std::string(FINEGRAPH_SPECS) + "/" + name; }

TEST(CliTest, TreeIsHyperbolicWithDeltaZero) {
  auto r = run("analyze --graph " + spec("tree.json"));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\"delta\":\"0\""), std::string::npos);
  EXPECT_EQ(r.out.find("\"verdict\":\"fail\""), std::string::npos);
}

TEST(CliTest, HatDistanceAndAngleInS3) {
  auto r = run("hat-distance --group " + spec("s3.json") + " --from e --to c");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\"hat-distance\":\"3\""), std::string::npos);
  EXPECT_NE(r.out.find("\"angle\":\"4\""), std::string::npos);
}

TEST(CliTest, OutputIsByteIdenticalAcrossRuns) {
  const std::string args = "certify --lemma sandwich --random 8 --seed 11";
  auto a = run(args);
  auto b = run(args);
  EXPECT_EQ(a.status, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTest, LoopEdgeIsRejected) {
  std::string path = testing::TempDir() + "loop.json";
  std::ofstream(path) << R"({"vertices": ["x", "y"], "edges": [["x", "x"]]})";
  auto r = run("analyze --graph " + path);
  EXPECT_EQ(r.status, 3);
}

TEST(CliTest, MissingFileIsInvalidInput) {
  EXPECT_EQ(run("analyze --graph " + testing::TempDir() + "does-not-exist.json").status, 3);
}

TEST(CliTest, FreeGroupFinenessIsStable) {
  auto r = run("analyze --group " + spec("f2.json") + " --fineness --window 4");
  EXPECT_EQ(r.status, 0);
}

TEST(CliTest, FreeAbelianFinenessReportsGrowth) {
  auto r = run("analyze --group " + spec("z2.json") + " --fineness --window 4");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("growing"), std::string::npos);
}

TEST(CliTest, ConedOffQuasiIsometryOnFreeGroup) {
  auto r = run("certify --lemma qi53 --group " + spec("f2.json") + " --window 3");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\"verdict\":\"pass\""), std::string::npos);
}

TEST(CliTest, ThickenWritesGraph) {
  std::string path = testing::TempDir() + "thick.json";
  auto r = run("thicken --group " + spec("s3.json") + " --graph " + spec("s3_cosets.json") + " --graph-out " + path);
  EXPECT_EQ(r.status, 0);
  std::ifstream in(path);
  EXPECT_TRUE(in.good());
}

}  // namespace
