// Copyright 2026 The juntalab Authors
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

#include "juntalab/cli.h"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "juntalab/boolfour.h"
#include "juntalab/io.h"

namespace juntalab {
namespace {

namespace fs = std::filesystem;

const std::string kData = JUNTALAB_DATA_DIR;

int sh(const std::string& args) {
  const std::string cmd = std::string("\"") + JUNTALAB_CLI_PATH + "\" " + args +
                          " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path tmp(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "juntalab_cli_test";
  fs::create_directories(d);
  return d / name;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(sh("--help"), 0);
  EXPECT_EQ(sh(""), 2);
  EXPECT_EQ(sh("frobnicate"), 2);
  EXPECT_EQ(sh("analyze --fn " + kData + "/or2.json --bogus 1"), 2);
  EXPECT_EQ(sh("junta --fn " + kData + "/or2.json --mode sideways --eps 0.5"), 2);
  EXPECT_EQ(sh("junta --fn " + kData + "/or2.json --mode additive"), 2);
  EXPECT_EQ(sh("verify --suite nope"), 2);
  // Valid arguments, failing computation: AND is not submodular.
  fs::path and2 = tmp("and2.json");
  std::ofstream(and2) << R"({"family":"explicit_table","n":2,"params":{"table":[0,0,0,1]}})";
  EXPECT_EQ(sh("junta --fn " + and2.string() + " --mode additive --eps 0.5"), 1);
  fs::path broken = tmp("broken.json");
  std::ofstream(broken) << R"({"family":"linear","n":"two"})";
  EXPECT_EQ(sh("analyze --fn " + broken.string()), 1);
}

TEST(Cli, AnalyzeOr) {
  fs::path out = tmp("or2_analyze.json");
  ASSERT_EQ(sh("analyze --fn " + kData + "/or2.json --out " + out.string()), 0);
  json j = parse_json(read_file(out.string()));
  FourierTable t = fourier_from_json(j["fourier"]);
  EXPECT_EQ(t.coeffs, (std::vector<double>{0.75, -0.25, -0.25, -0.25}));
  EXPECT_TRUE(fs::exists(out.string() + ".run.json"));
}

TEST(Cli, JuntaOr) {
  fs::path out = tmp("m.json");
  ASSERT_EQ(sh("junta --fn " + kData + "/or2.json --mode additive --eps 0.8 --seed 7 --out " +
               out.string()),
            0);
  JuntaModel m = junta_model_from_json(parse_json(read_file(out.string())));
  for (int v : m.vars) EXPECT_TRUE(v == 0 || v == 1);
  EXPECT_LE(m.provenance["l2_error"].get<double>(), 0.4);
  json rec = parse_json(read_file(out.string() + ".run.json"));
  EXPECT_EQ(rec["command"], "junta");
  EXPECT_EQ(rec["config"]["seed"], 7);
  EXPECT_EQ(rec["config"]["eps"], 0.8);
  EXPECT_TRUE(rec.contains("timestamps"));
  EXPECT_TRUE(rec.contains("version"));
}

TEST(Cli, VerifyInequalities) {
  fs::path out = tmp("r.csv");
  ASSERT_EQ(sh("verify --suite inequalities --corpus builtin --dims 4 8 --out " + out.string()), 0);
  std::istringstream in(read_file(out.string()));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "check,instance,n,slack,violations,runtime_ms");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 6u);
    EXPECT_EQ(cols[4], "0") << line;
  }
  EXPECT_GT(rows, 0);
}

TEST(Cli, VerifyCorpusFile) {
  fs::path out = tmp("r2.csv");
  ASSERT_EQ(sh("verify --suite inequalities --corpus " + kData + "/coverage6.json --out " +
               out.string()),
            0);
  EXPECT_NE(read_file(out.string()).find(",f0,"), std::string::npos);
}

}  // namespace
}  // namespace juntalab
