// Copyright 2026 The MRF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrf_cli/cli.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace mrf::cli {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result RunMrf(std::vector<std::string> args) {
  args.insert(args.begin(), "mrf");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = ::testing::TempDir();
    data_ = dir_ + "/cli_data.csv";
    std::ofstream out(data_);
    out << "a,b,label\n";
    for (int i = 0; i < 60; ++i) {
      out << (i % 7) << ',' << (i * 0.37 - 3) << ',' << (i % 7 < 3 ? "low" : "high") << "\n";
    }
    micro_ = dir_ + "/cli_micro.csv";
    std::ofstream micro(micro_);
    micro << "x,y\n0,a\n1,b\n2,a\n3,b\n";
  }

  std::string dir_;
  std::string data_;
  std::string micro_;
};

TEST_F(CliTest, BudgetJson) {
  const Result r = RunMrf({"budget", "--epsilon", "2", "--trees", "1", "--depth", "1"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("\"b1\": 1,"));
  EXPECT_THAT(r.out, HasSubstr("\"composed\": 2}"));
}

TEST_F(CliTest, BudgetFromEstimationSizeCsv) {
  const Result r = RunMrf({"budget", "--epsilon", "1", "--trees", "1", "--estimation-size", "50",
                        "--min-leaf", "5", "--format", "csv"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "epsilon,num_trees,depth,b1,b2,b3,composed\n1,1,10,0.05,0.05,1,1\n");
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(RunMrf({}).code, kExitConfig);
  EXPECT_EQ(RunMrf({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(RunMrf({"train", "--data", data_, "--b3", "hot"}).code, kExitConfig);
  EXPECT_EQ(RunMrf({"train", "--data", data_, "--criterion", "mse"}).code, kExitConfig);
  EXPECT_EQ(RunMrf({"train", "--data", data_, "--trees", "0"}).code, kExitConfig);
  EXPECT_EQ(RunMrf({"budget", "--epsilon", "-1", "--depth", "2"}).code, kExitConfig);
  EXPECT_EQ(RunMrf({"cv", "--data", data_, "--format", "xml"}).code, kExitConfig);
}

TEST_F(CliTest, DataErrorsExitThree) {
  EXPECT_EQ(RunMrf({"train", "--data", dir_ + "/missing.csv"}).code, kExitData);
  const std::string bad = dir_ + "/cli_bad.csv";
  std::ofstream(bad) << "x,y\n1,a\nNaN,b\n";
  const Result r = RunMrf({"train", "--data", bad});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_THAT(r.err, HasSubstr("ParseError"));
}

TEST_F(CliTest, HelpExitsZero) {
  const Result r = RunMrf({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_THAT(r.out, HasSubstr("tree-dist"));
}

TEST_F(CliTest, TrainPredictTreeDist) {
  const std::string model = dir_ + "/cli_model.json";
  Result r = RunMrf({"train", "--data", data_, "--trees", "7", "--b3", "inf", "--seed", "3",
                  "--out", model});
  ASSERT_EQ(r.code, kExitOk) << r.err;

  r = RunMrf({"predict", "--model", model, "--data", data_});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, StartsWith("row,label\n0,"));
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 61);

  r = RunMrf({"tree-dist", "--model", model, "--data", data_, "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, StartsWith("tree,accuracy\n0,"));
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 8);

  EXPECT_EQ(RunMrf({"predict", "--model", micro_, "--data", data_}).code, kExitData);
}

TEST_F(CliTest, TrainIsDeterministic) {
  const Result a = RunMrf({"train", "--data", data_, "--trees", "3", "--seed", "5"});
  const Result b = RunMrf({"train", "--data", data_, "--trees", "3", "--seed", "5"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  const Result rf = RunMrf({"train", "--data", data_, "--method", "breiman", "--trees", "2"});
  EXPECT_EQ(rf.code, kExitOk);
  EXPECT_THAT(rf.out, HasSubstr("\"variant\":\"breiman\""));
}

TEST_F(CliTest, CvWithComparison) {
  const Result r = RunMrf({"cv", "--data", data_, "--trees", "5", "--folds", "3", "--repeats",
                        "3", "--format", "csv", "--compare", "completely_random"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, StartsWith("dataset,method,repeat,fold,test_size,accuracy,seconds\n"
                                "cli_data,mrf,0,0,20,"));
  EXPECT_THAT(r.err, HasSubstr("completely_random mean"));
}

TEST_F(CliTest, CvRanksFromSidecar) {
  const std::string sidecar = dir_ + "/cli_ranks.csv";
  std::ofstream(sidecar) << "dataset,method,accuracy\ncli_data,other,2.0\n";
  const Result r = RunMrf({"cv", "--data", data_, "--trees", "3", "--folds", "2", "--repeats",
                        "1", "--ranks-sidecar", sidecar});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.err, HasSubstr("average rank mrf 2"));
  EXPECT_THAT(r.err, HasSubstr("average rank other 1"));
}

TEST_F(CliTest, SweepCsv) {
  const Result r = RunMrf({"sweep", "--data", data_, "--trees", "3", "--folds", "2",
                        "--repeats", "1", "--b1-grid", "0,10", "--b2-grid", "0:10:5",
                        "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, StartsWith("B1,B2,mean_acc,std\n0,0,"));
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 7);
  EXPECT_EQ(RunMrf({"sweep", "--data", data_, "--b1-grid", "5:0:1"}).code, kExitConfig);
}

TEST_F(CliTest, AuditPasses) {
  const Result r = RunMrf({"audit", "--data", micro_, "--b1", "1", "--b2", "0.5", "--b3", "5",
                        "--format", "csv"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("split_feature,1,"));
  EXPECT_THAT(r.out, HasSubstr("split_value,0.5,"));
  EXPECT_THAT(r.out, HasSubstr("leaf_label,5,"));
  EXPECT_EQ(r.out.find("false"), std::string::npos);
}

TEST_F(CliTest, WritesToFile) {
  const std::string path = dir_ + "/cli_budget.json";
  ASSERT_EQ(RunMrf({"budget", "--epsilon", "1", "--depth", "2", "--out", path}).code, kExitOk);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_THAT(line, StartsWith("{\"epsilon\": 1"));
  EXPECT_EQ(RunMrf({"budget", "--epsilon", "1", "--depth", "2", "--out", "/nonexistent/x"}).code,
            kExitData);
}

}  // namespace
}  // namespace mrf::cli
