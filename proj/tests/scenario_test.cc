// Copyright 2026 The qoedist Authors. All Rights Reserved.
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

#include "qoedist/scenario.h"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "qoedist/error.h"
#include "qoedist/tabular.h"

namespace qoedist {

namespace {

namespace fs = std::filesystem;

const fs::path kData = QOEDIST_TEST_DATA_DIR;
const fs::path kScenarios = QOEDIST_SCENARIO_DIR;

std::string Slurp(const fs::path& p) { return ReadFileBytes(p); }

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("qoedist_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Kind and pointer of the error raised by building `json`.
std::pair<ErrorKind, std::string> BuildError(const std::string& json,
                                             const RunOptions& options = {}) {
  try {
    Scenario::FromJson(json, kData, options);
  } catch (const Error& e) {
    return {e.kind(), e.pointer()};
  }
  ADD_FAILURE() << "scenario accepted: " << json;
  return {ErrorKind::kDomain, ""};
}

constexpr char kWeb[] = R"({
  "rating_model": {"binomial": {"beta": 0.25}},
  "mapping": {"iqx": {"n": 4, "beta": 0.25}},
  "qos": {"lognormal": {"mean": 4, "std": 4}}
})";

constexpr char kVideo[] = R"({
  "rating_model": {"beta_approx": {"theta": 0.3,
                   "mapping": {"video_stall": {"d": 60}}}},
  "qos": {"histogram": {"file": "stalls.csv"}},
  "output": {"mode": "both", "quantiles": [0.5]}
})";

TEST(Scenario, WebFundamentalRelationship) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario s = Scenario::FromJson(kWeb, kData);
  const ScenarioReport r = s.Evaluate();
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  ASSERT_TRUE(r.expected_mos.has_value());
  EXPECT_LE(*r.fundamental_gap, 1e-6);
  EXPECT_NEAR(r.expected_mos->value, 2.9002310465994942, 1e-9);
  EXPECT_LT(seconds, 1.0);
  EXPECT_FALSE(r.continuous_metrics.has_value());
  EXPECT_EQ(s.rating_model()->Name(), "binomial");
}

TEST(Scenario, BinomialImpliesIqxMapping) {
  const Scenario s = Scenario::FromJson(
      R"({"rating_model": {"binomial": {"beta": 0.5}},
          "qos": {"lognormal": {"mu": 1.0, "sigma": 0.5}}})",
      kData);
  ASSERT_TRUE(s.mapping());
  EXPECT_EQ(s.mapping()->Name(), "iqx");
  EXPECT_LE(*s.Evaluate().fundamental_gap, 1e-6);
  EXPECT_NE(s.provenance_json().find("implied_by"), std::string::npos);
}

TEST(Scenario, VideoMatchesEnumeration) {
  const Scenario s = Scenario::FromJson(kVideo, kData);
  const ScenarioReport r = s.Evaluate();
  const BetaRatingModel beta(RatingScale::FivePoint(), SosParameter(0.3));
  const VideoStallMapping f(60.0);
  std::vector<double> brute(5, 0.0);
  const std::vector<std::pair<double, double>> atoms = {
      {f(0, 0.0), 0.5}, {f(1, 2.0), 0.3}, {f(4, 10.0), 0.2}};
  for (const auto& [mos, p] : atoms) {
    const std::vector<double> c = beta.LevelPmf(mos);
    for (int i = 0; i < 5; ++i) brute[i] += p * c[i];
  }
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(r.mix.distribution.pmf()[i], brute[i], 1e-12);
  }
  ASSERT_TRUE(r.continuous_metrics.has_value());
  EXPECT_EQ(r.continuous_metrics->quantiles.size(), 1u);
  EXPECT_NEAR(r.expected_mos->value, 4.2979630446495386, 1e-14);
}

TEST(Scenario, SchemaErrors) {
  using P = std::pair<ErrorKind, std::string>;
  EXPECT_EQ(BuildError(R"({"rating_model": {"beta_approx": {}},
                           "mapping": {"video_stall": {"d": 60}},
                           "qos": {"histogram": {"file": "stalls.csv"}}})"),
            P(ErrorKind::kSchema, "/rating_model/beta_approx/theta"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"beta_approx": {"theta": 0.3}},
                           "qos": {"histogram": {"file": "stalls.csv"}}})"),
            P(ErrorKind::kSchema, "/mapping"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"binomial": {"beta": 0.25}},
                           "qos": {"lognormal": {"mean": 4, "std": 4}},
                           "colour": 1})"),
            P(ErrorKind::kSchema, "/colour"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"binomial": {"beta": 0.25},
                                            "empirical": {"file": "x"}},
                           "qos": {"lognormal": {"mean": 4, "std": 4}}})"),
            P(ErrorKind::kSchema, "/rating_model"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"binomial": {"beta": 0.25}},
                           "qos": {"histogram": {"file": "stalls.csv"}}})"),
            P(ErrorKind::kSchema, "/qos"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"empirical": {"file": "ratings.csv"}},
                           "qos": {"lognormal": {"mean": 4, "std": 4}}})"),
            P(ErrorKind::kSchema, "/qos"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"beta_approx": {"theta": 1.5}},
                           "mapping": {"iqx": {"beta": 0.25}},
                           "qos": {"lognormal": {"mean": 4, "std": 4}}})"),
            P(ErrorKind::kSchema, "/rating_model/beta_approx/theta"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"binomial": {"beta": "x"}},
                           "qos": {"lognormal": {"mean": 4, "std": 4}}})"),
            P(ErrorKind::kSchema, "/rating_model/binomial/beta"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"binomial": {"beta": 0.25}},
                           "qos": {"lognormal": {"mean": 4, "sigma": 4}}})"),
            P(ErrorKind::kSchema, "/qos/lognormal"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"binomial": {"beta": 0.25}},
                           "qos": {"lognormal": {"mean": 4, "std": 4}},
                           "output": {"mode": "fancy"}})"),
            P(ErrorKind::kSchema, "/output/mode"));
  EXPECT_EQ(BuildError(R"({"rating_model": {"binomial": {"beta": 0.25}},
                           "qos": {"lognormal": {"mean": 4, "std": 4}},
                           "scale": {"low": 1, "high": 5, "gob": 2, "pow": 4}})"),
            P(ErrorKind::kSchema, "/scale"));
  EXPECT_EQ(BuildError("{not json").first, ErrorKind::kSchema);
}

TEST(Scenario, DataErrors) {
  EXPECT_EQ(BuildError(R"({"rating_model": {"beta_approx": {"theta": 0.3}},
                           "mapping": {"video_stall": {"d": 60}},
                           "qos": {"histogram": {"file": "nope.csv"}}})")
                .first,
            ErrorKind::kData);
  const std::string short_mass = R"({"rating_model": {"beta_approx": {"theta": 0.3}},
      "mapping": {"video_stall": {"d": 60}},
      "qos": {"histogram": {"file": "stalls_short.csv"}}})";
  EXPECT_EQ(BuildError(short_mass).first, ErrorKind::kData);
  RunOptions normalize;
  normalize.normalize = true;
  const ScenarioReport r = Scenario::FromJson(short_mass, kData, normalize).Evaluate();
  double total = 0.0;
  for (double p : r.mix.distribution.pmf()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Scenario, EvaluationFailureIsNumerical) {
  // The table mapping does not extend past 1000 s.
  const Scenario s = Scenario::FromJson(
      R"({"rating_model": {"beta_approx": {"theta": 0.2}},
          "mapping": {"table": {"file": "mapping.csv"}},
          "qos": {"lognormal": {"mean": 400, "std": 800}}})",
      kData);
  try {
    s.Evaluate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumerical);
  }
}

TEST(Scenario, SampleSource) {
  const ScenarioReport samples =
      Scenario::FromJson(
          R"({"rating_model": {"beta_approx": {"theta": 0.3}},
              "mapping": {"video_stall": {"d": 60}},
              "qos": {"samples": {"file": "stalls_samples.csv",
                                  "bin_widths": [1, 1]}}})",
          kData)
          .Evaluate();
  EXPECT_EQ(samples.mix.diagnostics.terms, 3u);
}

TEST(Scenario, EmpiricalAndPdfTable) {
  const fs::path dir = TempDir("emp");
  fs::copy_file(kData / "ratings.csv", dir / "ratings.csv");
  {
    std::ofstream out(dir / "waits.csv");
    out << "waiting_seconds,probability\n0,0.25\n2,0.5\n8,0.25\n";
  }
  const ScenarioReport r =
      Scenario::FromJson(
          R"({"rating_model": {"empirical": {"file": "ratings.csv"}},
              "qos": {"histogram": {"file": "waits.csv"}}})",
          dir)
          .Evaluate();
  // 0.25 * [0,0,0,1/3,2/3] + 0.5 * [0,0,1/3,2/3,0] + 0.25 * [1/2,1/2,0,0,0].
  const std::vector<double> expected = {0.125, 0.125, 1.0 / 6.0,
                                        0.25 / 3.0 + 1.0 / 3.0, 0.5 / 3.0};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(r.mix.distribution.pmf()[i], expected[i], 1e-15);
  }
  EXPECT_FALSE(r.expected_mos.has_value());

  const ScenarioReport t =
      Scenario::FromJson(
          R"({"rating_model": {"beta_approx": {"theta": 0.2}},
              "mapping": {"table": {"file": "mapping.csv"}},
              "qos": {"pdf_table": {"file": "pdf.csv"}}})",
          kData)
          .Evaluate();
  // Uniform waiting time on [0, 10] through the piecewise-linear table.
  EXPECT_NEAR(t.expected_mos->value, (9.0 + 16.5 + 3.0 - 1.0 / 992.0) / 10.0, 1e-9);
  // The Beta discretization shifts the mean slightly.
  EXPECT_LT(*t.fundamental_gap, 0.05);
}

TEST(Scenario, OutputsAreDeterministic) {
  const fs::path a = TempDir("det_a");
  const fs::path b = TempDir("det_b");
  const fs::path config = kScenarios / "web_beta.json";
  const auto files_a = RunScenario(config, a);
  const auto files_b = RunScenario(config, b);
  ASSERT_EQ(files_a.size(), 3u);
  for (std::size_t i = 0; i < files_a.size(); ++i) {
    EXPECT_EQ(Slurp(files_a[i]), Slurp(files_b[i])) << files_a[i];
  }
  const Scenario s = Scenario::FromFile(config);
  for (const fs::path& p : files_a) {
    const std::string text = Slurp(p);
    EXPECT_NE(text.find(s.config_hash()), std::string::npos) << p;
    EXPECT_NE(text.find(kToolVersion), std::string::npos) << p;
  }
  const NumericTable pmf = ReadTable(a / "qoe_pmf.csv");
  double total = 0.0;
  for (const auto& row : pmf.rows) total += row[1];
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_EQ(pmf.rows.back()[2], 1.0);
  const NumericTable cdf = ReadTable(a / "qoe_cdf.csv");
  EXPECT_EQ(cdf.rows.size(), 81u);
  EXPECT_EQ(cdf.rows.back()[1], 1.0);
}

TEST(Scenario, DiscreteModeSkipsCdfTable) {
  const fs::path dir = TempDir("discrete");
  RunOptions options;
  options.mode = OutputMode::kDiscrete;
  const auto files = RunScenario(kScenarios / "web_beta.json", dir, options);
  EXPECT_EQ(files.size(), 2u);
  EXPECT_FALSE(fs::exists(dir / "qoe_cdf.csv"));
}

TEST(Sweep, ParseValues) {
  EXPECT_EQ(ParseSweepValues("2,4,8"), (std::vector<double>{2, 4, 8}));
  EXPECT_EQ(ParseSweepValues("1:3"), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(ParseSweepValues("0.1:0.3:0.1"), (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(ParseSweepValues(" 5 "), (std::vector<double>{5}));
  EXPECT_THROW(ParseSweepValues("1,,2"), Error);
  EXPECT_THROW(ParseSweepValues("3:1"), Error);
  EXPECT_THROW(ParseSweepValues("1:2:0"), Error);
  EXPECT_THROW(ParseSweepValues("a"), Error);
}

TEST(Sweep, WebStd) {
  const auto rows =
      EvaluateSweep(kScenarios / "web.json", "qos.std", {2.0, 4.0, 8.0});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].report.discrete_metrics.gob,
              rows[i - 1].report.discrete_metrics.gob);
  }
  const fs::path dir = TempDir("sweep");
  const fs::path csv =
      RunSweep(kScenarios / "web.json", "/qos/lognormal/std", {2.0, 4.0, 8.0}, dir);
  const NumericTable t = ReadTable(csv);
  EXPECT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.header[1], "cdf_1");
  EXPECT_EQ(t.rows[2][0], 8.0);
}

TEST(Sweep, SingletonMatchesRun) {
  const fs::path config = kScenarios / "web.json";
  const auto rows = EvaluateSweep(config, "qos.lognormal.std", {4.0});
  const ScenarioReport run = Scenario::FromFile(config).Evaluate();
  ASSERT_EQ(rows.size(), 1u);
  const auto a = rows[0].report.mix.distribution.pmf();
  const auto b = run.mix.distribution.pmf();
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_EQ(rows[0].report.discrete_metrics.gob, run.discrete_metrics.gob);
}

TEST(Sweep, ThetaPairsForVideo) {
  const auto rows =
      EvaluateSweep(kScenarios / "video.json", "rating_model.theta", {0.1, 0.3});
  ASSERT_EQ(rows.size(), 2u);
  // Less diversity concentrates ratings near the MOS, so fewer poor ratings.
  EXPECT_LT(rows[0].report.discrete_metrics.pow, rows[1].report.discrete_metrics.pow);
}

TEST(Sweep, InvalidPath) {
  for (const char* path : {"qos.foo", "rating_model", "/qos/lognormal/mean/x", "",
                           "output.mode"}) {
    try {
      EvaluateSweep(kScenarios / "web.json", path, {1.0});
      ADD_FAILURE() << path;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kSchema) << path;
    }
  }
}

int RunCli(const std::string& args, const fs::path& stderr_file) {
  const std::string command = std::string(QOEDIST_CLI) + " " + args + " > /dev/null 2> " +
                              stderr_file.string();
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodesAndErrorRecords) {
  const fs::path dir = TempDir("cli");
  const fs::path err = dir / "stderr.txt";
  const std::string web = (kScenarios / "web.json").string();
  EXPECT_EQ(RunCli("run " + web + " --output-dir " + (dir / "out").string(), err), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "metrics.json"));
  EXPECT_EQ(RunCli("validate " + web, err), 0);

  {
    std::ofstream out(dir / "missing_theta.json");
    out << R"({"rating_model": {"beta_approx": {}},
               "mapping": {"iqx": {"beta": 0.25}},
               "qos": {"lognormal": {"mean": 4, "std": 4}}})";
  }
  EXPECT_EQ(RunCli("run " + (dir / "missing_theta.json").string(), err), 2);
  const std::string record = Slurp(err);
  EXPECT_NE(record.find(R"("kind":"schema")"), std::string::npos) << record;
  EXPECT_NE(record.find(R"("pointer":"/rating_model/beta_approx/theta")"),
            std::string::npos)
      << record;

  {
    std::ofstream out(dir / "short.json");
    out << R"({"rating_model": {"beta_approx": {"theta": 0.3}},
               "mapping": {"video_stall": {"d": 60}},
               "qos": {"histogram": {"file": ")"
        << (kData / "stalls_short.csv").string() << R"("}}})";
  }
  const std::string short_cfg = (dir / "short.json").string();
  EXPECT_EQ(RunCli("run " + short_cfg + " --output-dir " + dir.string(), err), 3);
  EXPECT_NE(Slurp(err).find(R"("kind":"data")"), std::string::npos);
  EXPECT_EQ(RunCli("run " + short_cfg + " --normalize --output-dir " + dir.string(),
                   err),
            0);

  {
    std::ofstream out(dir / "bad_table.json");
    out << R"({"rating_model": {"beta_approx": {"theta": 0.2}},
               "mapping": {"table": {"file": ")"
        << (kData / "mapping.csv").string() << R"("}},
               "qos": {"lognormal": {"mean": 400, "std": 800}}})";
  }
  EXPECT_EQ(RunCli("run " + (dir / "bad_table.json").string() + " --output-dir " +
                       dir.string(),
                   err),
            4);
  EXPECT_EQ(RunCli("sweep " + web + " --param qos.nothing --values 1,2", err), 2);
  EXPECT_EQ(RunCli("run", err), 1);
}

TEST(Cli, SweepAndEnvironmentOutputDir) {
  const fs::path dir = TempDir("cli_env");
  const fs::path err = dir / "stderr.txt";
  const std::string web = (kScenarios / "web.json").string();
  const std::string env = "QOEDIST_OUTPUT_DIR=" + (dir / "env").string() + " ";
  const std::string command = env + QOEDIST_CLI + " sweep " + web +
                              " --param qos.std --values 2:8:2 --mode discrete "
                              "--tolerance 1e-10 > /dev/null 2> " +
                              err.string();
  ASSERT_EQ(std::system(command.c_str()), 0) << Slurp(err);
  const NumericTable t = ReadTable(dir / "env" / "sweep.csv");
  EXPECT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.header.size(), 1u + 5u + 4u + 1u);
}

}  // namespace

}  // namespace qoedist
