#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "footfall/app/commands.hpp"
#include "support/streams.hpp"
#include "support/temp_dir.hpp"

namespace footfall::app {
namespace {

using testing::TempDir;

constexpr std::int64_t kNoon = 1561939200000 + 12 * 3600000;

service::Config config_for(const TempDir& dir) {
  service::Config c;
  c.data_dir = dir / "data";
  c.sync_writes = false;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "footfall");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(Replay, SummaryMatchesSimulatorTruth) {
  TempDir dir;
  std::istringstream in(testing::to_ndjson(testing::crossings(11, 100)));
  std::ostringstream out, err;
  EXPECT_EQ(cmd_replay(config_for(dir), in, out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("people_counted 100\ntraffic 50\nunpaired 0\n"), std::string::npos) << out.str();
}

TEST(Replay, EmptyInputGivesZeros) {
  TempDir dir;
  std::istringstream in("");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_replay(config_for(dir), in, out, err), kExitOk);
  EXPECT_EQ(out.str(), "frames 0\npeople_counted 0\ntraffic 0\nunpaired 0\n");
}

TEST(Replay, GarbageInputFailsWithLineNumber) {
  TempDir dir;
  const auto good = testing::to_ndjson(testing::crossings(1, 1));
  std::istringstream in(good.substr(0, good.find('\n') + 1) + "garbage\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_replay(config_for(dir), in, out, err), kExitBadInput);
  EXPECT_NE(err.str().find("line 2"), std::string::npos) << err.str();
}

TEST(Replay, DeterministicOutput) {
  const auto text = testing::to_ndjson(testing::crossings(5, 12));
  std::string first;
  for (int i = 0; i < 2; ++i) {
    TempDir dir;
    std::istringstream in(text);
    std::ostringstream out, err;
    cmd_replay(config_for(dir), in, out, err);
    if (i == 0) first = out.str();
    else EXPECT_EQ(out.str(), first);
  }
}

TEST(Simulate, SameSeedByteIdenticalFiles) {
  TempDir dir;
  std::ostringstream out, err;
  SimulateOptions a{7, 10, dir / "a.ndjson", {}};
  SimulateOptions b{7, 10, dir / "b.ndjson", {}};
  ASSERT_EQ(cmd_simulate(a, out, err), kExitOk);
  ASSERT_EQ(cmd_simulate(b, out, err), kExitOk);
  EXPECT_EQ(slurp(dir / "a.ndjson"), slurp(dir / "b.ndjson"));
  EXPECT_EQ(slurp(dir / "a.truth"), slurp(dir / "b.truth"));
}

TEST(Simulate, ZeroPeopleGivesEmptyFrames) {
  TempDir dir;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate({1, 0, dir / "z.ndjson", {}}, out, err), kExitOk);
  std::istringstream in(slurp(dir / "z.ndjson"));
  ingest::FrameReader reader(in);
  int frames = 0;
  while (auto f = reader.next()) {
    EXPECT_TRUE(f->detections.empty());
    ++frames;
  }
  EXPECT_GT(frames, 0);
}

TEST(Simulate, ReplayAgreesWithTruth) {
  TempDir dir;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate({9, 5, dir / "s.ndjson", {}}, out, err), kExitOk);
  const auto truth = simulate::parse_truth(slurp(dir / "s.truth"));
  std::ifstream in(dir / "s.ndjson");
  std::ostringstream summary;
  ASSERT_EQ(cmd_replay(config_for(dir), in, summary, err), kExitOk);
  EXPECT_NE(summary.str().find("people_counted " + std::to_string(truth.person_count) + "\n"), std::string::npos);
}

TEST(Transactions, StoresConversionForTrafficDay) {
  TempDir dir;
  std::istringstream in(testing::to_ndjson(testing::crossings(3, 100)));
  std::ostringstream out, err;
  ASSERT_EQ(cmd_replay(config_for(dir), in, out, err), kExitOk);
  std::ostringstream tx_out;
  EXPECT_EQ(cmd_transactions(config_for(dir), "2019-07-01", "10", tx_out, err, [] { return kNoon; }), kExitOk);
  EXPECT_NE(tx_out.str().find("conversion_rate=20.00"), std::string::npos) << tx_out.str();
  std::ostringstream csv;
  EXPECT_EQ(cmd_export(config_for(dir), std::nullopt, csv, err), kExitOk);
  EXPECT_EQ(csv.str(), "date,people_counted,traffic,unpaired,transactions,conversion_rate\n"
                       "2019-07-01,100,50,0,10,20.00\n");
}

TEST(Transactions, InvalidInputsExitTwoOrFour) {
  TempDir dir;
  std::ostringstream out, err;
  auto clock = [] { return kNoon; };
  EXPECT_EQ(cmd_transactions(config_for(dir), "2019-07-01", "-1", out, err, clock), kExitBadInput);
  EXPECT_EQ(cmd_transactions(config_for(dir), "2019-07-01", "ten", out, err, clock), kExitBadInput);
  EXPECT_EQ(cmd_transactions(config_for(dir), "July 1", "3", out, err, clock), kExitBadInput);
  EXPECT_EQ(cmd_transactions(config_for(dir), "2019-05-01", "3", out, err, clock), kExitUnknownDate);
}

TEST(Export, EmptyStoreWritesHeaderOnlyFile) {
  TempDir dir;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_export(config_for(dir), dir / "out.csv", out, err), kExitOk);
  EXPECT_EQ(slurp(dir / "out.csv"), "date,people_counted,traffic,unpaired,transactions,conversion_rate\n");
  EXPECT_EQ(cmd_export(config_for(dir), dir / "no" / "such" / "dir.csv", out, err), kExitStorage);
}

TEST(RunCli, FlagsReachCommands) {
  TempDir dir;
  const auto stream = (dir / "d.ndjson").string();
  const auto data = (dir / "data").string();
  EXPECT_EQ(cli({"simulate", "--seed", "2", "--people", "4", "--out", stream}).code, kExitOk);
  const auto replay = cli({"replay", "--input", stream, "--data-dir", data});
  EXPECT_EQ(replay.code, kExitOk) << replay.err;
  EXPECT_NE(replay.out.find("people_counted 4\n"), std::string::npos);
  const auto exp = cli({"export", "--data-dir", data});
  EXPECT_EQ(exp.out, "date,people_counted,traffic,unpaired,transactions,conversion_rate\n2019-07-01,4,2,0,,\n");
}

TEST(RunCli, UsageErrorsExitOne) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"simulate", "--seed", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
  TempDir dir;
  EXPECT_EQ(cli({"export", "--data-dir", (dir / "x").string(), "--timezone", "Mars/Olympus"}).code, kExitUsage);
  EXPECT_EQ(cli({"replay", "--input", (dir / "missing.ndjson").string(), "--data-dir", (dir / "x").string()}).code,
            kExitBadInput);
}

TEST(ResolveConfig, FlagsOverrideEnvOverrideFile) {
  TempDir dir;
  {
    std::ofstream f(dir / "c.json");
    f << R"({"data_dir":"from-file","timezone":"Asia/Kolkata","bind":"0.0.0.0:1"})";
  }
  const service::EnvLookup env = [](const std::string& k) -> std::optional<std::string> {
    if (k == "FOOTFALL_TIMEZONE") return "Europe/Berlin";
    if (k == "FOOTFALL_BIND") return "127.0.0.1:2";
    return std::nullopt;
  };
  ConfigOverrides flags;
  flags.config_file = dir / "c.json";
  flags.bind = "127.0.0.1:3";
  const auto c = resolve_config(flags, env);
  EXPECT_EQ(c.data_dir, "from-file");
  EXPECT_EQ(c.timezone, "Europe/Berlin");
  EXPECT_EQ(c.bind, "127.0.0.1:3");
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::kMalformedRecord), kExitBadInput);
  EXPECT_EQ(exit_code_for(ErrorCode::kInvalidCount), kExitBadInput);
  EXPECT_EQ(exit_code_for(ErrorCode::kStorageFailure), kExitStorage);
  EXPECT_EQ(exit_code_for(ErrorCode::kUnknownDate), kExitUnknownDate);
  EXPECT_EQ(exit_code_for(ErrorCode::kInvalidConfig), kExitUsage);
}

}  // namespace
}  // namespace footfall::app
