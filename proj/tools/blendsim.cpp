// blendsim: scenario runner for the BLEnD link-layer Interest bundling
// simulator. See README.md for the config file format and examples.

#include "blend/report.hpp"
#include "blend/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonArgs {
  std::string profile = "80211b";
  std::string mode = "default";
  uint32_t bi = 0;
  std::string algo = "aimd";
  double gamma = 4.0;
  uint64_t fileSize = 7182ull * 1460ull;
  bool paperScale = false;
  uint64_t seed = 1;
  std::string lossScript;
  std::string out = ".";
  std::string name = "run";
  double deadlineS = 600.0;
  double initialCwnd = 32.0;
  double rtoMinMs = 10.0;
  double rtoMaxMs = 2000.0;
  double rtoInitialMs = 1000.0;
  int64_t fixedOverheadUs = -1;
  int64_t bitRate = -1;
  int64_t macHeader = -1;
  bool channelLog = false;
};

void
addCommonOptions(CLI::App* cmd, CommonArgs& args)
{
  cmd->add_option("--profile", args.profile, "channel profile: 80211b or 80211n")
    ->capture_default_str();
  cmd->add_option("--mode", args.mode, "default, blend, or one_interest")
    ->capture_default_str();
  cmd->add_option("--bi", args.bi, "bundle interval (blend mode)")->capture_default_str();
  cmd->add_option("--algo", args.algo, "congestion controller: aimd or cubic")
    ->capture_default_str();
  cmd->add_option("--gamma", args.gamma, "RTT variance multiplier for the RTO")
    ->capture_default_str();
  cmd->add_option("--file-size", args.fileSize, "file size in bytes")->capture_default_str();
  cmd->add_flag("--paper-scale", args.paperScale, "use the 100 MB / 71821-chunk file");
  cmd->add_option("--seed", args.seed, "simulation seed")->capture_default_str();
  cmd->add_option("--loss-script", args.lossScript,
                  "frame drops: nth:<kind>:<node>:<n> and/or prob:<p>, ';'-separated");
  cmd->add_option("--out", args.out, "output directory")->capture_default_str();
  cmd->add_option("--name", args.name, "scenario name used in reports")->capture_default_str();
  cmd->add_option("--deadline-s", args.deadlineS, "virtual-time deadline in seconds")
    ->capture_default_str();
  cmd->add_option("--initial-cwnd", args.initialCwnd, "initial congestion window")
    ->capture_default_str();
  cmd->add_option("--rto-min-ms", args.rtoMinMs, "minimum RTO")->capture_default_str();
  cmd->add_option("--rto-max-ms", args.rtoMaxMs, "maximum RTO")->capture_default_str();
  cmd->add_option("--rto-initial-ms", args.rtoInitialMs, "RTO before the first RTT sample")
    ->capture_default_str();
  cmd->add_option("--fixed-overhead-us", args.fixedOverheadUs,
                  "override the profile's per-frame overhead");
  cmd->add_option("--bit-rate", args.bitRate, "override the profile's bit rate (bits/s)");
  cmd->add_option("--mac-header", args.macHeader, "override the MAC header size (bytes)");
  cmd->set_config("--config", "", "scenario config file (key=value)");
}

blend::ScenarioConfig
toConfig(const CommonArgs& args)
{
  blend::ScenarioConfig cfg;
  cfg.name = args.name;
  cfg.profile = args.profile;
  cfg.mode = blend::modeFromString(args.mode);
  cfg.bi = args.bi;
  cfg.algo = blend::ccAlgoFromString(args.algo);
  cfg.gamma = args.gamma;
  cfg.fileSizeBytes = args.paperScale ? 104857600ull : args.fileSize;
  cfg.seed = args.seed;
  cfg.lossScript = args.lossScript;
  cfg.deadlineUs = static_cast<blend::TimeUs>(args.deadlineS * 1e6);
  cfg.initialCwnd = args.initialCwnd;
  cfg.rtoMinUs = static_cast<blend::TimeUs>(args.rtoMinMs * 1000);
  cfg.rtoMaxUs = static_cast<blend::TimeUs>(args.rtoMaxMs * 1000);
  cfg.rtoInitialUs = static_cast<blend::TimeUs>(args.rtoInitialMs * 1000);
  cfg.fixedOverheadOverrideUs = args.fixedOverheadUs;
  cfg.bitRateOverride = args.bitRate;
  cfg.macHeaderOverride = args.macHeader;
  return cfg;
}

int
writeOutputs(const std::vector<blend::MetricsReport>& reports, const std::string& outDir)
{
  namespace fs = std::filesystem;
  fs::create_directories(outDir);
  blend::writeFile((fs::path(outDir) / "metrics.csv").string(), blend::emitCsv(reports));
  blend::writeFile((fs::path(outDir) / "goodput.svg").string(),
                   blend::emitBarChartSvg(reports, "Goodput", "Mbps",
                                          [](const blend::MetricsReport& r) {
                                            return r.goodputMbps;
                                          }));
  blend::writeFile((fs::path(outDir) / "tx_events.svg").string(),
                   blend::emitBarChartSvg(reports, "Link-layer Tx events", "frames",
                                          [](const blend::MetricsReport& r) {
                                            return double(r.linkTxEvents);
                                          }));
  std::cout << blend::emitTextTable(reports);
  bool allCompleted = true;
  for (const auto& r : reports) {
    allCompleted = allCompleted && r.completed;
  }
  if (!allCompleted) {
    std::cerr << "error: at least one scenario did not complete before its deadline\n";
    return 1;
  }
  return 0;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"BLEnD link-layer Interest bundling simulator"};
  app.require_subcommand(1);

  CommonArgs runArgs;
  CLI::App* run = app.add_subcommand("run", "run one scenario");
  addCommonOptions(run, runArgs);

  CommonArgs sweepArgs;
  std::string axis = "bi";
  std::vector<std::string> values;
  CLI::App* sweep = app.add_subcommand("sweep", "run one scenario per axis value");
  addCommonOptions(sweep, sweepArgs);
  sweep->add_option("--axis", axis, "sweep axis: bi, gamma, or profile")->capture_default_str();
  sweep->add_option("--values", values, "axis values")->required()->delimiter(',');

  CommonArgs calArgs;
  CLI::App* calibrate =
    app.add_subcommand("calibrate", "search the per-frame overhead for the Fig.-1 baselines");
  addCommonOptions(calibrate, calArgs);
  double targetDefault = 4.4;
  double targetOne = 7.0;
  calibrate->add_option("--target-default", targetDefault, "no-bundling goodput target (Mbps)")
    ->capture_default_str();
  calibrate->add_option("--target-one-interest", targetOne,
                        "one-Interest goodput target (Mbps)")
    ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      auto report = blend::runScenario(toConfig(runArgs));
      return writeOutputs({report}, runArgs.out);
    }

    if (sweep->parsed()) {
      auto reports =
        blend::runSweep(blend::sweepAxisFromString(axis), values, toConfig(sweepArgs));
      return writeOutputs(reports, sweepArgs.out);
    }

    if (calibrate->parsed()) {
      // coordinate scan: the one-Interest mode pins overhead+data airtime,
      // the default mode is then a check; report the best overhead found
      blend::ScenarioConfig base = toConfig(calArgs);
      double bestErr = 1e9;
      int64_t bestOverhead = 0;
      blend::MetricsReport bestDefault, bestOne;
      for (int64_t overhead = 20; overhead <= 1500; overhead += 10) {
        blend::ScenarioConfig dflt = base;
        dflt.mode = blend::Mode::Default;
        dflt.bi = 0;
        dflt.fixedOverheadOverrideUs = overhead;
        dflt.name = "calibrate_default";
        auto rd = blend::runScenario(dflt);

        blend::ScenarioConfig one = base;
        one.mode = blend::Mode::OneInterest;
        one.bi = 0;
        one.fixedOverheadOverrideUs = overhead;
        one.name = "calibrate_one_interest";
        auto ro = blend::runScenario(one);

        if (!rd.completed || !ro.completed) {
          continue;
        }
        double err = std::abs(rd.goodputMbps / targetDefault - 1.0) +
                     std::abs(ro.goodputMbps / targetOne - 1.0);
        if (err < bestErr) {
          bestErr = err;
          bestOverhead = overhead;
          bestDefault = rd;
          bestOne = ro;
        }
      }
      std::printf("profile %s: fixed_overhead_us=%lld\n", base.profile.c_str(),
                  static_cast<long long>(bestOverhead));
      std::printf("  default      %.3f Mbps (target %.2f)\n", bestDefault.goodputMbps,
                  targetDefault);
      std::printf("  one_interest %.3f Mbps (target %.2f)\n", bestOne.goodputMbps, targetOne);
      return 0;
    }
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
