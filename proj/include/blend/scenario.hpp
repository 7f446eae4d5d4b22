#ifndef BLEND_SCENARIO_HPP
#define BLEND_SCENARIO_HPP

#include "blend/apps.hpp"
#include "blend/node.hpp"
#include "blend/transport.hpp"

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace blend {

enum class Mode { Default, Blend, OneInterest };

inline Mode
modeFromString(const std::string& s)
{
  if (s == "default") {
    return Mode::Default;
  }
  if (s == "blend") {
    return Mode::Blend;
  }
  if (s == "one_interest") {
    return Mode::OneInterest;
  }
  throw std::invalid_argument("unknown mode: " + s);
}

inline const char*
to_string(Mode m)
{
  switch (m) {
    case Mode::Default:
      return "default";
    case Mode::Blend:
      return "blend";
    default:
      return "one_interest";
  }
}

/** Invalid scenario configuration; names the offending field. */
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& reason)
    : std::runtime_error("config field '" + field + "': " + reason)
    , m_field(std::move(field))
  {
  }

  const std::string& field() const { return m_field; }

private:
  std::string m_field;
};

struct ScenarioConfig {
  std::string name = "run";
  std::string profile = "80211b";
  Mode mode = Mode::Default;
  uint32_t bi = 0;
  CcAlgo algo = CcAlgo::Aimd;
  double gamma = 4.0;
  // 7182 chunks of 1460 B; --paper-scale raises it to the 100 MB / 71821
  // chunk experiment size
  uint64_t fileSizeBytes = 10485720;
  uint32_t chunkPayload = 1460;
  uint64_t seed = 1;
  std::string lossScript;
  TimeUs deadlineUs = secondsToUs(600);
  double initialCwnd = 32.0;
  TimeUs rtoMinUs = millisToUs(10);
  TimeUs rtoMaxUs = secondsToUs(2);
  TimeUs rtoInitialUs = secondsToUs(1);
  bool rttSampleEveryData = false;
  uint64_t lifetimeMs = 4000;
  size_t csCapacity = 4096;
  size_t nicQueueFrames = 64;
  std::string prefix = "/blend/file";
  // channel overrides; negative means "use the profile constant"
  int64_t bitRateOverride = -1;
  int64_t fixedOverheadOverrideUs = -1;
  int64_t macHeaderOverride = -1;
  int64_t meanBackoffOverrideUs = -1;
  double collisionProbOverride = -1.0;

  void validate() const
  {
    ChannelProfile::byLabel(profile); // throws on unknown label
    if (mode == Mode::Blend && bi < 1) {
      throw ConfigError("bi", "mode=blend requires bi >= 1");
    }
    if (mode == Mode::OneInterest && bi != 0) {
      throw ConfigError("bi", "mode=one_interest forbids a bundle interval");
    }
    if (mode == Mode::Default && bi != 0) {
      throw ConfigError("bi", "mode=default does not bundle; leave bi unset");
    }
    if (fileSizeBytes == 0) {
      throw ConfigError("file-size", "must be positive");
    }
    if (chunkPayload == 0) {
      throw ConfigError("chunk-payload", "must be positive");
    }
    if (gamma <= 0) {
      throw ConfigError("gamma", "must be positive");
    }
    if (initialCwnd < 1.0) {
      throw ConfigError("initial-cwnd", "must be >= 1");
    }
    if (deadlineUs <= 0) {
      throw ConfigError("deadline", "must be positive");
    }
    if (rtoMinUs <= 0 || rtoMaxUs < rtoMinUs) {
      throw ConfigError("rto", "requires 0 < rto-min <= rto-max");
    }
    try {
      LossScript::parse(lossScript);
    }
    catch (const std::exception& e) {
      throw ConfigError("loss-script", e.what());
    }
    if (Name::fromUri(prefix).components().empty()) {
      throw ConfigError("prefix", "must have at least one component");
    }
  }

  ChannelProfile channelProfile() const
  {
    ChannelProfile p = ChannelProfile::byLabel(profile);
    if (bitRateOverride >= 0) {
      p.bitRate = static_cast<uint64_t>(bitRateOverride);
    }
    if (fixedOverheadOverrideUs >= 0) {
      p.fixedOverheadUs = fixedOverheadOverrideUs;
    }
    if (macHeaderOverride >= 0) {
      p.macHeaderBytes = static_cast<uint32_t>(macHeaderOverride);
    }
    if (meanBackoffOverrideUs >= 0) {
      p.meanBackoffUs = meanBackoffOverrideUs;
    }
    if (collisionProbOverride >= 0) {
      p.collisionProb = collisionProbOverride;
    }
    return p;
  }

  FileSpec fileSpec() const { return FileSpec{Name::fromUri(prefix), fileSizeBytes, chunkPayload}; }
};

struct MetricsReport {
  // configuration echo
  std::string scenario;
  std::string profile;
  std::string mode;
  std::string algo;
  uint32_t bi = 0;
  double gamma = 0.0;
  uint64_t seed = 0;
  uint64_t fileBytes = 0;
  uint64_t dataPkts = 0;
  // outcome
  bool completed = false;
  TimeUs completionUs = -1;
  double goodputMbps = 0.0;
  uint64_t linkTxEvents = 0; // consumer wireless Interest frames, RTx included
  uint64_t appSent = 0;
  uint64_t pSent = 0;
  uint64_t cRcv = 0;
  uint64_t rtx = 0;
  uint64_t suppressedAtLink = 0;
  uint64_t timeouts = 0;
  uint64_t dupData = 0;

  static std::string csvHeader()
  {
    return "scenario,profile,mode,algo,bi,gamma,seed,file_bytes,data_pkts,completed,"
           "completion_ms,goodput_mbps,link_tx_events,app_sent,p_sent,c_rcv,rtx,"
           "suppressed_at_link,timeouts,dup_data";
  }

  std::string csvRow() const
  {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%s,%s,%s,%s,%u,%.4f,%llu,%llu,%llu,%d,%.3f,%.4f,%llu,%llu,%llu,%llu,%llu,"
                  "%llu,%llu,%llu",
                  scenario.c_str(), profile.c_str(), mode.c_str(), algo.c_str(), bi, gamma,
                  static_cast<unsigned long long>(seed), static_cast<unsigned long long>(fileBytes),
                  static_cast<unsigned long long>(dataPkts), completed ? 1 : 0,
                  completed ? double(completionUs) / 1000.0 : -1.0, goodputMbps,
                  static_cast<unsigned long long>(linkTxEvents),
                  static_cast<unsigned long long>(appSent), static_cast<unsigned long long>(pSent),
                  static_cast<unsigned long long>(cRcv), static_cast<unsigned long long>(rtx),
                  static_cast<unsigned long long>(suppressedAtLink),
                  static_cast<unsigned long long>(timeouts),
                  static_cast<unsigned long long>(dupData));
    return buf;
  }
};

/** Extra observation points used by tests; enabling them does not change
 *  simulation behavior.
 */
struct ScenarioArtifacts {
  std::vector<std::string> producerNameTrace;         // Interest names in processing order
  std::vector<std::vector<uint64_t>> producerDecodes; // seqs emitted per tagged bundle
};

inline MetricsReport
runScenario(const ScenarioConfig& cfg, ScenarioArtifacts* artifacts = nullptr)
{
  cfg.validate();

  Simulator sim(cfg.seed);
  WirelessChannel channel(sim, cfg.channelProfile(), LossScript::parse(cfg.lossScript),
                          cfg.nicQueueFrames);

  BlendLinkService::Options consumerLink;
  consumerLink.bundlingEnabled = (cfg.mode == Mode::Blend);
  consumerLink.bundleInterval = cfg.bi == 0 ? 1 : cfg.bi;
  consumerLink.medium = FaceMedium::Wireless;
  consumerLink.entryIdleTimeoutUs = millisToUs(static_cast<int64_t>(2 * cfg.lifetimeMs));
  BlendLinkService::Options producerLink = consumerLink;

  Node consumer(sim, channel, "consumer", consumerLink, cfg.csCapacity);
  Node producer(sim, channel, "producer", producerLink, cfg.csCapacity);
  consumer.setPeer(producer.channelId());
  producer.setPeer(consumer.channelId());

  const FileSpec spec = cfg.fileSpec();
  consumer.forwarder().addRoute(spec.prefix, Node::kWifiFace);
  producer.forwarder().addRoute(spec.prefix, Node::kAppFace);

  std::vector<std::vector<uint64_t>> decodeTrace;
  if (artifacts != nullptr) {
    producer.forwarder().enableNameTrace();
    producer.link().setDecodeTrace(&decodeTrace);
  }

  MetricsReport report;
  report.scenario = cfg.name;
  report.profile = cfg.profile;
  report.mode = to_string(cfg.mode);
  report.algo = to_string(cfg.algo);
  report.bi = cfg.bi;
  report.gamma = cfg.gamma;
  report.seed = cfg.seed;
  report.fileBytes = cfg.fileSizeBytes;
  report.dataPkts = spec.nChunks();

  if (cfg.mode == Mode::OneInterest) {
    OneInterestProducer pushProducer(spec,
                                     [&producer](const DataPacket& d) { producer.pushDataToWire(d); });
    channel.setTxCallback(producer.channelId(), [&pushProducer] { pushProducer.onTxComplete(); });
    producer.setAppInterestSink(
      [&pushProducer](const InterestPacket& i) { pushProducer.onInterest(i); });

    OneInterestConsumer rig(sim, spec,
                            [&consumer](const InterestPacket& i) { consumer.sendFromApp(i); });
    consumer.setWireDataBypass([&rig](const DataPacket& d) { rig.onData(d); });

    sim.schedule(0, [&rig] { rig.start(); });
    sim.run(cfg.deadlineUs);

    report.completed = rig.complete();
    report.completionUs = rig.completionTime();
    report.appSent = 1;
  }
  else {
    ProducerApp producerApp(spec,
                            [&producer](const DataPacket& d) { producer.sendDataFromApp(d); });
    producer.setAppInterestSink(
      [&producerApp](const InterestPacket& i) { producerApp.onInterest(i); });

    ConsumerTransport::Options tOpts;
    tOpts.algo = cfg.algo;
    tOpts.gamma = cfg.gamma;
    tOpts.initialCwnd = cfg.initialCwnd;
    tOpts.rtoMin = cfg.rtoMinUs;
    tOpts.rtoMax = cfg.rtoMaxUs;
    tOpts.rtoInitial = cfg.rtoInitialUs;
    tOpts.sampleEveryData = cfg.rttSampleEveryData;
    tOpts.lifetimeMs = cfg.lifetimeMs;
    tOpts.bundleInterval = (cfg.mode == Mode::Blend) ? cfg.bi : 0;

    ConsumerTransport transport(sim, spec.prefix, spec.nChunks(), tOpts,
                                [&consumer](const InterestPacket& i) { consumer.sendFromApp(i); });
    consumer.setAppDataSink([&transport](const DataPacket& d) {
      if (d.name.seq()) {
        transport.onData(*d.name.seq());
      }
    });

    sim.schedule(0, [&transport] { transport.start(); });
    sim.run(cfg.deadlineUs);

    report.completed = transport.complete();
    report.completionUs = transport.completionTime();
    report.appSent = transport.counters().appSent;
    report.rtx = transport.counters().rtx;
    report.timeouts = transport.counters().timeouts;
    report.dupData = transport.counters().dupData;
  }

  if (report.completed) {
    report.goodputMbps = (8.0 * double(cfg.fileSizeBytes)) / double(report.completionUs);
  }
  report.linkTxEvents = consumer.nicCounters().txInterest;
  report.pSent = channel.counters(producer.channelId()).tx();
  report.cRcv = consumer.nicCounters().rxData;
  report.suppressedAtLink = consumer.link().counters().suppressed;

  if (artifacts != nullptr) {
    artifacts->producerNameTrace = producer.forwarder().nameTrace();
    artifacts->producerDecodes = std::move(decodeTrace);
  }
  return report;
}

enum class SweepAxis { Bi, Gamma, Profile };

inline SweepAxis
sweepAxisFromString(const std::string& s)
{
  if (s == "bi") {
    return SweepAxis::Bi;
  }
  if (s == "gamma") {
    return SweepAxis::Gamma;
  }
  if (s == "profile") {
    return SweepAxis::Profile;
  }
  throw std::invalid_argument("unknown sweep axis: " + s);
}

/** One run per axis value, all cells sharing the base seed so paired
 *  comparisons see identical randomness. bi = 0 maps to the no-bundling
 *  default mode.
 */
inline std::vector<MetricsReport>
runSweep(SweepAxis axis, const std::vector<std::string>& values, const ScenarioConfig& base)
{
  if (values.empty()) {
    throw ConfigError("values", "sweep needs at least one value");
  }
  std::vector<MetricsReport> out;
  for (const auto& v : values) {
    ScenarioConfig cfg = base;
    switch (axis) {
      case SweepAxis::Bi: {
        uint32_t bi = static_cast<uint32_t>(std::stoul(v));
        cfg.bi = bi;
        cfg.mode = bi == 0 ? Mode::Default : Mode::Blend;
        cfg.name = base.name + "_bi" + v;
        break;
      }
      case SweepAxis::Gamma:
        cfg.gamma = std::stod(v);
        cfg.name = base.name + "_gamma" + v;
        break;
      case SweepAxis::Profile:
        cfg.profile = v;
        cfg.name = base.name + "_" + v;
        break;
    }
    out.push_back(runScenario(cfg));
  }
  return out;
}

} // namespace blend

#endif // BLEND_SCENARIO_HPP
