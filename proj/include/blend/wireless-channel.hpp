#ifndef BLEND_WIRELESS_CHANNEL_HPP
#define BLEND_WIRELESS_CHANNEL_HPP

#include "blend/sim-kernel.hpp"

#include <cassert>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace blend {

/** Abstract half-duplex medium parameters. No per-frame backoff is simulated;
 *  the mean DCF contention cost (preamble + PLCP + DIFS + SIFS + MAC-ACK +
 *  mean backoff) is folded into one calibrated per-frame constant.
 *
 *  The fixed overheads below were produced by `blendsim calibrate`, which
 *  fits the no-bundling and one-Interest baselines; they are config
 *  overridable per scenario.
 */
struct ChannelProfile {
  std::string label;
  uint64_t bitRate = 0;       // bits/s
  TimeUs fixedOverheadUs = 0; // per-frame MAC/PHY cost excluding backoff
  uint32_t macHeaderBytes = 0;
  // DCF randomness: every transmission draws a backoff uniform in
  // [0, 2 * meanBackoffUs]; with collisionProb the frame also pays one full
  // retry (both contenders picked the same slot)
  TimeUs meanBackoffUs = 0;
  double collisionProb = 0.0;

  static ChannelProfile dot11b()
  {
    return ChannelProfile{"80211b", 11'000'000, 275, 36, 310, 0.05};
  }

  static ChannelProfile dot11n()
  {
    return ChannelProfile{"80211n", 24'000'000, 190, 36, 68, 0.06};
  }

  static ChannelProfile byLabel(const std::string& label)
  {
    if (label == "80211b") {
      return dot11b();
    }
    if (label == "80211n") {
      return dot11n();
    }
    throw std::invalid_argument("unknown channel profile: " + label);
  }
};

/// Per-frame airtime: fixed overhead plus serialization delay, rounded up
/// to the next microsecond.
inline TimeUs
airtime(const ChannelProfile& profile, size_t wireLen)
{
  assert(wireLen > 0);
  assert(profile.bitRate > 0);
  uint64_t bits = 8 * static_cast<uint64_t>(wireLen);
  TimeUs serialization = static_cast<TimeUs>((bits * 1'000'000 + profile.bitRate - 1) / profile.bitRate);
  return profile.fixedOverheadUs + serialization;
}

enum class FrameKind { Interest, Data };

inline const char*
to_string(FrameKind k)
{
  return k == FrameKind::Interest ? "interest" : "data";
}

struct FrameTx {
  int src = -1;
  int dst = -1;
  FrameKind kind = FrameKind::Interest;
  std::vector<uint8_t> wire; // TLV bytes; the MAC header is charged separately
  TimeUs enqueueTime = 0;
};

/** Deterministic, scriptable frame dropper. Rules, separated by ';':
 *    nth:<kind>:<node>:<n>   drop the n-th (1-based) frame of that kind from node
 *    prob:<p>                drop each frame with probability p (seeded stream)
 *  An empty script is lossless.
 */
class LossScript {
public:
  LossScript() = default;

  static LossScript parse(const std::string& spec)
  {
    LossScript ls;
    size_t pos = 0;
    while (pos < spec.size()) {
      size_t end = spec.find(';', pos);
      if (end == std::string::npos) {
        end = spec.size();
      }
      std::string rule = spec.substr(pos, end - pos);
      pos = end + 1;
      if (rule.empty()) {
        continue;
      }
      if (rule.rfind("prob:", 0) == 0) {
        double p = std::stod(rule.substr(5));
        if (p < 0.0 || p > 1.0) {
          throw std::invalid_argument("loss probability out of [0,1]: " + rule);
        }
        ls.m_rules.push_back(Rule{Rule::Prob, FrameKind::Interest, "", 0, p});
      }
      else if (rule.rfind("nth:", 0) == 0) {
        std::string rest = rule.substr(4);
        size_t c1 = rest.find(':');
        size_t c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
          throw std::invalid_argument("bad nth loss rule: " + rule);
        }
        std::string kind = rest.substr(0, c1);
        std::string node = rest.substr(c1 + 1, c2 - c1 - 1);
        uint64_t n = std::stoull(rest.substr(c2 + 1));
        if (n == 0 || (kind != "interest" && kind != "data")) {
          throw std::invalid_argument("bad nth loss rule: " + rule);
        }
        ls.m_rules.push_back(
          Rule{Rule::Nth, kind == "interest" ? FrameKind::Interest : FrameKind::Data, node, n, 0.0});
      }
      else {
        throw std::invalid_argument("unknown loss rule: " + rule);
      }
    }
    return ls;
  }

  bool empty() const { return m_rules.empty(); }

  bool shouldDrop(const FrameTx& frame, const std::string& srcName, RngStream& rng)
  {
    bool drop = false;
    for (auto& rule : m_rules) {
      if (rule.type == Rule::Prob) {
        if (rng.nextUnit() < rule.p) {
          drop = true;
        }
      }
      else if (rule.kind == frame.kind && rule.node == srcName) {
        if (++rule.seen == rule.n) {
          drop = true;
        }
      }
    }
    return drop;
  }

private:
  struct Rule {
    enum Type { Nth, Prob } type;
    FrameKind kind;
    std::string node;
    uint64_t n = 0;
    double p = 0.0;
    uint64_t seen = 0;
  };

  std::vector<Rule> m_rules;
};

/** Shared half-duplex medium. At most one frame occupies the air at a time;
 *  frames submitted while busy wait in a single FIFO in arrival order.
 *  A scripted drop still consumes the frame's airtime.
 */
class WirelessChannel {
public:
  using Receiver = std::function<void(const FrameTx&)>;

  struct NodeCounters {
    uint64_t txInterest = 0;
    uint64_t txData = 0;
    uint64_t rxInterest = 0;
    uint64_t rxData = 0;
    uint64_t txQueueDrops = 0;

    uint64_t tx() const { return txInterest + txData; }
    uint64_t rx() const { return rxInterest + rxData; }
  };

  /// nicQueueFrames bounds each NIC's transmit queue; a frame arriving at a
  /// full queue is tail-dropped before it ever occupies the medium.
  WirelessChannel(Simulator& sim, ChannelProfile profile, LossScript loss = {},
                  size_t nicQueueFrames = 64)
    : m_sim(sim)
    , m_profile(profile)
    , m_loss(std::move(loss))
    , m_nicQueueFrames(nicQueueFrames)
    , m_rng(sim.rngStream("channel.loss"))
    , m_macRng(sim.rngStream("channel.mac"))
  {
  }

  int attach(const std::string& name, Receiver receiver)
  {
    int id = static_cast<int>(m_nodes.size());
    m_nodes.push_back(Node{name, std::move(receiver), nullptr, {}});
    return id;
  }

  /// Optional NIC tx-complete notification for a node's own frames.
  void setTxCallback(int node, std::function<void()> fn)
  {
    m_nodes.at(node).txComplete = std::move(fn);
  }

  const ChannelProfile& profile() const { return m_profile; }

  const NodeCounters& counters(int node) const { return m_nodes.at(node).counters; }

  uint64_t framesDropped() const { return m_framesDropped; }
  TimeUs busyTotalUs() const { return m_busyTotalUs; }

  void setLog(std::ostream* log) { m_log = log; }

  size_t wireLen(const FrameTx& frame) const
  {
    return frame.wire.size() + m_profile.macHeaderBytes;
  }

  void transmit(FrameTx frame)
  {
    assert(frame.src != frame.dst);
    assert(frame.src >= 0 && frame.src < static_cast<int>(m_nodes.size()));
    assert(frame.dst >= 0 && frame.dst < static_cast<int>(m_nodes.size()));
    frame.enqueueTime = m_sim.now();
    if (m_busy) {
      auto& src = m_nodes[frame.src];
      if (src.queued >= m_nicQueueFrames) {
        ++src.counters.txQueueDrops;
        if (m_log) {
          *m_log << m_sim.now() << " ch " << src.name << " " << to_string(frame.kind)
                 << " txqueue-drop\n";
        }
        return;
      }
      ++src.queued;
      m_queue.push_back(std::move(frame));
    }
    else {
      begin(std::move(frame));
    }
  }

private:
  struct Node {
    std::string name;
    Receiver receiver;
    std::function<void()> txComplete;
    NodeCounters counters;
    size_t queued = 0;
  };

  void begin(FrameTx frame)
  {
    assert(m_sim.now() >= m_lastBusyEnd); // busy intervals must not overlap
    m_busy = true;
    TimeUs dur = airtime(m_profile, wireLen(frame));
    if (m_profile.meanBackoffUs > 0) {
      dur += static_cast<TimeUs>(m_macRng.nextRange(0, 2 * m_profile.meanBackoffUs));
    }
    if (m_profile.collisionProb > 0 && m_macRng.nextUnit() < m_profile.collisionProb) {
      // both stations drew the same slot: the first attempt is wasted and
      // the retry contends again with a doubled window
      dur += airtime(m_profile, wireLen(frame));
      if (m_profile.meanBackoffUs > 0) {
        dur += static_cast<TimeUs>(m_macRng.nextRange(0, 4 * m_profile.meanBackoffUs));
      }
    }
    m_busyTotalUs += dur;
    m_lastBusyEnd = m_sim.now() + dur;
    auto& src = m_nodes[frame.src];
    (frame.kind == FrameKind::Interest ? src.counters.txInterest : src.counters.txData)++;
    m_sim.schedule(dur, [this, f = std::move(frame)]() mutable { complete(std::move(f)); });
  }

  void complete(FrameTx frame)
  {
    bool dropped = m_loss.shouldDrop(frame, m_nodes[frame.src].name, m_rng);
    if (m_log) {
      *m_log << m_sim.now() << " ch " << m_nodes[frame.src].name << " " << to_string(frame.kind)
             << " len=" << wireLen(frame) << " queued=" << (m_sim.now() - frame.enqueueTime)
             << "us " << (dropped ? "dropped" : "delivered") << "\n";
    }
    if (dropped) {
      ++m_framesDropped;
    }
    else {
      auto& dst = m_nodes[frame.dst];
      (frame.kind == FrameKind::Interest ? dst.counters.rxInterest : dst.counters.rxData)++;
      dst.receiver(frame);
    }
    if (m_nodes[frame.src].txComplete) {
      m_nodes[frame.src].txComplete();
    }
    // receivers may have queued new frames behind the busy flag
    if (!m_queue.empty()) {
      FrameTx next = std::move(m_queue.front());
      m_queue.pop_front();
      --m_nodes[next.src].queued;
      m_busy = false;
      begin(std::move(next));
    }
    else {
      m_busy = false;
    }
  }

  Simulator& m_sim;
  ChannelProfile m_profile;
  LossScript m_loss;
  size_t m_nicQueueFrames;
  RngStream m_rng;
  RngStream m_macRng;
  std::vector<Node> m_nodes;
  std::deque<FrameTx> m_queue;
  bool m_busy = false;
  TimeUs m_lastBusyEnd = 0;
  TimeUs m_busyTotalUs = 0;
  uint64_t m_framesDropped = 0;
  std::ostream* m_log = nullptr;
};

} // namespace blend

#endif // BLEND_WIRELESS_CHANNEL_HPP
