#ifndef BLEND_TRANSPORT_HPP
#define BLEND_TRANSPORT_HPP

#include "blend/packet.hpp"
#include "blend/sim-kernel.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace blend {

enum class CcAlgo { Aimd, Cubic };

inline CcAlgo
ccAlgoFromString(const std::string& s)
{
  if (s == "aimd") {
    return CcAlgo::Aimd;
  }
  if (s == "cubic") {
    return CcAlgo::Cubic;
  }
  throw std::invalid_argument("unknown congestion algorithm: " + s);
}

inline const char*
to_string(CcAlgo a)
{
  return a == CcAlgo::Aimd ? "aimd" : "cubic";
}

/** Jacobson RTT estimation with a configurable variance multiplier:
 *  rto = srtt + gamma * rttvar, clamped to [rtoMin, rtoMax].
 */
class RttEstimator {
public:
  struct Options {
    double gamma = 4.0;
    TimeUs rtoMin = millisToUs(10);
    TimeUs rtoMax = secondsToUs(2);
    TimeUs rtoInitial = secondsToUs(1);
  };

  RttEstimator()
    : RttEstimator(Options{})
  {
  }

  explicit RttEstimator(Options options)
    : m_options(options)
  {
  }

  void addSample(TimeUs rtt)
  {
    if (!m_hasSample) {
      m_srtt = rtt;
      m_rttvar = rtt / 2;
      m_hasSample = true;
      return;
    }
    // RFC 6298 smoothing, alpha = 1/8, beta = 1/4; rttvar first
    m_rttvar = (3 * m_rttvar) / 4 + std::abs(m_srtt - rtt) / 4;
    m_srtt = (7 * m_srtt) / 8 + rtt / 8;
  }

  TimeUs rto() const
  {
    if (!m_hasSample) {
      return m_options.rtoInitial;
    }
    TimeUs rto = m_srtt + static_cast<TimeUs>(std::llround(m_options.gamma * double(m_rttvar)));
    return std::clamp(rto, m_options.rtoMin, m_options.rtoMax);
  }

  bool hasSample() const { return m_hasSample; }
  TimeUs srtt() const { return m_srtt; }
  TimeUs rttvar() const { return m_rttvar; }
  double gamma() const { return m_options.gamma; }

private:
  Options m_options;
  bool m_hasSample = false;
  TimeUs m_srtt = 0;
  TimeUs m_rttvar = 0;
};

/** Window evolution for the two controllers the consumer can run.
 *  AIMD: slow start below ssthresh, then +1/cwnd per Data; timeout halves
 *  ssthresh and collapses the window to 1.
 *  CUBIC: slow start until the first loss, then the cubic curve
 *  W(t) = C (t - K)^3 + Wmax evaluated on the time since the last decrease;
 *  a loss sets Wmax = cwnd and multiplies the window by beta = 0.7.
 */
class CongestionController {
public:
  struct Options {
    CcAlgo algo = CcAlgo::Aimd;
    double initialCwnd = 2.0;
    double cubicC = 0.4;
    double cubicBeta = 0.7;
  };

  CongestionController()
    : CongestionController(Options{})
  {
  }

  explicit CongestionController(Options options)
    : m_options(options)
    , m_cwnd(std::max(1.0, options.initialCwnd))
  {
  }

  double cwnd() const { return m_cwnd; }
  double ssthresh() const { return m_ssthresh; }

  void onData(TimeUs now)
  {
    if (m_cwnd < m_ssthresh) {
      m_cwnd += 1.0;
      return;
    }
    if (m_options.algo == CcAlgo::Aimd) {
      m_cwnd += 1.0 / m_cwnd;
      return;
    }
    // cubic congestion avoidance; before the first loss slow start applies
    if (m_epochStart < 0) {
      m_cwnd += 1.0;
      return;
    }
    double t = double(now - m_epochStart) / 1e6;
    double w = m_options.cubicC * std::pow(t - m_cubicK, 3.0) + m_wMax;
    m_cwnd = std::max({m_cwnd, w, 1.0});
  }

  void onLoss(TimeUs now)
  {
    if (m_options.algo == CcAlgo::Aimd) {
      m_ssthresh = std::max(m_cwnd / 2.0, 2.0);
      m_cwnd = 1.0;
      return;
    }
    m_wMax = m_cwnd;
    // RFC 8312 floors the reduced window at 2, which also keeps bundles at
    // least two sequences wide so receiver-side back-fill stays possible
    m_cwnd = std::max(m_cwnd * m_options.cubicBeta, 2.0);
    m_ssthresh = m_cwnd;
    m_epochStart = now;
    m_cubicK = std::cbrt(m_wMax * (1.0 - m_options.cubicBeta) / m_options.cubicC);
  }

private:
  Options m_options;
  double m_cwnd;
  double m_ssthresh = std::numeric_limits<double>::infinity();
  double m_wMax = 0.0;
  double m_cubicK = 0.0;
  TimeUs m_epochStart = -1;
};

/** Consumer-side Interest scheduler: keeps the pipe filled up to cwnd,
 *  tags every Interest with (RTx flag, cwnd), estimates RTT from
 *  first-transmission samples only (Karn), and retransmits on RTO with
 *  per-sequence exponential backoff. At the flow tail the tag carries the
 *  remaining packet count so the encoder closes the final bundle at the
 *  last chunk.
 */
class ConsumerTransport {
public:
  struct Options {
    CcAlgo algo = CcAlgo::Aimd;
    double gamma = 4.0;
    double initialCwnd = 2.0;
    TimeUs rtoMin = millisToUs(10);
    TimeUs rtoMax = secondsToUs(2);
    TimeUs rtoInitial = secondsToUs(1);
    uint64_t lifetimeMs = 4000;
    // bundle interval of the consumer link when bundling is on; 0 disables
    // the tail-tagging rule
    uint32_t bundleInterval = 0;
    // classic TCP times one segment per round trip; sampling every Data
    // hugs the queue curve so tightly that rttvar loses the round-scale
    // variation the RTO margin needs
    bool sampleEveryData = false;
  };

  struct Counters {
    uint64_t appSent = 0; // transport-issued Interests, fresh + RTx
    uint64_t rtx = 0;
    uint64_t timeouts = 0;
    uint64_t dupData = 0;
  };

  using IssueFn = std::function<void(const InterestPacket&)>;
  using CompletionFn = std::function<void()>;

  ConsumerTransport(Simulator& sim, Name prefix, uint64_t nChunks, Options options,
                    IssueFn issue, CompletionFn onComplete = nullptr)
    : m_sim(sim)
    , m_prefix(std::move(prefix))
    , m_nChunks(nChunks)
    , m_options(options)
    , m_issue(std::move(issue))
    , m_onComplete(std::move(onComplete))
    , m_cc({options.algo, options.initialCwnd, 0.4, 0.7})
    , m_rtt({options.gamma, options.rtoMin, options.rtoMax, options.rtoInitial})
    , m_nonceRng(sim.rngStream("transport.nonce"))
    , m_timingRng(sim.rngStream("transport.timing"))
    , m_satisfied(nChunks + 1, false)
  {
    assert(nChunks >= 1);
  }

  void start() { fillWindow(); }

  const Counters& counters() const { return m_counters; }
  const RttEstimator& rttEstimator() const { return m_rtt; }
  double cwnd() const { return m_cc.cwnd(); }

  /// Observation hook: called on every timeout with (seq, rto used, srtt,
  /// rttvar, cwnd). No effect on behavior.
  using TimeoutHook = std::function<void(uint64_t, TimeUs, TimeUs, TimeUs, double)>;
  void setTimeoutHook(TimeoutHook hook) { m_timeoutHook = std::move(hook); }
  bool complete() const { return m_received == m_nChunks; }
  TimeUs completionTime() const { return m_completionTime; }
  uint64_t received() const { return m_received; }

  /// Data reached the application; duplicates are counted and ignored.
  void onData(uint64_t seq)
  {
    if (seq == 0 || seq > m_nChunks || m_satisfied[seq]) {
      ++m_counters.dupData;
      return;
    }
    m_satisfied[seq] = true;
    ++m_received;
    m_highestData = std::max(m_highestData, seq);

    auto it = m_inFlight.find(seq);
    if (it != m_inFlight.end()) {
      m_sim.cancel(it->second.timer);
      // Karn excludes retransmits from sampling either way
      if (m_options.sampleEveryData) {
        if (!it->second.retransmitted) {
          m_rtt.addSample(m_sim.now() - it->second.sendTime);
          m_rtoBackoff = 0;
        }
      }
      else if (seq == m_timedSeq) {
        if (!it->second.retransmitted) {
          m_rtt.addSample(m_sim.now() - it->second.sendTime);
          m_rtoBackoff = 0;
        }
        m_timedSeq = 0;
      }
      m_inFlight.erase(it);
    }
    m_cc.onData(m_sim.now());

    if (m_received == m_nChunks) {
      m_completionTime = m_sim.now();
      if (m_onComplete) {
        m_onComplete();
      }
      return;
    }
    fillWindow();
  }

private:
  struct Flight {
    TimeUs sendTime = 0;
    Simulator::EventId timer;
    bool retransmitted = false;
  };

  void fillWindow()
  {
    while (m_nextFresh <= m_nChunks &&
           double(m_inFlight.size()) < m_cc.cwnd()) {
      uint64_t seq = m_nextFresh++;
      m_inFlight.emplace(seq, Flight{});
      issue(seq, false);
    }
  }

  uint32_t taggedCwnd(uint64_t seq) const
  {
    uint64_t remaining = m_nChunks - seq + 1;
    if (m_options.bundleInterval > 0 && remaining <= m_options.bundleInterval) {
      return static_cast<uint32_t>(remaining);
    }
    double w = std::max(1.0, std::floor(m_cc.cwnd()));
    return static_cast<uint32_t>(std::min(w, 4294967295.0));
  }

  void issue(uint64_t seq, bool isRtx)
  {
    Flight& flight = m_inFlight.at(seq);
    flight.sendTime = m_sim.now();
    flight.retransmitted = flight.retransmitted || isRtx;
    // per-RTT mode: randomize which issue opens the next timing epoch so
    // samples land at varying phases of the bundle cycle
    if (!m_options.sampleEveryData && m_timedSeq == 0 && !flight.retransmitted &&
        m_timingRng.next() % 4 == 0) {
      m_timedSeq = seq;
    }

    // RFC 6298 style: the backed-off RTO applies to every new timer until a
    // fresh RTT sample lands
    TimeUs rto = m_rtt.rto();
    for (uint32_t i = 0; i < m_rtoBackoff && rto < m_options.rtoMax; ++i) {
      rto = std::min(rto * 2, m_options.rtoMax);
    }
    flight.timer = m_sim.schedule(rto, [this, seq] { onTimeout(seq); });

    InterestPacket pkt;
    pkt.name = m_prefix.withSeq(seq);
    pkt.nonce = m_nonceRng.nextU32();
    pkt.lifetimeMs = m_options.lifetimeMs;
    pkt.btag = BundleTag::forTransport(isRtx, taggedCwnd(seq));
    ++m_counters.appSent;
    if (isRtx) {
      ++m_counters.rtx;
    }
    m_issue(pkt);
  }

  void onTimeout(uint64_t seq)
  {
    auto it = m_inFlight.find(seq);
    if (it == m_inFlight.end() || m_satisfied[seq]) {
      return;
    }
    ++m_counters.timeouts;
    if (m_timeoutHook) {
      m_timeoutHook(seq, m_sim.now() - it->second.sendTime, m_rtt.srtt(), m_rtt.rttvar(),
                    m_cc.cwnd());
    }

    // one multiplicative decrease per window of data: no further decrease
    // until the received frontier passes the issue frontier recorded at the
    // previous decrease
    if (m_highestData > m_recPoint || m_recPoint == 0) {
      m_cc.onLoss(m_sim.now());
      m_recPoint = m_nextFresh - 1;
    }

    if (seq == m_timedSeq) {
      m_timedSeq = 0; // Karn: time a different sequence instead
    }
    if (m_rtoBackoff < 16) {
      ++m_rtoBackoff;
    }
    issue(seq, true);
  }

  Simulator& m_sim;
  Name m_prefix;
  uint64_t m_nChunks;
  Options m_options;
  IssueFn m_issue;
  CompletionFn m_onComplete;
  TimeoutHook m_timeoutHook;
  CongestionController m_cc;
  RttEstimator m_rtt;
  RngStream m_nonceRng;
  RngStream m_timingRng;
  Counters m_counters;
  std::map<uint64_t, Flight> m_inFlight;
  std::vector<bool> m_satisfied;
  uint64_t m_nextFresh = 1;
  uint64_t m_received = 0;
  uint64_t m_timedSeq = 0;
  uint64_t m_highestData = 0;
  uint64_t m_recPoint = 0;
  uint32_t m_rtoBackoff = 0;
  TimeUs m_completionTime = -1;
};

} // namespace blend

#endif // BLEND_TRANSPORT_HPP
