#ifndef BLEND_BLEND_LINK_HPP
#define BLEND_BLEND_LINK_HPP

#include "blend/packet.hpp"
#include "blend/sim-kernel.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace blend {

enum class FaceMedium { Wired, Wireless };

/** Link adaptation service for one face: bundles outgoing Interests at the
 *  sender and unbundles incoming ones at the receiver. Sits below the
 *  forwarder, which stays unaware of it.
 *
 *  Sender side: an Interest tagged by the transport with (RTx, cwnd) either
 *  opens a new bundle covering [LSS+BI, LSS+BI+min(cwnd,BI)-1], passes
 *  through immediately as a one-sequence bundle (RTx), or is suppressed
 *  because a previous bundle already covers its seq. Per-prefix encoding
 *  state lives in the EIT <Name, BI, LSS, LES>.
 *
 *  Receiver side: a bundle (SS, ES) expands into one Interest per sequence
 *  in [PES+1, ES], which both decodes the bundle and back-fills sequences a
 *  lost earlier bundle should have covered. Per-prefix decoding state lives
 *  in the DIT <Name, PSS, PES>. An RTx (SS=ES) expands to exactly its own
 *  sequence and leaves the DIT alone, so a retransmission never re-covers
 *  future sequences.
 */
class BlendLinkService {
public:
  struct Options {
    bool bundlingEnabled = false;
    uint32_t bundleInterval = 15;
    FaceMedium medium = FaceMedium::Wireless;
    // EIT/DIT entries are dropped after this long without use (2x the
    // default Interest lifetime)
    TimeUs entryIdleTimeoutUs = millisToUs(8000);
  };

  struct Counters {
    uint64_t bundlesSent = 0;
    uint64_t suppressed = 0;
    uint64_t rtxPassthrough = 0;
    uint64_t bundlesDroppedStale = 0;
    uint64_t malformed = 0;
    uint64_t degenerateCwnd = 0;
  };

  enum class EncodeAction { Sent, Suppressed };

  BlendLinkService(Simulator& sim, Options options)
    : m_sim(sim)
    , m_options(options)
  {
  }

  const Options& options() const { return m_options; }
  const Counters& counters() const { return m_counters; }

  /** Outgoing pipeline. Mutates the packet in place: strips the transport
   *  tag on non-bundling paths, or rewrites it to link phase (SS, ES).
   *  On Suppressed the packet must not be transmitted.
   */
  EncodeAction encodeOutgoing(InterestPacket& pkt)
  {
    if (m_options.medium == FaceMedium::Wired || !m_options.bundlingEnabled) {
      pkt.btag.reset();
      return EncodeAction::Sent;
    }
    if (!pkt.btag) {
      return EncodeAction::Sent;
    }
    if (!pkt.name.seq()) {
      // non-sequenced Interests are not bundled
      pkt.btag.reset();
      return EncodeAction::Sent;
    }

    const uint64_t seq = *pkt.name.seq();
    const bool isRtx = pkt.btag->isRtx();
    uint32_t cwnd = pkt.btag->cwnd();
    if (cwnd == 0) {
      ++m_counters.degenerateCwnd;
      cwnd = 1;
    }

    if (isRtx) {
      // always goes out, one-sequence bundle, window state untouched
      pkt.btag = BundleTag::forLink(static_cast<uint32_t>(seq), static_cast<uint32_t>(seq));
      ++m_counters.rtxPassthrough;
      return EncodeAction::Sent;
    }

    EitEntry& eit = lookupEit(pkt.name.prefix(), seq);
    // gate: everything up to LES is already represented by a previous
    // bundle; a full bundle puts the gate at LSS+BI, a shrunken one
    // (cwnd < BI) pulls it in so coverage stays contiguous
    if (static_cast<int64_t>(seq) <= eit.les) {
      ++m_counters.suppressed;
      return EncodeAction::Suppressed;
    }

    const uint64_t ss = static_cast<uint64_t>(eit.les + 1);
    const uint64_t es = ss + std::min<uint64_t>(cwnd, eit.bi) - 1;
    eit.lss = static_cast<int64_t>(ss);
    eit.les = static_cast<int64_t>(es);

    pkt.name = pkt.name.prefix().withSeq(ss);
    pkt.btag = BundleTag::forLink(static_cast<uint32_t>(ss), static_cast<uint32_t>(es));
    ++m_counters.bundlesSent;
    return EncodeAction::Sent;
  }

  /** Incoming pipeline: expands a bundled Interest into the Interests it
   *  represents, in ascending seq order, each carrying the bundle's NONCE
   *  and lifetime. Untagged packets pass through unchanged.
   */
  std::vector<InterestPacket> decodeIncoming(const InterestPacket& pkt)
  {
    if (!pkt.btag) {
      return {pkt};
    }

    const uint64_t ss = pkt.btag->startSeq();
    const uint64_t es = pkt.btag->endSeq();
    const Name prefix = pkt.name.prefix();

    uint64_t dss = 0;
    uint64_t des = 0;
    if (ss == es) {
      // an RTx; decode it alone and leave the DIT untouched
      dss = des = ss;
    }
    else if (ss > es) {
      ++m_counters.malformed;
      return {};
    }
    else {
      DitEntry& dit = lookupDit(prefix);
      if (es <= dit.pes) {
        ++m_counters.bundlesDroppedStale;
        return {};
      }
      dss = dit.pes + 1;
      des = es;
      dit.pss = ss;
      dit.pes = es;
    }

    std::vector<InterestPacket> out;
    out.reserve(des - dss + 1);
    for (uint64_t seq = dss; seq <= des; ++seq) {
      InterestPacket interest;
      interest.name = prefix.withSeq(seq);
      interest.nonce = pkt.nonce;
      interest.lifetimeMs = pkt.lifetimeMs;
      out.push_back(std::move(interest));
    }
    if (m_decodeTrace != nullptr) {
      std::vector<uint64_t> seqs;
      for (const auto& i : out) {
        seqs.push_back(*i.name.seq());
      }
      m_decodeTrace->push_back(std::move(seqs));
    }
    return out;
  }

  /// Test hook: every tagged decode appends its emitted seq list.
  void setDecodeTrace(std::vector<std::vector<uint64_t>>* sink) { m_decodeTrace = sink; }

private:
  struct EitEntry {
    uint32_t bi;
    int64_t lss;
    int64_t les;
    TimeUs lastUse;
  };

  struct DitEntry {
    uint64_t pss = 0;
    uint64_t pes = 0;
    TimeUs lastUse = 0;
  };

  // Initialized so the gate "seq >= LSS+BI" admits the first sequence of a
  // prefix immediately.
  EitEntry& lookupEit(const Name& prefix, uint64_t firstSeq)
  {
    auto it = m_eit.find(prefix);
    if (it != m_eit.end() && m_sim.now() - it->second.lastUse > m_options.entryIdleTimeoutUs) {
      m_eit.erase(it);
      it = m_eit.end();
    }
    if (it == m_eit.end()) {
      EitEntry e;
      e.bi = m_options.bundleInterval;
      e.lss = static_cast<int64_t>(firstSeq) - static_cast<int64_t>(e.bi);
      e.les = static_cast<int64_t>(firstSeq) - 1;
      e.lastUse = m_sim.now();
      it = m_eit.emplace(prefix, e).first;
    }
    it->second.lastUse = m_sim.now();
    return it->second;
  }

  DitEntry& lookupDit(const Name& prefix)
  {
    auto it = m_dit.find(prefix);
    if (it != m_dit.end() && m_sim.now() - it->second.lastUse > m_options.entryIdleTimeoutUs) {
      m_dit.erase(it);
      it = m_dit.end();
    }
    if (it == m_dit.end()) {
      it = m_dit.emplace(prefix, DitEntry{}).first;
    }
    it->second.lastUse = m_sim.now();
    return it->second;
  }

  Simulator& m_sim;
  Options m_options;
  Counters m_counters;
  std::map<Name, EitEntry> m_eit;
  std::map<Name, DitEntry> m_dit;
  std::vector<std::vector<uint64_t>>* m_decodeTrace = nullptr;
};

} // namespace blend

#endif // BLEND_BLEND_LINK_HPP
