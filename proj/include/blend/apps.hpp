#ifndef BLEND_APPS_HPP
#define BLEND_APPS_HPP

#include "blend/packet.hpp"
#include "blend/sim-kernel.hpp"

#include <cassert>
#include <cstdint>
#include <functional>
#include <vector>

namespace blend {

/** A synthetic file served as fixed-size chunks named prefix/1 .. prefix/n. */
struct FileSpec {
  Name prefix;
  uint64_t sizeBytes = 0;
  uint32_t chunkPayload = 1460;

  uint64_t nChunks() const
  {
    assert(chunkPayload > 0);
    return (sizeBytes + chunkPayload - 1) / chunkPayload;
  }
};

/** Segment server: exactly one Data per forwarded Interest, nothing for
 *  sequences outside the file (those Interests simply expire).
 */
class ProducerApp {
public:
  using SendData = std::function<void(const DataPacket&)>;

  ProducerApp(FileSpec spec, SendData send)
    : m_spec(std::move(spec))
    , m_send(std::move(send))
  {
  }

  void onInterest(const InterestPacket& interest)
  {
    ++m_interestsSeen;
    const auto& seq = interest.name.seq();
    if (!seq || *seq == 0 || *seq > m_spec.nChunks()) {
      return;
    }
    m_send(DataPacket{interest.name, m_spec.chunkPayload});
  }

  uint64_t interestsSeen() const { return m_interestsSeen; }

private:
  FileSpec m_spec;
  SendData m_send;
  uint64_t m_interestsSeen = 0;
};

/** Producer half of the one-Interest measurement rig: the first Interest
 *  under the prefix triggers a push of every chunk straight onto the wire,
 *  bypassing the forwarder. Deliberately not NDN-conformant; used only to
 *  measure the goodput upper bound of a profile.
 */
class OneInterestProducer {
public:
  using SendData = std::function<void(const DataPacket&)>;

  OneInterestProducer(FileSpec spec, SendData sendToWire)
    : m_spec(std::move(spec))
    , m_send(std::move(sendToWire))
  {
  }

  void onInterest(const InterestPacket&)
  {
    if (m_started) {
      return;
    }
    m_started = true;
    pump();
  }

  /// NIC tx-complete: keeps a short queue of pending chunks at the NIC
  /// instead of materializing the whole file at once.
  void onTxComplete()
  {
    if (m_inNic > 0) {
      --m_inNic;
    }
    if (m_started) {
      pump();
    }
  }

private:
  void pump()
  {
    while (m_inNic < 4 && m_nextSeq <= m_spec.nChunks()) {
      ++m_inNic;
      m_send(DataPacket{m_spec.prefix.withSeq(m_nextSeq++), m_spec.chunkPayload});
    }
  }

  FileSpec m_spec;
  SendData m_send;
  bool m_started = false;
  uint64_t m_nextSeq = 1;
  uint64_t m_inNic = 0;
};

/** Consumer half of the rig: issues a single Interest, then counts pushed
 *  chunks arriving at its link until the file is complete.
 */
class OneInterestConsumer {
public:
  using SendInterest = std::function<void(const InterestPacket&)>;
  using CompletionFn = std::function<void()>;

  OneInterestConsumer(Simulator& sim, FileSpec spec, SendInterest send,
                      CompletionFn onComplete = nullptr)
    : m_sim(sim)
    , m_spec(std::move(spec))
    , m_send(std::move(send))
    , m_onComplete(std::move(onComplete))
    , m_seen(m_spec.nChunks() + 1, false)
  {
  }

  void start()
  {
    InterestPacket interest;
    interest.name = m_spec.prefix.withSeq(1);
    interest.nonce = m_sim.rngStream("one-interest.nonce").nextU32();
    m_send(interest);
  }

  void onData(const DataPacket& data)
  {
    const auto& seq = data.name.seq();
    if (!seq || *seq == 0 || *seq > m_spec.nChunks() || m_seen[*seq]) {
      return;
    }
    m_seen[*seq] = true;
    ++m_received;
    if (m_received == m_spec.nChunks()) {
      m_completionTime = m_sim.now();
      if (m_onComplete) {
        m_onComplete();
      }
    }
  }

  bool complete() const { return m_received == m_spec.nChunks(); }
  TimeUs completionTime() const { return m_completionTime; }
  uint64_t received() const { return m_received; }

private:
  Simulator& m_sim;
  FileSpec m_spec;
  SendInterest m_send;
  CompletionFn m_onComplete;
  std::vector<bool> m_seen;
  uint64_t m_received = 0;
  TimeUs m_completionTime = -1;
};

} // namespace blend

#endif // BLEND_APPS_HPP
