#ifndef BLEND_FORWARDER_HPP
#define BLEND_FORWARDER_HPP

#include "blend/packet.hpp"
#include "blend/sim-kernel.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace blend {

using FaceId = int;

/** Capacity-bounded cache with exact-name match and FIFO eviction. */
class ContentStore {
public:
  explicit ContentStore(size_t capacity = 4096)
    : m_capacity(capacity)
  {
  }

  const DataPacket* find(const Name& name) const
  {
    auto it = m_entries.find(name);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  void insert(const DataPacket& data)
  {
    if (m_capacity == 0) {
      return;
    }
    auto [it, fresh] = m_entries.try_emplace(data.name, data);
    if (!fresh) {
      it->second = data; // refresh in place, FIFO position unchanged
      return;
    }
    m_order.push_back(data.name);
    if (m_entries.size() > m_capacity) {
      m_entries.erase(m_order.front());
      m_order.pop_front();
    }
  }

  size_t size() const { return m_entries.size(); }

private:
  size_t m_capacity;
  std::map<Name, DataPacket> m_entries;
  std::deque<Name> m_order;
};

/** Minimal NDN forwarder: Content Store, PIT with Interest aggregation,
 *  static FIB, nonce-based duplicate detection. Deliberately has no rule for
 *  the BundleTag; a tag present on an Interest is carried through untouched.
 *
 *  An Interest repeating a pending name from a face already recorded for it
 *  (fresh nonce) is treated as a downstream retransmission and forwarded
 *  again, matching NFD strategy behavior; aggregation applies only to new
 *  downstream faces.
 */
class Forwarder {
public:
  enum class InterestAction { ReplyFromCs, Aggregate, Forward, DropDuplicate, NoRoute };
  enum class DataAction { Deliver, DropUnsolicited };

  struct Counters {
    uint64_t interestsIn = 0;
    uint64_t interestsOut = 0;
    uint64_t dataIn = 0;
    uint64_t dataOut = 0;
    uint64_t aggregations = 0;
    uint64_t duplicates = 0;
    uint64_t noRoute = 0;
    uint64_t csHits = 0;
    uint64_t unsolicited = 0;
    uint64_t retransmissions = 0;
  };

  using SendInterest = std::function<void(FaceId, const InterestPacket&)>;
  using SendData = std::function<void(FaceId, const DataPacket&)>;

  Forwarder(Simulator& sim, size_t csCapacity = 4096)
    : m_sim(sim)
    , m_cs(csCapacity)
  {
  }

  void setSendInterest(SendInterest fn) { m_sendInterest = std::move(fn); }
  void setSendData(SendData fn) { m_sendData = std::move(fn); }

  void addRoute(const Name& prefix, FaceId outFace) { m_fib.push_back({prefix, outFace}); }

  const Counters& counters() const { return m_counters; }

  /// When set, every processed Interest name is appended (the Fig.-2 masking
  /// trace: names and order only).
  void enableNameTrace() { m_traceEnabled = true; }
  const std::vector<std::string>& nameTrace() const { return m_nameTrace; }

  size_t pitSize() const { return m_pit.size(); }
  const ContentStore& cs() const { return m_cs; }

  InterestAction receiveInterest(FaceId inFace, const InterestPacket& interest)
  {
    ++m_counters.interestsIn;
    if (m_traceEnabled) {
      m_nameTrace.push_back(interest.name.toUri());
    }

    if (const DataPacket* cached = m_cs.find(interest.name)) {
      ++m_counters.csHits;
      ++m_counters.dataOut;
      m_sendData(inFace, *cached);
      return InterestAction::ReplyFromCs;
    }

    auto it = m_pit.find(interest.name);
    if (it != m_pit.end()) {
      PitEntry& entry = it->second;
      if (entry.nonces.count(interest.nonce) > 0) {
        ++m_counters.duplicates;
        return InterestAction::DropDuplicate;
      }
      entry.nonces.insert(interest.nonce);
      if (entry.inFaces.count(inFace) > 0) {
        // downstream retransmission: forward again, no new in-record
        ++m_counters.retransmissions;
        return forward(interest);
      }
      entry.inFaces.insert(inFace);
      ++m_counters.aggregations;
      return InterestAction::Aggregate;
    }

    FaceId outFace = -1;
    if (!longestPrefixMatch(interest.name, outFace)) {
      ++m_counters.noRoute;
      return InterestAction::NoRoute;
    }

    PitEntry entry;
    entry.nonces.insert(interest.nonce);
    entry.inFaces.insert(inFace);
    Name name = interest.name;
    entry.expiryTimer =
      m_sim.schedule(millisToUs(static_cast<int64_t>(interest.lifetimeMs)),
                     [this, name] { m_pit.erase(name); });
    m_pit.emplace(interest.name, std::move(entry));

    ++m_counters.interestsOut;
    m_sendInterest(outFace, interest);
    return InterestAction::Forward;
  }

  DataAction receiveData(FaceId, const DataPacket& data)
  {
    ++m_counters.dataIn;
    auto it = m_pit.find(data.name);
    if (it == m_pit.end()) {
      ++m_counters.unsolicited;
      return DataAction::DropUnsolicited;
    }
    std::set<FaceId> downstream = std::move(it->second.inFaces);
    m_sim.cancel(it->second.expiryTimer);
    m_pit.erase(it);
    m_cs.insert(data);
    for (FaceId face : downstream) {
      ++m_counters.dataOut;
      m_sendData(face, data);
    }
    return DataAction::Deliver;
  }

private:
  struct PitEntry {
    std::set<uint32_t> nonces;
    std::set<FaceId> inFaces;
    Simulator::EventId expiryTimer;
  };

  struct FibEntry {
    Name prefix;
    FaceId outFace;
  };

  InterestAction forward(const InterestPacket& interest)
  {
    FaceId outFace = -1;
    if (!longestPrefixMatch(interest.name, outFace)) {
      ++m_counters.noRoute;
      return InterestAction::NoRoute;
    }
    ++m_counters.interestsOut;
    m_sendInterest(outFace, interest);
    return InterestAction::Forward;
  }

  bool longestPrefixMatch(const Name& name, FaceId& outFace) const
  {
    size_t bestLen = 0;
    bool found = false;
    for (const auto& e : m_fib) {
      if (e.prefix.isPrefixOf(name) && e.prefix.components().size() + 1 > bestLen) {
        bestLen = e.prefix.components().size() + 1;
        outFace = e.outFace;
        found = true;
      }
    }
    return found;
  }

  Simulator& m_sim;
  ContentStore m_cs;
  std::map<Name, PitEntry> m_pit;
  std::vector<FibEntry> m_fib;
  SendInterest m_sendInterest;
  SendData m_sendData;
  Counters m_counters;
  bool m_traceEnabled = false;
  std::vector<std::string> m_nameTrace;
};

} // namespace blend

#endif // BLEND_FORWARDER_HPP
