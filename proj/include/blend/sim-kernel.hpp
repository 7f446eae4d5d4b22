#ifndef BLEND_SIM_KERNEL_HPP
#define BLEND_SIM_KERNEL_HPP

#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string_view>
#include <utility>

namespace blend {

/// Virtual time in integer microseconds. Integer ticks keep event ordering
/// identical across platforms.
using TimeUs = int64_t;

constexpr TimeUs
millisToUs(int64_t ms)
{
  return ms * 1000;
}

constexpr TimeUs
secondsToUs(int64_t s)
{
  return s * 1000000;
}

/** Deterministic random stream derived from (global seed, label). */
class RngStream {
public:
  explicit RngStream(uint64_t seed)
    : m_engine(seed)
  {
  }

  uint64_t next() { return m_engine(); }

  /// Uniform in [lo, hi], inclusive. Modulo bias is irrelevant at our ranges.
  uint64_t nextRange(uint64_t lo, uint64_t hi)
  {
    assert(lo <= hi);
    return lo + next() % (hi - lo + 1);
  }

  uint32_t nextU32() { return static_cast<uint32_t>(next() >> 32); }

  /// Uniform in [0, 1).
  double nextUnit() { return double(next() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 m_engine;
};

/** Single-threaded discrete-event engine. Events with equal fire time run in
 *  scheduling order; the clock advances only by event execution.
 */
class Simulator {
public:
  struct EventId {
    TimeUs at = -1;
    uint64_t seq = 0;
  };

  explicit Simulator(uint64_t seed = 0)
    : m_seed(seed)
  {
  }

  TimeUs now() const { return m_now; }

  EventId schedule(TimeUs delay, std::function<void()> action)
  {
    assert(delay >= 0);
    return scheduleAt(m_now + delay, std::move(action));
  }

  EventId scheduleAt(TimeUs t, std::function<void()> action)
  {
    assert(t >= m_now);
    EventId id{t, m_nextSeq++};
    m_queue.emplace(std::make_pair(id.at, id.seq), std::move(action));
    return id;
  }

  /// @return true when the event existed and had not fired yet.
  bool cancel(const EventId& id)
  {
    return m_queue.erase(std::make_pair(id.at, id.seq)) > 0;
  }

  /// Execute every event with fire time <= t; the clock ends at t.
  size_t runUntil(TimeUs t)
  {
    size_t executed = 0;
    while (!m_queue.empty() && m_queue.begin()->first.first <= t) {
      auto it = m_queue.begin();
      m_now = it->first.first;
      auto action = std::move(it->second);
      m_queue.erase(it);
      action();
      ++executed;
    }
    if (t > m_now) {
      m_now = t;
    }
    return executed;
  }

  /// Run until the queue drains or the deadline passes; @return events executed.
  size_t run(TimeUs deadline)
  {
    size_t executed = 0;
    while (!m_queue.empty() && m_queue.begin()->first.first <= deadline) {
      auto it = m_queue.begin();
      m_now = it->first.first;
      auto action = std::move(it->second);
      m_queue.erase(it);
      action();
      ++executed;
    }
    return executed;
  }

  bool pending() const { return !m_queue.empty(); }

  /// Pure function of (global seed, label): same label, same stream.
  RngStream rngStream(std::string_view label) const
  {
    // FNV-1a, fixed here rather than std::hash so streams are stable
    // across standard libraries
    uint64_t h = 14695981039346656037ull;
    for (int i = 0; i < 8; ++i) {
      h = (h ^ ((m_seed >> (8 * i)) & 0xFF)) * 1099511628211ull;
    }
    for (char c : label) {
      h = (h ^ static_cast<uint8_t>(c)) * 1099511628211ull;
    }
    // splitmix64 finalizer to decorrelate nearby labels
    h += 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    h = h ^ (h >> 31);
    return RngStream(h);
  }

  uint64_t seed() const { return m_seed; }

private:
  TimeUs m_now = 0;
  uint64_t m_nextSeq = 0;
  uint64_t m_seed;
  std::map<std::pair<TimeUs, uint64_t>, std::function<void()>> m_queue;
};

} // namespace blend

#endif // BLEND_SIM_KERNEL_HPP
