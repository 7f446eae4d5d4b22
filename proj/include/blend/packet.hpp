#ifndef BLEND_PACKET_HPP
#define BLEND_PACKET_HPP

#include "blend/tlv.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blend {

/** Hierarchical packet name: a non-empty prefix of UTF-8 components plus an
 *  optional chunk sequence number, always the final component on the wire.
 *
 *  The seq is encoded as its minimal decimal string, so a prefix component
 *  that itself looks like a minimal decimal number would not round-trip;
 *  such prefixes are rejected at construction.
 */
class Name {
public:
  Name() = default;

  explicit Name(std::vector<std::string> components, std::optional<uint64_t> seq = std::nullopt)
    : m_components(std::move(components))
    , m_seq(seq)
  {
  }

  /// Parse "/a/b" into prefix components (no seq detection).
  static Name fromUri(const std::string& uri)
  {
    Name n;
    std::string comp;
    for (size_t i = (uri.size() > 0 && uri[0] == '/') ? 1 : 0; i <= uri.size(); ++i) {
      if (i == uri.size() || uri[i] == '/') {
        if (!comp.empty()) {
          n.m_components.push_back(comp);
          comp.clear();
        }
      }
      else {
        comp.push_back(uri[i]);
      }
    }
    return n;
  }

  const std::vector<std::string>& components() const { return m_components; }
  const std::optional<uint64_t>& seq() const { return m_seq; }

  bool empty() const { return m_components.empty() && !m_seq; }

  /// Copy with the seq suffix replaced.
  Name withSeq(uint64_t seq) const
  {
    Name n(*this);
    n.m_seq = seq;
    return n;
  }

  /// Copy without the seq suffix (the per-flow prefix).
  Name prefix() const
  {
    Name n(*this);
    n.m_seq.reset();
    return n;
  }

  bool isPrefixOf(const Name& other) const
  {
    if (m_seq) {
      return *this == other;
    }
    if (m_components.size() > other.m_components.size()) {
      return false;
    }
    return std::equal(m_components.begin(), m_components.end(), other.m_components.begin());
  }

  std::string toUri() const
  {
    std::string s;
    for (const auto& c : m_components) {
      s += '/';
      s += c;
    }
    if (m_seq) {
      s += '/';
      s += std::to_string(*m_seq);
    }
    return s.empty() ? "/" : s;
  }

  /// True when a wire component is parsed back as a seq suffix.
  static bool isMinimalDecimal(const std::string& c)
  {
    if (c.empty() || c.size() > 20) {
      return false;
    }
    if (c.size() > 1 && c[0] == '0') {
      return false;
    }
    if (!std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      return false;
    }
    // reject values above 2^64-1
    static const std::string max = "18446744073709551615";
    return c.size() < 20 || c <= max;
  }

  friend auto operator<=>(const Name&, const Name&) = default;

private:
  std::vector<std::string> m_components;
  std::optional<uint64_t> m_seq;
};

/** The 64-bit bundle tag. Transport phase: field1 bit 31 is the RTx flag,
 *  field2 carries the congestion window. Link phase: field1 = SS, field2 = ES.
 */
struct BundleTag {
  uint32_t field1 = 0;
  uint32_t field2 = 0;

  static constexpr uint32_t kRtxFlag = 0x80000000u;

  static BundleTag forTransport(bool isRtx, uint32_t cwnd)
  {
    return BundleTag{isRtx ? kRtxFlag : 0u, cwnd};
  }

  static BundleTag forLink(uint32_t ss, uint32_t es) { return BundleTag{ss, es}; }

  bool isRtx() const { return (field1 & kRtxFlag) != 0; }
  uint32_t cwnd() const { return field2; }
  uint32_t startSeq() const { return field1; }
  uint32_t endSeq() const { return field2; }

  friend bool operator==(const BundleTag&, const BundleTag&) = default;
};

/// Pack (field1, field2) with field1 in the upper 32 bits.
constexpr uint64_t
packBundleTag(uint32_t field1, uint32_t field2)
{
  return (uint64_t(field1) << 32) | uint64_t(field2);
}

/// Exact inverse of packBundleTag.
constexpr BundleTag
unpackBundleTag(uint64_t raw)
{
  return BundleTag{static_cast<uint32_t>(raw >> 32), static_cast<uint32_t>(raw)};
}

struct InterestPacket {
  Name name;
  uint32_t nonce = 0;
  uint64_t lifetimeMs = 4000;
  std::optional<BundleTag> btag;

  friend bool operator==(const InterestPacket&, const InterestPacket&) = default;
};

struct DataPacket {
  Name name;
  uint32_t payloadLen = 0;

  friend bool operator==(const DataPacket&, const DataPacket&) = default;
};

namespace detail {

inline void
appendNameTlv(std::vector<uint8_t>& out, const Name& name)
{
  std::vector<uint8_t> value;
  auto appendComponent = [&value](const std::string& c) {
    tlv::appendVarNum(value, tlv::GenericNameComponent);
    tlv::appendVarNum(value, static_cast<uint32_t>(c.size()));
    value.insert(value.end(), c.begin(), c.end());
  };
  for (const auto& c : name.components()) {
    appendComponent(c);
  }
  if (name.seq()) {
    appendComponent(std::to_string(*name.seq()));
  }
  tlv::appendVarNum(out, tlv::Name);
  tlv::appendVarNum(out, static_cast<uint32_t>(value.size()));
  out.insert(out.end(), value.begin(), value.end());
}

inline Name
parseNameTlv(const tlv::Element& e)
{
  std::vector<std::string> comps;
  tlv::Reader r(e.value, e.valueOffset);
  while (!r.atEnd()) {
    tlv::Element c = r.expect(tlv::GenericNameComponent);
    comps.emplace_back(c.value.begin(), c.value.end());
  }
  if (comps.empty()) {
    throw tlv::DecodeError("empty Name", e.offset, tlv::Name);
  }
  std::optional<uint64_t> seq;
  if (comps.size() >= 2 && Name::isMinimalDecimal(comps.back())) {
    seq = std::stoull(comps.back());
    comps.pop_back();
  }
  return Name(std::move(comps), seq);
}

} // namespace detail

/** Encode an Interest as Name, Nonce, InterestLifetime, then the optional
 *  BundleTag (8 value bytes, field1 in the upper word).
 */
inline std::vector<uint8_t>
encodeInterest(const InterestPacket& pkt)
{
  std::vector<uint8_t> value;
  detail::appendNameTlv(value, pkt.name);

  tlv::appendVarNum(value, tlv::Nonce);
  tlv::appendVarNum(value, 4);
  for (int i = 3; i >= 0; --i) {
    value.push_back(static_cast<uint8_t>(pkt.nonce >> (8 * i)));
  }

  tlv::appendVarNum(value, tlv::InterestLifetime);
  tlv::appendVarNum(value, static_cast<uint32_t>(tlv::sizeofNonNegative(pkt.lifetimeMs)));
  tlv::appendNonNegative(value, pkt.lifetimeMs);

  if (pkt.btag) {
    uint64_t raw = packBundleTag(pkt.btag->field1, pkt.btag->field2);
    tlv::appendVarNum(value, tlv::BundleTag);
    tlv::appendVarNum(value, 8);
    for (int i = 7; i >= 0; --i) {
      value.push_back(static_cast<uint8_t>(raw >> (8 * i)));
    }
  }

  std::vector<uint8_t> out;
  tlv::appendVarNum(out, tlv::Interest);
  tlv::appendVarNum(out, static_cast<uint32_t>(value.size()));
  out.insert(out.end(), value.begin(), value.end());
  return out;
}

inline InterestPacket
decodeInterest(std::span<const uint8_t> wire)
{
  tlv::Reader top(wire);
  tlv::Element outer = top.expect(tlv::Interest);
  if (!top.atEnd()) {
    throw tlv::DecodeError("trailing bytes after Interest", top.offset(), tlv::Interest);
  }

  tlv::Reader r(outer.value, outer.valueOffset);
  InterestPacket pkt;
  pkt.name = detail::parseNameTlv(r.expect(tlv::Name));

  tlv::Element nonce = r.expect(tlv::Nonce);
  if (nonce.value.size() != 4) {
    throw tlv::DecodeError("Nonce must be 4 bytes", nonce.offset, tlv::Nonce);
  }
  pkt.nonce = (uint32_t(nonce.value[0]) << 24) | (uint32_t(nonce.value[1]) << 16) |
              (uint32_t(nonce.value[2]) << 8) | uint32_t(nonce.value[3]);

  tlv::Element lft = r.expect(tlv::InterestLifetime);
  pkt.lifetimeMs = tlv::readNonNegative(lft.value, lft.offset, tlv::InterestLifetime);

  if (!r.atEnd()) {
    tlv::Element bt = r.expect(tlv::BundleTag);
    if (bt.value.size() != 8) {
      throw tlv::DecodeError("BundleTag must be 8 bytes", bt.offset, tlv::BundleTag);
    }
    uint64_t raw = 0;
    for (uint8_t b : bt.value) {
      raw = (raw << 8) | b;
    }
    pkt.btag = unpackBundleTag(raw);
    if (!r.atEnd()) {
      throw tlv::DecodeError("trailing bytes after BundleTag", r.offset(), tlv::Interest);
    }
  }
  return pkt;
}

/// Data payload bytes are synthetic zeros; only the length is meaningful.
inline std::vector<uint8_t>
encodeData(const DataPacket& pkt)
{
  std::vector<uint8_t> value;
  detail::appendNameTlv(value, pkt.name);
  tlv::appendVarNum(value, tlv::Content);
  tlv::appendVarNum(value, pkt.payloadLen);
  value.insert(value.end(), pkt.payloadLen, 0);

  std::vector<uint8_t> out;
  tlv::appendVarNum(out, tlv::Data);
  tlv::appendVarNum(out, static_cast<uint32_t>(value.size()));
  out.insert(out.end(), value.begin(), value.end());
  return out;
}

inline DataPacket
decodeData(std::span<const uint8_t> wire)
{
  tlv::Reader top(wire);
  tlv::Element outer = top.expect(tlv::Data);
  if (!top.atEnd()) {
    throw tlv::DecodeError("trailing bytes after Data", top.offset(), tlv::Data);
  }

  tlv::Reader r(outer.value, outer.valueOffset);
  DataPacket pkt;
  pkt.name = detail::parseNameTlv(r.expect(tlv::Name));
  tlv::Element content = r.expect(tlv::Content);
  pkt.payloadLen = static_cast<uint32_t>(content.value.size());
  if (!r.atEnd()) {
    throw tlv::DecodeError("trailing bytes after Content", r.offset(), tlv::Data);
  }
  return pkt;
}

/// Peek the outermost TLV type of a wire buffer (0 when unreadable).
inline uint32_t
peekPacketType(std::span<const uint8_t> wire)
{
  uint32_t t = 0;
  return tlv::readVarNum(wire, t) > 0 ? t : 0;
}

} // namespace blend

#endif // BLEND_PACKET_HPP
