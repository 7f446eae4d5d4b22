#ifndef BLEND_TLV_HPP
#define BLEND_TLV_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blend {
namespace tlv {

// TLV-TYPE numbers used on the wire. The core types follow the NDN packet
// format assignments; BundleTag sits in the application-reserved range.
enum : uint32_t {
  Interest = 5,
  Data = 6,
  Name = 7,
  GenericNameComponent = 8,
  Nonce = 10,
  InterestLifetime = 12,
  Content = 21,
  BundleTag = 850,
};

/** Thrown when a TLV stream cannot be parsed; carries the byte offset of the
 *  offending element and its TLV-TYPE (0 when the type itself was unreadable).
 */
class DecodeError : public std::runtime_error {
public:
  DecodeError(const std::string& reason, size_t offset, uint32_t type)
    : std::runtime_error(reason + " (offset " + std::to_string(offset) +
                         ", type " + std::to_string(type) + ")")
    , m_offset(offset)
    , m_type(type)
  {
  }

  size_t offset() const noexcept { return m_offset; }
  uint32_t type() const noexcept { return m_type; }

private:
  size_t m_offset;
  uint32_t m_type;
};

constexpr size_t
sizeofVarNum(uint32_t n)
{
  return n < 0xFD ? 1 : n <= 0xFFFF ? 3 : 5;
}

inline void
appendVarNum(std::vector<uint8_t>& out, uint32_t n)
{
  if (n < 0xFD) {
    out.push_back(static_cast<uint8_t>(n));
  }
  else if (n <= 0xFFFF) {
    out.push_back(0xFD);
    out.push_back(static_cast<uint8_t>(n >> 8));
    out.push_back(static_cast<uint8_t>(n));
  }
  else {
    out.push_back(0xFE);
    out.push_back(static_cast<uint8_t>(n >> 24));
    out.push_back(static_cast<uint8_t>(n >> 16));
    out.push_back(static_cast<uint8_t>(n >> 8));
    out.push_back(static_cast<uint8_t>(n));
  }
}

/// @return consumed bytes, or 0 when the input is too short.
inline size_t
readVarNum(std::span<const uint8_t> in, uint32_t& n)
{
  if (in.size() >= 1 && in[0] < 0xFD) {
    n = in[0];
    return 1;
  }
  if (in.size() >= 3 && in[0] == 0xFD) {
    n = (uint32_t(in[1]) << 8) | in[2];
    return 3;
  }
  if (in.size() >= 5 && in[0] == 0xFE) {
    n = (uint32_t(in[1]) << 24) | (uint32_t(in[2]) << 16) | (uint32_t(in[3]) << 8) | in[4];
    return 5;
  }
  return 0;
}

// nonNegativeInteger: shortest of 1/2/4/8 big-endian bytes.
inline size_t
sizeofNonNegative(uint64_t v)
{
  return v <= 0xFF ? 1 : v <= 0xFFFF ? 2 : v <= 0xFFFFFFFF ? 4 : 8;
}

inline void
appendNonNegative(std::vector<uint8_t>& out, uint64_t v)
{
  size_t n = sizeofNonNegative(v);
  for (size_t i = n; i > 0; --i) {
    out.push_back(static_cast<uint8_t>(v >> (8 * (i - 1))));
  }
}

inline uint64_t
readNonNegative(std::span<const uint8_t> value, size_t offset, uint32_t type)
{
  size_t n = value.size();
  if (n != 1 && n != 2 && n != 4 && n != 8) {
    throw DecodeError("bad nonNegativeInteger length " + std::to_string(n), offset, type);
  }
  uint64_t v = 0;
  for (uint8_t b : value) {
    v = (v << 8) | b;
  }
  return v;
}

/** One decoded TLV element: type, value bytes, and where it started. */
struct Element {
  uint32_t type = 0;
  std::span<const uint8_t> value;
  size_t offset = 0;      // offset of the type octet within the whole input
  size_t valueOffset = 0; // offset of the first value octet
};

/** Sequential reader over a TLV value. Offsets are reported relative to the
 *  original packet buffer so decode errors point at real wire positions.
 */
class Reader {
public:
  Reader(std::span<const uint8_t> input, size_t baseOffset = 0)
    : m_input(input)
    , m_base(baseOffset)
  {
  }

  bool atEnd() const { return m_pos == m_input.size(); }

  size_t offset() const { return m_base + m_pos; }

  /// Read the next TLV element; throws DecodeError on truncation.
  Element next()
  {
    size_t start = m_pos;
    uint32_t type = 0;
    size_t nT = readVarNum(m_input.subspan(m_pos), type);
    if (nT == 0) {
      throw DecodeError("truncated TLV type", m_base + start, 0);
    }
    m_pos += nT;
    uint32_t length = 0;
    size_t nL = readVarNum(m_input.subspan(m_pos), length);
    if (nL == 0) {
      throw DecodeError("truncated TLV length", m_base + start, type);
    }
    m_pos += nL;
    if (m_input.size() - m_pos < length) {
      throw DecodeError("TLV value exceeds enclosing element", m_base + start, type);
    }
    Element e{type, m_input.subspan(m_pos, length), m_base + start, m_base + m_pos};
    m_pos += length;
    return e;
  }

  /// Read the next element and require it to have the given type.
  Element expect(uint32_t type)
  {
    size_t at = offset();
    if (atEnd()) {
      throw DecodeError("missing expected TLV", at, type);
    }
    Element e = next();
    if (e.type != type) {
      throw DecodeError("unexpected TLV type, wanted " + std::to_string(type), e.offset, e.type);
    }
    return e;
  }

private:
  std::span<const uint8_t> m_input;
  size_t m_base;
  size_t m_pos = 0;
};

} // namespace tlv
} // namespace blend

#endif // BLEND_TLV_HPP
