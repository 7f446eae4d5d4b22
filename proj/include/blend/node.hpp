#ifndef BLEND_NODE_HPP
#define BLEND_NODE_HPP

#include "blend/blend-link.hpp"
#include "blend/forwarder.hpp"
#include "blend/packet.hpp"
#include "blend/wireless-channel.hpp"

#include <functional>
#include <string>
#include <utility>

namespace blend {

/** One endpoint's stack: application face, forwarder, link adaptation
 *  service, and a wireless NIC attached to the shared channel.
 */
class Node {
public:
  static constexpr FaceId kAppFace = 1;
  static constexpr FaceId kWifiFace = 2;

  Node(Simulator& sim, WirelessChannel& channel, const std::string& name,
       BlendLinkService::Options linkOptions, size_t csCapacity = 4096)
    : m_channel(channel)
    , m_forwarder(sim, csCapacity)
    , m_link(sim, linkOptions)
  {
    m_channelId = channel.attach(name, [this](const FrameTx& f) { onFrame(f); });
    m_forwarder.setSendInterest(
      [this](FaceId face, const InterestPacket& pkt) { sendInterest(face, pkt); });
    m_forwarder.setSendData([this](FaceId face, const DataPacket& pkt) { sendData(face, pkt); });
  }

  void setPeer(int peerChannelId) { m_peer = peerChannelId; }
  int channelId() const { return m_channelId; }

  Forwarder& forwarder() { return m_forwarder; }
  BlendLinkService& link() { return m_link; }
  const WirelessChannel::NodeCounters& nicCounters() const
  {
    return m_channel.counters(m_channelId);
  }

  /// Data the forwarder delivers to the application face.
  void setAppDataSink(std::function<void(const DataPacket&)> fn) { m_appDataSink = std::move(fn); }

  /// Interests the forwarder sends to the application face (producer side).
  void setAppInterestSink(std::function<void(const InterestPacket&)> fn)
  {
    m_appInterestSink = std::move(fn);
  }

  /// When set, Data frames from the wire skip the forwarder entirely
  /// (one-Interest measurement rig).
  void setWireDataBypass(std::function<void(const DataPacket&)> fn)
  {
    m_wireDataBypass = std::move(fn);
  }

  void sendFromApp(const InterestPacket& interest)
  {
    m_forwarder.receiveInterest(kAppFace, interest);
  }

  void sendDataFromApp(const DataPacket& data) { m_forwarder.receiveData(kAppFace, data); }

  /// One-Interest rig: producer pushes Data straight onto the wire.
  void pushDataToWire(const DataPacket& data) { transmitData(data); }

private:
  void sendInterest(FaceId face, const InterestPacket& pkt)
  {
    if (face == kAppFace) {
      if (m_appInterestSink) {
        m_appInterestSink(pkt);
      }
      return;
    }
    InterestPacket out = pkt;
    if (m_link.encodeOutgoing(out) == BlendLinkService::EncodeAction::Suppressed) {
      return;
    }
    FrameTx frame;
    frame.src = m_channelId;
    frame.dst = m_peer;
    frame.kind = FrameKind::Interest;
    frame.wire = encodeInterest(out);
    m_channel.transmit(std::move(frame));
  }

  void sendData(FaceId face, const DataPacket& pkt)
  {
    if (face == kAppFace) {
      if (m_appDataSink) {
        m_appDataSink(pkt);
      }
      return;
    }
    transmitData(pkt);
  }

  void transmitData(const DataPacket& pkt)
  {
    FrameTx frame;
    frame.src = m_channelId;
    frame.dst = m_peer;
    frame.kind = FrameKind::Data;
    frame.wire = encodeData(pkt);
    m_channel.transmit(std::move(frame));
  }

  void onFrame(const FrameTx& frame)
  {
    switch (peekPacketType(frame.wire)) {
      case tlv::Interest: {
        InterestPacket pkt = decodeInterest(frame.wire);
        for (const auto& interest : m_link.decodeIncoming(pkt)) {
          m_forwarder.receiveInterest(kWifiFace, interest);
        }
        break;
      }
      case tlv::Data: {
        DataPacket pkt = decodeData(frame.wire);
        if (m_wireDataBypass) {
          m_wireDataBypass(pkt);
        }
        else {
          m_forwarder.receiveData(kWifiFace, pkt);
        }
        break;
      }
      default:
        throw tlv::DecodeError("unrecognized network-layer packet", 0, peekPacketType(frame.wire));
    }
  }

  WirelessChannel& m_channel;
  Forwarder m_forwarder;
  BlendLinkService m_link;
  int m_channelId = -1;
  int m_peer = -1;
  std::function<void(const DataPacket&)> m_appDataSink;
  std::function<void(const InterestPacket&)> m_appInterestSink;
  std::function<void(const DataPacket&)> m_wireDataBypass;
};

} // namespace blend

#endif // BLEND_NODE_HPP
