#pragma once
// Byte-exact framed codec for the host<->display link over a reliable
// ordered byte stream. Frame layout:
//
//   0xA5 | type | length | payload[length] | checksum
//
// checksum = XOR fold of type, length and payload. Payloads never exceed
// 255 bytes; there is no byte stuffing, the decoder resynchronizes by
// scanning for the start byte.

#include "taxsim/taxels.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace taxsim {

inline constexpr uint8_t kSof = 0xA5;

// Wire type codes. Commands run 0x01..0x04, responses 0x81..0x85.
enum class FrameType : uint8_t {
    Show = 0x01,
    Clear = 0x02,
    Status = 0x03,
    Ping = 0x04,
    Ack = 0x81,
    Busy = 0x82,
    StatusReply = 0x83,
    Pong = 0x84,
    Nak = 0x85,
};

struct ShowCmd {
    Bitmap frame;
    bool operator==(const ShowCmd&) const = default;
};
struct ClearCmd {
    bool operator==(const ClearCmd&) const = default;
};
struct StatusCmd {
    bool operator==(const StatusCmd&) const = default;
};
struct PingCmd {
    bool operator==(const PingCmd&) const = default;
};
using Command = std::variant<ShowCmd, ClearCmd, StatusCmd, PingCmd>;

struct AckResp {
    bool operator==(const AckResp&) const = default;
};
struct BusyResp {
    bool operator==(const BusyResp&) const = default;
};
// Payload: state byte, set/reset pulse counters (big-endian u16, ledger
// value modulo 2^16), then the shadow frame in canonical byte order.
struct StatusResp {
    uint8_t state_code = 0;
    uint16_t set_pulses = 0;
    uint16_t reset_pulses = 0;
    Bitmap shadow;
    bool operator==(const StatusResp&) const = default;
};
struct PongResp {
    bool operator==(const PongResp&) const = default;
};

enum class NakReason : uint8_t {
    BadSof = 0x01,
    BadChecksum = 0x02,
    UnknownCommand = 0x03,
    LengthMismatch = 0x04,
    BadDims = 0x05,
    HazardAbort = 0x06,  // strict hazard mode stopped the scan
};

struct NakResp {
    uint8_t reason = 0;
    bool operator==(const NakResp&) const = default;
};

using Response = std::variant<AckResp, BusyResp, StatusResp, PongResp, NakResp>;
using Message = std::variant<Command, Response>;

// XOR fold; checksum of the empty span is 0.
uint8_t checksum(std::span<const uint8_t> bytes);

// Throws std::length_error if the payload would exceed one frame.
std::vector<uint8_t> encode(const Command& cmd);
std::vector<uint8_t> encode(const Response& resp);
std::vector<uint8_t> encode(const Message& msg);

enum class DecodeError : uint8_t {
    BadSof,          // no start byte in the buffer
    BadChecksum,     // XOR fold mismatch
    UnknownCommand,  // well-formed frame with an unassigned type code
    LengthMismatch,  // buffer ends mid-frame, or fixed-size payload of wrong length
    BadDims,         // frame-bearing payload does not match the configured dims
};

const char* to_string(DecodeError err);

struct DecodeOutcome {
    std::variant<Message, DecodeError> result;
    std::size_t consumed = 0;  // bytes the caller should drop before retrying

    bool ok() const { return std::holds_alternative<Message>(result); }
    const Message& message() const { return std::get<Message>(result); }
    DecodeError error() const { return std::get<DecodeError>(result); }
};

// One-shot decode of a buffered stream: skips junk ahead of the first
// start byte, parses one frame and leaves trailing bytes for the next
// call. Frame-bearing payloads are validated against `dims`.
DecodeOutcome decode(std::span<const uint8_t> bytes, GridDims dims);

// Incremental decoder for a stream delivered in arbitrary chunks. Junk is
// discarded silently while hunting for a start byte; a corrupted frame
// yields one error and resynchronization continues one byte past its
// false start.
class FrameDecoder {
public:
    explicit FrameDecoder(GridDims dims) : dims_(dims) { dims.validate(); }

    void feed(std::span<const uint8_t> bytes);

    // One message or decode error per call; nullopt = need more bytes.
    std::optional<std::variant<Message, DecodeError>> poll();

    std::size_t discarded() const { return discarded_; }
    std::size_t pending() const { return buf_.size(); }

private:
    GridDims dims_;
    std::vector<uint8_t> buf_;
    std::size_t discarded_ = 0;
};

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace taxsim
